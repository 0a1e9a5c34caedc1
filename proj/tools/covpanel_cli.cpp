// covpanel: coverage-aware panel construction and volatility-distortion CLI.
//
// Subcommands:
//   simulate  write a synthetic corpus (ingestion layout + ground truth)
//   ingest    parse a corpus; write availability matrix, metadata, report
//   analyze   run the distortion pipeline; write records, summaries, figure data
//   report    render a human-readable summary from an analysis directory
//
// Exit codes: 0 success, 2 configuration/usage error, 3 ingest failure,
// 4 analysis failure.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "covpanel/covpanel.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace covpanel;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIngest = 3;
constexpr int kExitAnalysis = 4;

struct IngestFailure : Error {
    using Error::Error;
};

TradingWeek parse_trading_week(const std::string& text) {
    if (text == "mon-fri") return TradingWeek::five_day();
    if (text == "mon-sun") return TradingWeek::seven_day();
    static constexpr const char* names[7] = {"mon", "tue", "wed", "thu", "fri", "sat", "sun"};
    TradingWeek week;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        bool found = false;
        for (int i = 0; i < 7; ++i) {
            if (token == names[i]) {
                week.days[static_cast<std::size_t>(i)] = true;
                found = true;
            }
        }
        if (!found)
            throw ConfigError("unknown trading-week day '" + token +
                              "' (use mon-fri, mon-sun, or a comma list like mon,tue,wed)");
    }
    if (week.count() == 0) throw ConfigError("trading week '" + text + "' has no days");
    return week;
}

std::string trading_week_to_string(const TradingWeek& week) {
    static constexpr const char* names[7] = {"mon", "tue", "wed", "thu", "fri", "sat", "sun"};
    std::string out;
    for (int i = 0; i < 7; ++i) {
        if (!week.days[static_cast<std::size_t>(i)]) continue;
        if (!out.empty()) out += ',';
        out += names[i];
    }
    return out;
}

CsvColumnMap parse_column_map(const std::string& text) {
    CsvColumnMap columns;
    if (text.empty()) return columns;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            throw ConfigError("bad --columns entry '" + token + "' (expected name=header)");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "date") columns.date = value;
        else if (key == "open") columns.open = value;
        else if (key == "high") columns.high = value;
        else if (key == "low") columns.low = value;
        else if (key == "close") columns.close = value;
        else if (key == "volume") columns.volume = value;
        else throw ConfigError("unknown --columns key '" + key + "'");
    }
    return columns;
}

void write_text_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
}

void write_json_file(const fs::path& path, const ordered_json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

// Runs fn(i) for i in [0, n) on a small worker pool; exceptions are
// captured per index so a single bad instrument cannot take down the run.
std::vector<std::optional<std::string>> parallel_for(std::size_t n, unsigned threads,
                                                     const std::function<void(std::size_t)>& fn) {
    std::vector<std::optional<std::string>> errors(n);
    if (n == 0) return errors;
    unsigned n_threads = threads == 0 ? std::thread::hardware_concurrency() : threads;
    n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(n)));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return errors;
}

// ---- simulate --------------------------------------------------------------

struct SimulateOptions {
    std::string out_dir;
    int n_instruments = 20;
    std::string panel_start = "2017-01-02";
    std::string panel_end = "2024-12-31";
    int listing_spread_days = 750;
    std::string trading_week = "mon-fri";
    double holiday_rate = 0.05;
    double omega = 2e-6;
    double alpha = 0.08;
    double beta = 0.90;
    double mu = 0.0;
    std::uint64_t seed = 42;
};

int run_simulate(const SimulateOptions& opt) {
    SyntheticSpec spec;
    spec.n_instruments = opt.n_instruments;
    spec.panel_start = Date::parse_iso(opt.panel_start);
    spec.panel_end = Date::parse_iso(opt.panel_end);
    spec.listing_spread_days = opt.listing_spread_days;
    spec.trading_week = parse_trading_week(opt.trading_week);
    spec.holiday_rate = opt.holiday_rate;
    spec.garch_params = {{opt.mu, opt.omega, opt.alpha, opt.beta}};
    spec.seed = opt.seed;
    validate_spec(spec);

    const auto universe = make_universe(spec);
    if (universe.empty())
        std::cerr << "warning: n-instruments is 0, writing an empty corpus\n";

    const fs::path out(opt.out_dir);
    write_universe_corpus(universe, out / "adjusted", out / "unadjusted");

    ordered_json truth;
    truth["seed"] = spec.seed;
    truth["panel_start"] = spec.panel_start.to_iso();
    truth["panel_end"] = spec.panel_end.to_iso();
    truth["trading_week"] = trading_week_to_string(spec.trading_week);
    truth["holiday_rate"] = spec.holiday_rate;
    truth["listing_spread_days"] = spec.listing_spread_days;
    ordered_json instruments = ordered_json::array();
    for (const auto& series : universe) {
        const auto w = coverage_window(series);
        instruments.push_back({{"ticker", series.ticker},
                               {"listing_date", w.first_date.to_iso()},
                               {"last_date", w.last_date.to_iso()},
                               {"trading_days", w.trading_days},
                               {"p0", series.rows.front().close},
                               {"mu", opt.mu},
                               {"omega", opt.omega},
                               {"alpha", opt.alpha},
                               {"beta", opt.beta}});
    }
    truth["instruments"] = instruments;
    write_json_file(out / "ground_truth.json", truth);

    std::cout << "wrote " << universe.size() << " instruments to " << out.string() << "\n";
    return kExitOk;
}

// ---- ingest ----------------------------------------------------------------

struct IngestOptions {
    std::string adjusted_dir;
    std::string unadjusted_dir;
    std::string metadata_path;
    std::string out_dir;
    std::string columns;
};

Corpus load_corpus_or_fail(const std::string& adjusted, const std::string& unadjusted,
                           const std::string& metadata, const std::string& columns) {
    CorpusLayout layout;
    layout.adjusted_dir = adjusted;
    layout.unadjusted_dir = unadjusted;
    if (!metadata.empty()) layout.metadata_path = metadata;
    try {
        return load_corpus(layout, parse_column_map(columns));
    } catch (const ConfigError&) {
        throw;  // bad layout is a configuration problem
    } catch (const std::exception& e) {
        throw IngestFailure(std::string("ingest failed: ") + e.what());
    }
}

int run_ingest(const IngestOptions& opt) {
    if (opt.adjusted_dir.empty() && opt.unadjusted_dir.empty())
        throw ConfigError("ingest needs --adjusted and/or --unadjusted");
    const Corpus corpus =
        load_corpus_or_fail(opt.adjusted_dir, opt.unadjusted_dir, opt.metadata_path, opt.columns);
    const AvailabilityMatrix matrix = build_availability_matrix(corpus.instruments, corpus.calendar);

    const fs::path out(opt.out_dir);
    fs::create_directories(out);

    std::ostringstream matrix_csv;
    export_matrix_csv(matrix, matrix_csv);
    write_text_file(out / "availability_matrix.csv", matrix_csv.str());
    write_json_file(out / "metadata.json", metadata_to_json(corpus.metadata));
    write_json_file(out / "ingest_report.json", report_to_json(corpus.report));

    std::cout << "ingested " << corpus.report.instruments_loaded << " instruments, "
              << corpus.report.rows_loaded << " rows (" << corpus.report.warnings.size()
              << " warnings, " << corpus.report.rejects.size() << " rejects)\n";
    return kExitOk;
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeOptions {
    std::string adjusted_dir;
    std::string unadjusted_dir;
    std::string metadata_path;
    std::string out_dir;
    std::string columns;
    std::string naive = "forward";
    std::string version = "unadjusted";
    std::string listed_after = "2016-12-31";
    std::int64_t min_trading_days = 400;
    double split_fraction = 0.8;
    double breakdown_threshold = 0.999;
    int max_iterations = 2000;
    unsigned threads = 0;
    int histogram_bins = 20;
    bool skip_arima = false;
};

struct ArimaStatRow {
    std::string ticker;
    Construction construction = Construction::CoverageAware;
    std::int64_t observations = 0;
    std::optional<double> return_std;
    std::optional<double> aic;
    std::optional<double> bic;
    std::optional<double> rmse;
    std::optional<double> mae;
};

struct GarchFitRow {
    std::string ticker;
    std::string construction;
    GarchFit fit;
};

struct InstrumentAnalysis {
    std::vector<DistortionRecord> records;
    std::vector<ArimaStatRow> arima_rows;
    std::vector<GarchFitRow> garch_fits;
};

ArimaStatRow arima_stats_for(const std::string& ticker, const PriceSeries& prices,
                             double split_fraction, const FitConfig& fit_config) {
    ArimaStatRow row;
    row.ticker = ticker;
    row.construction = prices.construction;
    row.observations = static_cast<std::int64_t>(prices.points.size());
    const auto values = return_values(log_returns(prices));
    row.return_std = sample_std(values);
    try {
        ArimaFit fit;
        try {
            fit = fit_arima101(values, fit_config);
        } catch (const ArimaConvergenceFailure& e) {
            fit = e.best;
        }
        row.aic = fit.aic;
        row.bic = fit.bic;
    } catch (const InsufficientData&) {
    }
    try {
        const auto m = rolling_forecast(values, split_fraction, fit_config);
        row.rmse = m.rmse;
        row.mae = m.mae;
    } catch (const InsufficientData&) {
    }
    return row;
}

int run_analyze(const AnalyzeOptions& opt) {
    if (opt.adjusted_dir.empty() && opt.unadjusted_dir.empty())
        throw ConfigError("analyze needs --adjusted and/or --unadjusted");
    if (opt.naive != "forward" && opt.naive != "backward" && opt.naive != "both")
        throw ConfigError("--naive must be forward, backward, or both");
    if (opt.version != "adjusted" && opt.version != "unadjusted")
        throw ConfigError("--version must be adjusted or unadjusted");

    const DatasetVersion version =
        opt.version == "adjusted" ? DatasetVersion::Adjusted : DatasetVersion::Unadjusted;
    std::vector<NaiveKind> kinds;
    if (opt.naive == "forward" || opt.naive == "both") kinds.push_back(NaiveKind::ForwardFilled);
    if (opt.naive == "backward" || opt.naive == "both") kinds.push_back(NaiveKind::BackwardFilled);

    const Corpus corpus =
        load_corpus_or_fail(opt.adjusted_dir, opt.unadjusted_dir, opt.metadata_path, opt.columns);
    const Date panel_start = corpus.calendar.panel_start();

    SelectionCriteria criteria;
    criteria.listed_after = Date::parse_iso(opt.listed_after);
    criteria.min_trading_days = opt.min_trading_days;
    const auto selected = select_instruments(corpus.metadata, criteria, panel_start, version);
    if (selected.empty()) throw EmptySample("selection matched no instruments");

    FitConfig fit_config;
    fit_config.max_iterations = opt.max_iterations;
    fit_config.breakdown_threshold = opt.breakdown_threshold;

    std::vector<const InstrumentSeries*> series_by_index;
    for (const auto& ticker : selected) {
        const auto it = std::lower_bound(
            corpus.instruments.begin(), corpus.instruments.end(), ticker,
            [](const InstrumentRecord& r, const std::string& t) { return r.ticker < t; });
        const auto& series =
            version == DatasetVersion::Adjusted ? it->adjusted : it->unadjusted;
        series_by_index.push_back(&*series);
    }

    std::vector<InstrumentAnalysis> results(selected.size());
    const auto errors = parallel_for(selected.size(), opt.threads, [&](std::size_t i) {
        const InstrumentSeries& series = *series_by_index[i];
        InstrumentAnalysis& out = results[i];
        bool aware_fit_recorded = false;
        for (NaiveKind kind : kinds) {
            GarchFitPair fits;
            auto [ret_std, garch] = analyze_instrument(series, kind, panel_start, fit_config, &fits);
            out.records.push_back(std::move(ret_std));
            out.records.push_back(std::move(garch));
            if (!aware_fit_recorded) {
                out.garch_fits.push_back({series.ticker, "coverage_aware", fits.aware});
                aware_fit_recorded = true;
            }
            out.garch_fits.push_back(
                {series.ticker,
                 kind == NaiveKind::ForwardFilled ? "naive_forward_filled" : "naive_backward_filled",
                 fits.naive});
        }
        if (!opt.skip_arima) {
            out.arima_rows.push_back(arima_stats_for(series.ticker, coverage_aware(series),
                                                     opt.split_fraction, fit_config));
            for (NaiveKind kind : kinds) {
                const PriceSeries prices = kind == NaiveKind::ForwardFilled
                                               ? naive_forward_fill(series)
                                               : naive_backward_fill(series, panel_start);
                out.arima_rows.push_back(
                    arima_stats_for(series.ticker, prices, opt.split_fraction, fit_config));
            }
        }
    });

    std::vector<DistortionRecord> records;
    std::vector<ArimaStatRow> arima_rows;
    std::vector<GarchFitRow> garch_fits;
    std::size_t failed = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (errors[i]) {
            ++failed;
            std::cerr << "warning: " << selected[i] << ": " << *errors[i] << "\n";
            continue;
        }
        for (auto& r : results[i].records) records.push_back(std::move(r));
        for (auto& r : results[i].arima_rows) arima_rows.push_back(std::move(r));
        for (auto& r : results[i].garch_fits) garch_fits.push_back(std::move(r));
    }
    if (records.empty()) throw EmptySample("every selected instrument failed to analyze");

    // single writer stage
    const fs::path out(opt.out_dir);
    fs::create_directories(out);

    std::ostringstream records_csv;
    write_records_csv(records, records_csv);
    write_text_file(out / "distortion_records.csv", records_csv.str());

    ordered_json fits_json = ordered_json::array();
    for (const auto& row : garch_fits)
        fits_json.push_back(garch_fit_to_json(row.ticker, row.construction, row.fit));
    write_json_file(out / "garch_fits.json", fits_json);

    ordered_json summary;
    summary["panel_start"] = panel_start.to_iso();
    summary["panel_end"] = corpus.calendar.panel_end().to_iso();
    summary["version"] = opt.version;
    summary["listed_after"] = opt.listed_after;
    summary["min_trading_days"] = opt.min_trading_days;
    summary["selected"] = selected;
    summary["analyzed"] = selected.size() - failed;
    ordered_json summaries = ordered_json::array();
    for (NaiveKind kind : kinds) {
        for (DistortionMeasure measure :
             {DistortionMeasure::ReturnStd, DistortionMeasure::GarchUnconditionalVariance}) {
            std::vector<DistortionRecord> group;
            for (const auto& r : records)
                if (r.measure == measure && r.naive_kind == kind) group.push_back(r);
            if (group.empty()) continue;
            ordered_json entry;
            entry["measure"] = to_string(measure);
            entry["naive_kind"] = to_string(kind);
            try {
                const DistortionSummary s = summarize(group);
                entry["n"] = s.n;
                entry["mean"] = s.mean;
                entry["median"] = s.median;
                entry["frac_positive"] = s.frac_positive;
                entry["sign_test_p"] = std::isnan(s.sign_test_p) ? ordered_json(nullptr)
                                                                 : ordered_json(s.sign_test_p);
                entry["t_stat"] =
                    std::isnan(s.t_stat) ? ordered_json(nullptr) : ordered_json(s.t_stat);
                entry["t_test_p"] =
                    std::isnan(s.t_test_p) ? ordered_json(nullptr) : ordered_json(s.t_test_p);
                entry["breakdown_count"] = s.breakdown_count;
            } catch (const EmptySample&) {
                entry["n"] = 0;
                std::int64_t breakdowns = 0;
                for (const auto& r : group)
                    if (r.garch_breakdown) ++breakdowns;
                entry["breakdown_count"] = breakdowns;
            }
            summaries.push_back(std::move(entry));
        }
    }
    summary["summaries"] = summaries;
    write_json_file(out / "summary.json", summary);

    for (NaiveKind kind : kinds) {
        std::vector<DistortionRecord> group;
        for (const auto& r : records)
            if (r.naive_kind == kind) group.push_back(r);
        const std::string suffix = to_string(kind);
        std::ostringstream hist, box, scatter;
        write_histogram_csv(group, opt.histogram_bins, hist);
        write_five_number_csv(group, box);
        write_padding_scatter_csv(group, scatter);
        write_text_file(out / ("distortion_histogram_" + suffix + ".csv"), hist.str());
        write_text_file(out / ("distortion_quartiles_" + suffix + ".csv"), box.str());
        write_text_file(out / ("distortion_vs_padding_" + suffix + ".csv"), scatter.str());
    }

    if (!opt.skip_arima) {
        std::ostringstream csv;
        csv << "ticker,construction,observations,return_std,aic,bic,rmse,mae\n";
        auto cell = [](const std::optional<double>& v) {
            return v ? format_double(*v) : std::string();
        };
        for (const auto& row : arima_rows) {
            csv << row.ticker << ',' << to_string(row.construction) << ',' << row.observations << ','
                << cell(row.return_std) << ',' << cell(row.aic) << ',' << cell(row.bic) << ','
                << cell(row.rmse) << ',' << cell(row.mae) << '\n';
        }
        write_text_file(out / "arima_stats.csv", csv.str());
    }

    std::cout << "analyzed " << (selected.size() - failed) << "/" << selected.size()
              << " selected instruments into " << out.string() << "\n";
    return kExitOk;
}

// ---- report ----------------------------------------------------------------

struct ReportOptions {
    std::string analysis_dir;
    std::string out_path = "-";
};

std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt_pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * v);
    return buf;
}

int run_report(const ReportOptions& opt) {
    const fs::path dir(opt.analysis_dir);
    const fs::path summary_path = dir / "summary.json";
    if (!fs::exists(summary_path))
        throw ConfigError("no summary.json under " + dir.string() + "; run analyze first");

    std::ifstream in(summary_path);
    ordered_json summary;
    in >> summary;

    std::ostringstream md;
    md << "# Coverage-aware panel analysis\n\n";
    md << "Panel " << summary["panel_start"].get<std::string>() << " to "
       << summary["panel_end"].get<std::string>() << ", " << summary["version"].get<std::string>()
       << " version. Selection: listed after " << summary["listed_after"].get<std::string>()
       << " with at least " << summary["min_trading_days"].get<std::int64_t>()
       << " trading days; " << summary["selected"].size() << " instruments selected, "
       << summary["analyzed"].get<std::int64_t>() << " analyzed.\n\n";

    md << "## Aggregate distortion\n\n";
    md << "| measure | naive construction | n | mean | median | positive | sign test p | t | t test p | breakdowns |\n";
    md << "|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& s : summary["summaries"]) {
        md << "| " << s["measure"].get<std::string>() << " | " << s["naive_kind"].get<std::string>()
           << " | " << s["n"].get<std::int64_t>();
        if (s["n"].get<std::int64_t>() > 0) {
            md << " | " << fmt_pct(s["mean"].get<double>()) << " | "
               << fmt_pct(s["median"].get<double>()) << " | "
               << fmt_pct(s["frac_positive"].get<double>()) << " | "
               << (s["sign_test_p"].is_null() ? "n/a" : fmt_num(s["sign_test_p"].get<double>()))
               << " | " << (s["t_stat"].is_null() ? "n/a" : fmt_num(s["t_stat"].get<double>()))
               << " | " << (s["t_test_p"].is_null() ? "n/a" : fmt_num(s["t_test_p"].get<double>()));
        } else {
            md << " | n/a | n/a | n/a | n/a | n/a | n/a";
        }
        md << " | " << s["breakdown_count"].get<std::int64_t>() << " |\n";
    }
    md << "\n";

    for (const auto& s : summary["summaries"]) {
        if (s["n"].get<std::int64_t>() == 0) continue;
        md << "Under the " << s["naive_kind"].get<std::string>() << " construction, "
           << s["measure"].get<std::string>() << " distortion has mean "
           << fmt_pct(s["mean"].get<double>()) << " and median "
           << fmt_pct(s["median"].get<double>()) << " across " << s["n"].get<std::int64_t>()
           << " instruments (" << fmt_pct(s["frac_positive"].get<double>()) << " positive";
        if (!s["sign_test_p"].is_null())
            md << ", sign test p = " << fmt_num(s["sign_test_p"].get<double>());
        if (!s["t_stat"].is_null())
            md << ", t = " << fmt_num(s["t_stat"].get<double>())
               << ", p = " << fmt_num(s["t_test_p"].get<double>());
        md << ").";
        if (s["breakdown_count"].get<std::int64_t>() > 0)
            md << " GARCH estimation broke down for " << s["breakdown_count"].get<std::int64_t>()
               << " instruments (persistence at or above the threshold); they are excluded from the"
               << " aggregate.";
        md << "\n\n";
    }

    const fs::path arima_path = dir / "arima_stats.csv";
    if (fs::exists(arima_path)) {
        md << "## Per-instrument model statistics\n\n";
        std::ifstream csv(arima_path);
        std::string line;
        std::getline(csv, line);  // header
        std::string current;
        while (std::getline(csv, line)) {
            if (line.empty()) continue;
            const auto fields = split_csv_line(line);
            if (fields.size() != 8) continue;
            const std::string ticker(fields[0]);
            if (ticker != current) {
                if (!current.empty()) md << "\n";
                current = ticker;
                md << "### " << ticker << "\n\n";
                md << "| construction | obs | return std | AIC | BIC | RMSE | MAE |\n";
                md << "|---|---|---|---|---|---|---|\n";
            }
            auto cell = [&](std::string_view v) {
                const auto d = parse_double(v);
                return d ? fmt_num(*d) : std::string("n/a");
            };
            md << "| " << fields[1] << " | " << fields[2] << " | " << cell(fields[3]) << " | "
               << cell(fields[4]) << " | " << cell(fields[5]) << " | " << cell(fields[6]) << " | "
               << cell(fields[7]) << " |\n";
        }
        md << "\n";
    }

    if (opt.out_path == "-") {
        std::cout << md.str();
    } else {
        write_text_file(opt.out_path, md.str());
        std::cout << "wrote report to " << opt.out_path << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coverage-aware financial panel construction and volatility distortion toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a key=value config file (INI sections per subcommand)");

    SimulateOptions sim;
    CLI::App* simulate = app.add_subcommand("simulate", "write a synthetic corpus with known dynamics");
    simulate->add_option("--out", sim.out_dir, "output directory")->required();
    simulate->add_option("--n-instruments", sim.n_instruments, "number of instruments");
    simulate->add_option("--panel-start", sim.panel_start, "panel start date (YYYY-MM-DD)");
    simulate->add_option("--panel-end", sim.panel_end, "panel end date (YYYY-MM-DD)");
    simulate->add_option("--listing-spread-days", sim.listing_spread_days,
                         "listing offsets drawn uniformly from [0, this]");
    simulate->add_option("--trading-week", sim.trading_week, "mon-fri, mon-sun, or comma list");
    simulate->add_option("--holiday-rate", sim.holiday_rate, "Bernoulli holiday removal rate [0,0.2]");
    simulate->add_option("--garch-omega", sim.omega, "generating omega");
    simulate->add_option("--garch-alpha", sim.alpha, "generating alpha");
    simulate->add_option("--garch-beta", sim.beta, "generating beta");
    simulate->add_option("--garch-mu", sim.mu, "generating mean return");
    simulate->add_option("--seed", sim.seed, "deterministic seed");

    IngestOptions ing;
    CLI::App* ingest = app.add_subcommand("ingest", "parse a corpus and write coverage artifacts");
    ingest->add_option("--adjusted", ing.adjusted_dir, "adjusted CSV directory");
    ingest->add_option("--unadjusted", ing.unadjusted_dir, "unadjusted CSV directory");
    ingest->add_option("--metadata", ing.metadata_path, "ticker,instrument_type CSV");
    ingest->add_option("--out", ing.out_dir, "output directory")->required();
    ingest->add_option("--columns", ing.columns, "header remap, e.g. date=Date,close=Close");

    AnalyzeOptions ana;
    CLI::App* analyze = app.add_subcommand("analyze", "run the volatility distortion pipeline");
    analyze->add_option("--adjusted", ana.adjusted_dir, "adjusted CSV directory");
    analyze->add_option("--unadjusted", ana.unadjusted_dir, "unadjusted CSV directory");
    analyze->add_option("--metadata", ana.metadata_path, "ticker,instrument_type CSV");
    analyze->add_option("--out", ana.out_dir, "output directory")->required();
    analyze->add_option("--columns", ana.columns, "header remap, e.g. date=Date,close=Close");
    analyze->add_option("--naive", ana.naive, "forward, backward, or both");
    analyze->add_option("--version", ana.version, "dataset version to analyze");
    analyze->add_option("--listed-after", ana.listed_after, "selection: listed strictly after");
    analyze->add_option("--min-trading-days", ana.min_trading_days, "selection: minimum trading days");
    analyze->add_option("--split-fraction", ana.split_fraction, "rolling forecast train fraction");
    analyze->add_option("--breakdown-threshold", ana.breakdown_threshold,
                        "GARCH persistence breakdown threshold");
    analyze->add_option("--max-iterations", ana.max_iterations, "simplex iteration budget");
    analyze->add_option("--threads", ana.threads, "worker threads (0 = hardware)");
    analyze->add_option("--bins", ana.histogram_bins, "histogram bins for figure data");
    analyze->add_flag("--skip-arima", ana.skip_arima, "skip the per-construction ARIMA table");

    ReportOptions rep;
    CLI::App* report = app.add_subcommand("report", "render a markdown report from an analysis directory");
    report->add_option("--analysis", rep.analysis_dir, "analyze output directory")->required();
    report->add_option("--out", rep.out_path, "output file, or - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (simulate->parsed()) return run_simulate(sim);
        if (ingest->parsed()) return run_ingest(ing);
        if (analyze->parsed()) return run_analyze(ana);
        if (report->parsed()) return run_report(rep);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IngestFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIngest;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAnalysis;
    }
    return kExitConfig;
}
