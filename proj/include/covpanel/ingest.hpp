#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "covpanel/core.hpp"
#include "covpanel/io.hpp"

namespace covpanel {

// Per-instrument EoD CSV trees, one file per ticker (ticker = file stem),
// maintained in parallel for the adjusted and unadjusted dataset versions.
struct CorpusLayout {
    std::filesystem::path adjusted_dir;
    std::filesystem::path unadjusted_dir;
    std::optional<std::filesystem::path> metadata_path;  // CSV: ticker,instrument_type
};

struct IngestWarning {
    std::string ticker;
    std::string date;  // raw field; empty for file-level warnings
    std::string message;
};

struct IngestReject {
    std::string ticker;
    std::string reason;
};

struct IngestReport {
    std::int64_t instruments_loaded = 0;
    std::int64_t rows_loaded = 0;
    std::vector<IngestWarning> warnings;
    std::vector<IngestReject> rejects;
};

// Header-name remapping for vendor files whose columns are not literally
// date,open,high,low,close,volume.
struct CsvColumnMap {
    std::string date = "date";
    std::string open = "open";
    std::string high = "high";
    std::string low = "low";
    std::string close = "close";
    std::string volume = "volume";
};

// Parses one EoD file. Bad rows are skipped with a warning (malformed
// date/number, non-positive close, negative volume); duplicate dates keep
// the last occurrence in file order; rows come out sorted ascending.
// Returns nullopt (and records a reject) if no valid rows remain.
inline std::optional<InstrumentSeries> parse_eod_file(std::string_view content, std::string ticker,
                                                      DatasetVersion version, IngestReport& report,
                                                      const CsvColumnMap& columns = {}) {
    std::size_t pos = 0;
    auto next_line = [&]() -> std::optional<std::string_view> {
        if (pos >= content.size()) return std::nullopt;
        const std::size_t nl = content.find('\n', pos);
        std::string_view line = content.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        pos = nl == std::string_view::npos ? content.size() : nl + 1;
        return line;
    };

    // header
    std::optional<std::string_view> header;
    while ((header = next_line()) && trim(*header).empty()) {
    }
    if (!header) {
        report.rejects.push_back({ticker, "empty file"});
        return std::nullopt;
    }
    const auto names = split_csv_line(*header);
    auto find_col = [&](const std::string& want) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == want) return i;
        return std::nullopt;
    };
    const auto c_date = find_col(columns.date), c_open = find_col(columns.open),
               c_high = find_col(columns.high), c_low = find_col(columns.low),
               c_close = find_col(columns.close), c_volume = find_col(columns.volume);
    if (!c_date || !c_open || !c_high || !c_low || !c_close || !c_volume) {
        report.rejects.push_back({ticker, "header is missing a required column"});
        return std::nullopt;
    }

    std::map<std::int32_t, OhlcvRow> by_date;  // keeps rows sorted by date
    while (auto line_opt = next_line()) {
        const std::string_view line = trim(*line_opt);
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != names.size()) {
            report.warnings.push_back({ticker, "", "malformed row (field count), skipped"});
            continue;
        }
        OhlcvRow row;
        const std::string date_raw(fields[*c_date]);
        try {
            row.date = Date::parse_iso(fields[*c_date]);
        } catch (const std::invalid_argument&) {
            report.warnings.push_back({ticker, date_raw, "unparseable date, row skipped"});
            continue;
        }
        const auto open = parse_double(fields[*c_open]), high = parse_double(fields[*c_high]),
                   low = parse_double(fields[*c_low]), close = parse_double(fields[*c_close]),
                   volume = parse_double(fields[*c_volume]);
        if (!open || !high || !low || !close || !volume) {
            report.warnings.push_back({ticker, date_raw, "unparseable number, row skipped"});
            continue;
        }
        row.open = *open;
        row.high = *high;
        row.low = *low;
        row.close = *close;
        row.volume = *volume;
        if (!(row.close > 0.0)) {
            report.warnings.push_back({ticker, date_raw, "non-positive close, row skipped"});
            continue;
        }
        if (row.volume < 0.0) {
            report.warnings.push_back({ticker, date_raw, "negative volume, row skipped"});
            continue;
        }
        if (!ohlc_ordering_ok(row))
            report.warnings.push_back({ticker, date_raw, "OHLC ordering violated, row kept"});
        auto [it, inserted] = by_date.insert_or_assign(row.date.serial(), row);
        (void)it;
        if (!inserted)
            report.warnings.push_back({ticker, date_raw, "duplicate date, kept last occurrence"});
    }

    if (by_date.empty()) {
        report.rejects.push_back({ticker, "no valid rows after cleaning"});
        return std::nullopt;
    }

    InstrumentSeries series;
    series.ticker = std::move(ticker);
    series.version = version;
    series.rows.reserve(by_date.size());
    for (const auto& [serial, row] : by_date) series.rows.push_back(row);
    report.rows_loaded += static_cast<std::int64_t>(series.rows.size());
    return series;
}

struct InstrumentRecord {
    std::string ticker;
    std::optional<InstrumentSeries> adjusted;
    std::optional<InstrumentSeries> unadjusted;
};

struct Corpus {
    std::vector<InstrumentRecord> instruments;  // sorted by ticker
    std::vector<InstrumentMetadata> metadata;   // same order
    TradingCalendar calendar;                   // union of all observed dates
    IngestReport report;
};

namespace ingest_detail {

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::filesystem::path> csv_files_sorted(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    if (dir.empty() || !std::filesystem::is_directory(dir)) return files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace ingest_detail

// Loads both version trees, derives per-version coverage metadata, and
// builds the global calendar as the union of all observed trading dates.
inline Corpus load_corpus(const CorpusLayout& layout, const CsvColumnMap& columns = {}) {
    const auto adjusted_files = ingest_detail::csv_files_sorted(layout.adjusted_dir);
    const auto unadjusted_files = ingest_detail::csv_files_sorted(layout.unadjusted_dir);
    if (adjusted_files.empty() && unadjusted_files.empty())
        throw ConfigError("no CSV files found under '" + layout.adjusted_dir.string() + "' or '" +
                          layout.unadjusted_dir.string() + "'");

    Corpus corpus;
    std::map<std::string, InstrumentRecord> records;
    for (const auto& file : adjusted_files) {
        const std::string ticker = file.stem().string();
        auto series = parse_eod_file(ingest_detail::read_file(file), ticker,
                                     DatasetVersion::Adjusted, corpus.report, columns);
        if (series) records[ticker].adjusted = std::move(series);
    }
    for (const auto& file : unadjusted_files) {
        const std::string ticker = file.stem().string();
        auto series = parse_eod_file(ingest_detail::read_file(file), ticker,
                                     DatasetVersion::Unadjusted, corpus.report, columns);
        if (series) records[ticker].unadjusted = std::move(series);
    }

    // instrument types, when a metadata file is given
    std::map<std::string, InstrumentType> types;
    if (layout.metadata_path) {
        const std::string text = ingest_detail::read_file(*layout.metadata_path);
        std::size_t pos = 0;
        bool first = true;
        while (pos < text.size()) {
            const std::size_t nl = text.find('\n', pos);
            const std::string_view line =
                trim(std::string_view(text).substr(pos, nl == std::string::npos ? nl : nl - pos));
            pos = nl == std::string::npos ? text.size() : nl + 1;
            if (line.empty()) continue;
            const auto fields = split_csv_line(line);
            if (first && fields.size() >= 2 && fields[0] == "ticker") {
                first = false;
                continue;
            }
            first = false;
            if (fields.size() < 2) continue;
            bool known = false;
            const InstrumentType t = instrument_type_from_string(fields[1], &known);
            if (!known)
                corpus.report.warnings.push_back(
                    {std::string(fields[0]), "", "unknown instrument type '" + std::string(fields[1]) +
                                                     "', using Other"});
            types[std::string(fields[0])] = t;
        }
    }

    std::vector<Date> all_dates;
    for (auto& [ticker, record] : records) {
        record.ticker = ticker;
        InstrumentMetadata meta;
        meta.ticker = ticker;
        if (auto it = types.find(ticker); it != types.end()) meta.instrument_type = it->second;
        if (record.adjusted) {
            meta.coverage_adjusted = coverage_window(*record.adjusted);
            for (const auto& row : record.adjusted->rows) all_dates.push_back(row.date);
        }
        if (record.unadjusted) {
            meta.coverage_unadjusted = coverage_window(*record.unadjusted);
            for (const auto& row : record.unadjusted->rows) all_dates.push_back(row.date);
        }
        corpus.metadata.push_back(std::move(meta));
        corpus.instruments.push_back(std::move(record));
    }
    if (all_dates.empty()) throw ConfigError("every file in the corpus was rejected");

    corpus.calendar = TradingCalendar::from_dates(std::move(all_dates));
    corpus.report.instruments_loaded = static_cast<std::int64_t>(corpus.instruments.size());
    return corpus;
}

// codes[i][t] = availability_code(adjusted row at t, unadjusted row at t).
inline AvailabilityMatrix build_availability_matrix(std::span<const InstrumentRecord> instruments,
                                                    const TradingCalendar& calendar) {
    AvailabilityMatrix m;
    m.calendar = calendar;
    m.tickers.reserve(instruments.size());
    for (const auto& rec : instruments) m.tickers.push_back(rec.ticker);
    m.codes.assign(instruments.size() * calendar.size(), 0);

    for (std::size_t i = 0; i < instruments.size(); ++i) {
        auto mark = [&](const std::optional<InstrumentSeries>& series, unsigned bit) {
            if (!series) return;
            for (const auto& row : series->rows) {
                const auto idx = calendar.index_of(row.date);
                if (!idx)
                    throw InternalInvariantViolation("date " + row.date.to_iso() +
                                                     " missing from calendar (calendar built wrong)");
                m.codes[i * calendar.size() + *idx] |= static_cast<std::uint8_t>(bit);
            }
        };
        mark(instruments[i].adjusted, 1u);
        mark(instruments[i].unadjusted, 2u);
    }
    return m;
}

// Matrix CSV: rows = dates, columns = tickers, cells = 0-3.
inline void export_matrix_csv(const AvailabilityMatrix& m, std::ostream& out) {
    out << "date";
    for (const auto& t : m.tickers) out << ',' << t;
    out << '\n';
    for (std::size_t t = 0; t < m.n_dates(); ++t) {
        out << m.calendar.dates()[t].to_iso();
        for (std::size_t i = 0; i < m.n_instruments(); ++i)
            out << ',' << static_cast<unsigned>(m.at(i, t));
        out << '\n';
    }
}

inline AvailabilityMatrix import_matrix_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("availability matrix CSV is empty");
    const auto header = split_csv_line(line);
    if (header.empty() || header[0] != "date")
        throw ConfigError("availability matrix CSV must start with a 'date' column");

    std::vector<std::string> tickers;
    for (std::size_t i = 1; i < header.size(); ++i) tickers.emplace_back(header[i]);

    std::vector<Date> dates;
    std::vector<std::vector<std::uint8_t>> rows_by_date;
    while (std::getline(in, line)) {
        const std::string_view trimmed = trim(line);
        if (trimmed.empty()) continue;
        const auto fields = split_csv_line(trimmed);
        if (fields.size() != header.size())
            throw ConfigError("availability matrix CSV row has wrong field count");
        dates.push_back(Date::parse_iso(fields[0]));
        std::vector<std::uint8_t> row;
        row.reserve(tickers.size());
        for (std::size_t i = 1; i < fields.size(); ++i) {
            const auto v = parse_double(fields[i]);
            if (!v || *v < 0 || *v > 3 || *v != static_cast<double>(static_cast<int>(*v)))
                throw ConfigError("availability matrix cell must be an integer in 0..3");
            row.push_back(static_cast<std::uint8_t>(*v));
        }
        rows_by_date.push_back(std::move(row));
    }

    AvailabilityMatrix m;
    m.calendar = TradingCalendar::from_dates(dates);
    if (m.calendar.size() != dates.size())
        throw ConfigError("availability matrix CSV has duplicate or unordered dates");
    m.tickers = std::move(tickers);
    m.codes.assign(m.tickers.size() * m.calendar.size(), 0);
    for (std::size_t t = 0; t < rows_by_date.size(); ++t)
        for (std::size_t i = 0; i < m.tickers.size(); ++i)
            m.codes[i * m.calendar.size() + t] = rows_by_date[t][i];
    return m;
}

// EoD CSV in the documented ingestion schema. Prices carry 17 significant
// digits so simulated corpora round-trip bit-exactly through the parser.
inline void write_eod_csv(const InstrumentSeries& series, std::ostream& out) {
    out << "date,open,high,low,close,volume\n";
    for (const auto& row : series.rows) {
        out << row.date.to_iso() << ',' << format_double(row.open) << ',' << format_double(row.high)
            << ',' << format_double(row.low) << ',' << format_double(row.close) << ','
            << format_double(row.volume) << '\n';
    }
}

inline nlohmann::ordered_json coverage_to_json(const std::optional<CoverageWindow>& w) {
    if (!w) return nullptr;
    return nlohmann::ordered_json{{"first_date", w->first_date.to_iso()},
                                  {"last_date", w->last_date.to_iso()},
                                  {"trading_days", w->trading_days},
                                  {"lifespan_days", w->lifespan_days}};
}

inline nlohmann::ordered_json metadata_to_json(std::span<const InstrumentMetadata> metadata) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& m : metadata) {
        arr.push_back({{"ticker", m.ticker},
                       {"instrument_type", to_string(m.instrument_type)},
                       {"adjusted", coverage_to_json(m.coverage_adjusted)},
                       {"unadjusted", coverage_to_json(m.coverage_unadjusted)}});
    }
    return arr;
}

inline nlohmann::ordered_json report_to_json(const IngestReport& report) {
    nlohmann::ordered_json warnings = nlohmann::ordered_json::array();
    for (const auto& w : report.warnings)
        warnings.push_back({{"ticker", w.ticker}, {"date", w.date}, {"message", w.message}});
    nlohmann::ordered_json rejects = nlohmann::ordered_json::array();
    for (const auto& r : report.rejects)
        rejects.push_back({{"ticker", r.ticker}, {"reason", r.reason}});
    return {{"instruments_loaded", report.instruments_loaded},
            {"rows_loaded", report.rows_loaded},
            {"warnings", warnings},
            {"rejects", rejects}};
}

}  // namespace covpanel
