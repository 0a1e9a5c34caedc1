#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "covpanel/construction.hpp"
#include "covpanel/core.hpp"
#include "covpanel/garch.hpp"
#include "covpanel/io.hpp"
#include "covpanel/stats.hpp"

namespace covpanel {

// Cross-instrument sample filter: listed strictly after the cutoff date and
// enough observed trading days for stable estimation.
struct SelectionCriteria {
    Date listed_after = Date::from_ymd(2016, 12, 31);
    std::int64_t min_trading_days = 400;
};

enum class DistortionMeasure { ReturnStd, GarchUnconditionalVariance };

inline const char* to_string(DistortionMeasure m) {
    return m == DistortionMeasure::ReturnStd ? "return_std" : "garch_unconditional_variance";
}

enum class NaiveKind { ForwardFilled, BackwardFilled };

inline const char* to_string(NaiveKind k) {
    return k == NaiveKind::ForwardFilled ? "forward_filled" : "backward_filled";
}

struct DistortionRecord {
    std::string ticker;
    std::int64_t padding_days = 0;  // naive return count - aware return count
    std::optional<double> sigma_aware;
    std::optional<double> sigma_naive;
    std::optional<double> delta_sigma;
    DistortionMeasure measure = DistortionMeasure::ReturnStd;
    NaiveKind naive_kind = NaiveKind::ForwardFilled;
    bool garch_breakdown = false;
};

struct DistortionSummary {
    std::int64_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    double frac_positive = 0.0;
    double sign_test_p = 0.0;  // NaN when the test is undefined
    double t_stat = 0.0;       // NaN when the test is undefined
    double t_test_p = 0.0;
    std::int64_t breakdown_count = 0;
};

// Proportional distortion (sigma_aware - sigma_naive) / sigma_aware.
// Positive means the naive construction suppressed the estimate.
inline double distortion(double sigma_aware, double sigma_naive) {
    if (!(sigma_aware > 0.0))
        throw DegenerateBaseline("distortion: coverage-aware sigma must be positive");
    return (sigma_aware - sigma_naive) / sigma_aware;
}

// Tickers listed strictly after the cutoff with enough trading days, judged
// on the requested dataset version's coverage window. Instruments lacking
// that version are never selected.
inline std::vector<std::string> select_instruments(std::span<const InstrumentMetadata> metadata,
                                                   const SelectionCriteria& criteria,
                                                   Date panel_start,
                                                   DatasetVersion version = DatasetVersion::Unadjusted) {
    if (criteria.min_trading_days < 2)
        throw std::invalid_argument("select_instruments: min_trading_days must be >= 2");
    std::vector<std::string> out;
    for (const auto& m : metadata) {
        const auto& window = coverage_for(m, version);
        if (!window) continue;
        if (window->first_date < panel_start)
            throw InternalInvariantViolation("coverage window starts before the panel start for " +
                                             m.ticker);
        if (!(window->first_date > criteria.listed_after)) continue;
        if (window->trading_days < criteria.min_trading_days) continue;
        out.push_back(m.ticker);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Sufficient statistics of a coverage-aware return sample, as consumed by
// the closed-form dilution oracle. sum_of_squares is the raw (uncentered)
// sum of squared returns.
struct ReturnSummary {
    std::int64_t n = 0;
    double mean = 0.0;
    double sum_of_squares = 0.0;
};

inline ReturnSummary summarize_returns(std::span<const double> returns) {
    ReturnSummary s;
    s.n = static_cast<std::int64_t>(returns.size());
    double total = 0.0;
    for (double r : returns) {
        total += r;
        s.sum_of_squares += r * r;
    }
    s.mean = s.n > 0 ? total / static_cast<double>(s.n) : 0.0;
    return s;
}

// Closed-form sample standard deviation of the aware return multiset
// augmented with k exact zeros: with N = n + k and m' = n*mean/N,
// var' = (sum_of_squares - N*m'^2) / (N - 1). This is the independent
// oracle for the dilution mechanism.
inline double analytic_naive_std(const ReturnSummary& aware, std::int64_t k) {
    if (aware.n < 2) throw InsufficientData("analytic_naive_std: need n >= 2");
    if (k < 0) throw std::invalid_argument("analytic_naive_std: k must be >= 0");
    const double n_new = static_cast<double>(aware.n + k);
    const double mean_new = static_cast<double>(aware.n) * aware.mean / n_new;
    const double var_new = (aware.sum_of_squares - n_new * mean_new * mean_new) / (n_new - 1.0);
    return std::sqrt(std::max(var_new, 0.0));
}

namespace distortion_detail {

// A GARCH fit that exhausted its iteration budget is used at its
// best-so-far parameters; what matters downstream is the persistence
// threshold, which the breakdown flag captures either way.
inline GarchFit fit_garch_tolerant(const std::vector<double>& returns, const FitConfig& config) {
    try {
        return fit_garch11(returns, config);
    } catch (const GarchConvergenceFailure& e) {
        return e.best;
    }
}

}  // namespace distortion_detail

// The underlying GARCH fits of one analyze_instrument call, for callers
// that serialize fit records alongside the distortion table.
struct GarchFitPair {
    GarchFit aware;
    GarchFit naive;
};

// Builds the coverage-aware and requested naive construction for one
// instrument and fills one record per volatility measure. GARCH breakdown
// on either side disables the GARCH delta instead of failing the run.
inline std::pair<DistortionRecord, DistortionRecord> analyze_instrument(
    const InstrumentSeries& series, NaiveKind naive_kind, Date panel_start,
    const FitConfig& config = {}, GarchFitPair* fits_out = nullptr) {
    const ReturnSeries aware = log_returns(coverage_aware(series));
    const ReturnSeries naive =
        naive_kind == NaiveKind::ForwardFilled
            ? log_returns(naive_forward_fill(series))
            : log_returns(naive_backward_fill(series, panel_start));

    const std::vector<double> aware_values = return_values(aware);
    const std::vector<double> naive_values = return_values(naive);
    const auto padding =
        static_cast<std::int64_t>(naive_values.size()) - static_cast<std::int64_t>(aware_values.size());

    DistortionRecord ret_std;
    ret_std.ticker = series.ticker;
    ret_std.padding_days = padding;
    ret_std.measure = DistortionMeasure::ReturnStd;
    ret_std.naive_kind = naive_kind;
    ret_std.sigma_aware = sample_std(aware_values);
    ret_std.sigma_naive = sample_std(naive_values);
    ret_std.delta_sigma = distortion(*ret_std.sigma_aware, *ret_std.sigma_naive);

    DistortionRecord garch;
    garch.ticker = series.ticker;
    garch.padding_days = padding;
    garch.measure = DistortionMeasure::GarchUnconditionalVariance;
    garch.naive_kind = naive_kind;
    const GarchFit fit_aware = distortion_detail::fit_garch_tolerant(aware_values, config);
    const GarchFit fit_naive = distortion_detail::fit_garch_tolerant(naive_values, config);
    if (fits_out != nullptr) *fits_out = {fit_aware, fit_naive};
    garch.garch_breakdown = fit_aware.breakdown || fit_naive.breakdown;
    if (!fit_aware.breakdown) garch.sigma_aware = unconditional_variance(fit_aware);
    if (!fit_naive.breakdown) garch.sigma_naive = unconditional_variance(fit_naive);
    if (!garch.garch_breakdown)
        garch.delta_sigma = distortion(*garch.sigma_aware, *garch.sigma_naive);

    return {std::move(ret_std), std::move(garch)};
}

// Aggregates records of one (measure, naive_kind) group. Records without a
// delta (breakdowns) are excluded from the statistics but counted.
inline DistortionSummary summarize(std::span<const DistortionRecord> records) {
    DistortionSummary s;
    std::vector<double> deltas;
    for (const auto& r : records) {
        if (r.garch_breakdown) ++s.breakdown_count;
        if (r.delta_sigma) deltas.push_back(*r.delta_sigma);
    }
    if (deltas.empty()) throw EmptySample("summarize: no usable distortion records");

    s.n = static_cast<std::int64_t>(deltas.size());
    s.mean = sample_mean(deltas);
    s.median = median(deltas);
    std::int64_t positive = 0;
    for (double d : deltas)
        if (d > 0.0) ++positive;
    s.frac_positive = static_cast<double>(positive) / static_cast<double>(deltas.size());

    const double nan = std::numeric_limits<double>::quiet_NaN();
    try {
        s.sign_test_p = sign_test(deltas);
    } catch (const UndefinedTest&) {
        s.sign_test_p = nan;
    }
    try {
        const TTestResult t = t_test(deltas);
        s.t_stat = t.t;
        s.t_test_p = t.p;
    } catch (const UndefinedTest&) {
        s.t_stat = nan;
        s.t_test_p = nan;
    }
    return s;
}

// ---- figure-data exports -------------------------------------------------

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    std::int64_t count = 0;
};

inline std::vector<HistogramBin> histogram(std::span<const double> values, int n_bins) {
    if (values.empty()) throw EmptySample("histogram: no values");
    if (n_bins < 1) throw std::invalid_argument("histogram: need at least one bin");
    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    double lo = *mn_it, hi = *mx_it;
    if (lo == hi) hi = lo + 1.0;  // single-point sample: one unit-wide bin
    const double width = (hi - lo) / n_bins;
    std::vector<HistogramBin> bins(static_cast<std::size_t>(n_bins));
    for (int b = 0; b < n_bins; ++b) {
        bins[b].lo = lo + b * width;
        bins[b].hi = b + 1 == n_bins ? hi : lo + (b + 1) * width;
    }
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        if (b >= bins.size()) b = bins.size() - 1;
        ++bins[b].count;
    }
    return bins;
}

struct FiveNumber {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

inline FiveNumber five_number_summary(std::span<const double> values) {
    if (values.empty()) throw EmptySample("five_number_summary: no values");
    FiveNumber f;
    f.min = quantile(values, 0.0);
    f.q1 = quantile(values, 0.25);
    f.median = quantile(values, 0.5);
    f.q3 = quantile(values, 0.75);
    f.max = quantile(values, 1.0);
    return f;
}

inline void write_records_csv(std::span<const DistortionRecord> records, std::ostream& out) {
    out << "ticker,naive_kind,measure,padding_days,sigma_aware,sigma_naive,delta_sigma,garch_breakdown\n";
    auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const auto& r : records) {
        out << r.ticker << ',' << to_string(r.naive_kind) << ',' << to_string(r.measure) << ','
            << r.padding_days << ',' << cell(r.sigma_aware) << ',' << cell(r.sigma_naive) << ','
            << cell(r.delta_sigma) << ',' << (r.garch_breakdown ? 1 : 0) << '\n';
    }
}

// Per-measure histogram of delta_sigma, as plot-ready bins.
inline void write_histogram_csv(std::span<const DistortionRecord> records, int n_bins,
                                std::ostream& out) {
    out << "measure,bin_lo,bin_hi,count\n";
    for (DistortionMeasure m :
         {DistortionMeasure::ReturnStd, DistortionMeasure::GarchUnconditionalVariance}) {
        std::vector<double> deltas;
        for (const auto& r : records)
            if (r.measure == m && r.delta_sigma) deltas.push_back(*r.delta_sigma);
        if (deltas.empty()) continue;
        for (const auto& bin : histogram(deltas, n_bins))
            out << to_string(m) << ',' << format_double(bin.lo) << ',' << format_double(bin.hi) << ','
                << bin.count << '\n';
    }
}

// Per-measure five-number summary of delta_sigma (boxplot data).
inline void write_five_number_csv(std::span<const DistortionRecord> records, std::ostream& out) {
    out << "measure,min,q1,median,q3,max\n";
    for (DistortionMeasure m :
         {DistortionMeasure::ReturnStd, DistortionMeasure::GarchUnconditionalVariance}) {
        std::vector<double> deltas;
        for (const auto& r : records)
            if (r.measure == m && r.delta_sigma) deltas.push_back(*r.delta_sigma);
        if (deltas.empty()) continue;
        const FiveNumber f = five_number_summary(deltas);
        out << to_string(m) << ',' << format_double(f.min) << ',' << format_double(f.q1) << ','
            << format_double(f.median) << ',' << format_double(f.q3) << ',' << format_double(f.max)
            << '\n';
    }
}

// (padding length, delta_sigma) scatter pairs. Padding is counted in padded
// returns, which sits within one observation of calendar padding days.
inline void write_padding_scatter_csv(std::span<const DistortionRecord> records, std::ostream& out) {
    out << "ticker,measure,padding_days,delta_sigma\n";
    for (const auto& r : records) {
        if (!r.delta_sigma) continue;
        out << r.ticker << ',' << to_string(r.measure) << ',' << r.padding_days << ','
            << format_double(*r.delta_sigma) << '\n';
    }
}

}  // namespace covpanel
