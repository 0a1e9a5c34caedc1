#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "covpanel/core.hpp"
#include "covpanel/io.hpp"

namespace covpanel {

enum class Construction { CoverageAware, NaiveForwardFilled, NaiveBackwardFilled };

inline const char* to_string(Construction c) {
    switch (c) {
        case Construction::CoverageAware: return "coverage_aware";
        case Construction::NaiveForwardFilled: return "naive_forward_filled";
        default: return "naive_backward_filled";
    }
}

enum class PointOrigin : std::uint8_t { Observed, ForwardFilled, BackwardFilled };

inline const char* to_string(PointOrigin o) {
    switch (o) {
        case PointOrigin::Observed: return "observed";
        case PointOrigin::ForwardFilled: return "forward_filled";
        default: return "backward_filled";
    }
}

struct PricePoint {
    Date date;
    double close = 0.0;
    PointOrigin origin = PointOrigin::Observed;
};

struct PriceSeries {
    std::string ticker;
    Construction construction = Construction::CoverageAware;
    std::vector<PricePoint> points;  // strictly increasing dates
};

struct ReturnPoint {
    Date date;   // date of the later price of the pair
    double r = 0.0;
    bool padded = false;  // true iff the later price is non-Observed
};

struct ReturnSeries {
    std::string ticker;
    Construction construction = Construction::CoverageAware;
    std::vector<ReturnPoint> points;
};

// Observed trading days only, confined to [S_i, E_i]. Internal gaps
// (suspensions, holidays) are preserved, never filled.
inline PriceSeries coverage_aware(const InstrumentSeries& series) {
    if (series.rows.empty()) throw EmptySeries("coverage_aware: empty series " + series.ticker);
    PriceSeries out;
    out.ticker = series.ticker;
    out.construction = Construction::CoverageAware;
    out.points.reserve(series.rows.size());
    for (const auto& row : series.rows)
        out.points.push_back({row.date, row.close, PointOrigin::Observed});
    return out;
}

// Reindex to a continuous calendar-day grid over [S_i, E_i], carrying the
// most recent observed close across non-trading days. This mirrors what a
// reindex-plus-ffill panel build does.
inline PriceSeries naive_forward_fill(const InstrumentSeries& series) {
    if (series.rows.empty()) throw EmptySeries("naive_forward_fill: empty series " + series.ticker);
    PriceSeries out;
    out.ticker = series.ticker;
    out.construction = Construction::NaiveForwardFilled;

    const Date first = series.rows.front().date;
    const Date last = series.rows.back().date;
    out.points.reserve(static_cast<std::size_t>(last - first) + 1);

    std::size_t next_row = 0;
    double carried = series.rows.front().close;
    for (Date d = first; d <= last; d = d.plus_days(1)) {
        if (next_row < series.rows.size() && series.rows[next_row].date == d) {
            carried = series.rows[next_row].close;
            out.points.push_back({d, carried, PointOrigin::Observed});
            ++next_row;
        } else {
            out.points.push_back({d, carried, PointOrigin::ForwardFilled});
        }
    }
    return out;
}

// Forward-filled construction additionally extended back to the global panel
// start: every pre-listing calendar day carries the first observed close.
inline PriceSeries naive_backward_fill(const InstrumentSeries& series, Date panel_start) {
    if (series.rows.empty()) throw EmptySeries("naive_backward_fill: empty series " + series.ticker);
    const Date first = series.rows.front().date;
    if (panel_start > first)
        throw PanelStartAfterListing("panel start " + panel_start.to_iso() +
                                     " is after first observation " + first.to_iso() +
                                     " for " + series.ticker);

    PriceSeries out;
    out.ticker = series.ticker;
    out.construction = Construction::NaiveBackwardFilled;
    out.points.reserve(static_cast<std::size_t>(series.rows.back().date - panel_start) + 1);

    const double first_close = series.rows.front().close;
    for (Date d = panel_start; d < first; d = d.plus_days(1))
        out.points.push_back({d, first_close, PointOrigin::BackwardFilled});

    PriceSeries filled = naive_forward_fill(series);
    out.points.insert(out.points.end(), filled.points.begin(), filled.points.end());
    return out;
}

// r_t = ln(P_t) - ln(P_{t-1}) over consecutive points. Computed as a
// difference of logs (not log of a ratio) so a return over a fill run is
// bit-identical to the coverage-aware return over the same two observed
// closes, and returns inside a constant fill run are exactly zero.
inline ReturnSeries log_returns(const PriceSeries& prices) {
    if (prices.points.size() < 2)
        throw InsufficientData("log_returns: need at least 2 price points for " + prices.ticker);
    ReturnSeries out;
    out.ticker = prices.ticker;
    out.construction = prices.construction;
    out.points.reserve(prices.points.size() - 1);
    for (std::size_t i = 1; i < prices.points.size(); ++i) {
        const auto& prev = prices.points[i - 1];
        const auto& cur = prices.points[i];
        if (!(prev.close > 0.0) || !(cur.close > 0.0))
            throw InternalInvariantViolation("log_returns: non-positive close for " + prices.ticker);
        ReturnPoint p;
        p.date = cur.date;
        p.r = std::log(cur.close) - std::log(prev.close);
        p.padded = cur.origin != PointOrigin::Observed;
        out.points.push_back(p);
    }
    return out;
}

inline std::vector<double> return_values(const ReturnSeries& rs) {
    std::vector<double> v;
    v.reserve(rs.points.size());
    for (const auto& p : rs.points) v.push_back(p.r);
    return v;
}

inline std::int64_t padded_count(const ReturnSeries& rs) {
    std::int64_t n = 0;
    for (const auto& p : rs.points)
        if (p.padded) ++n;
    return n;
}

// Plain chronological left-to-right accumulation. This order is part of the
// contract: padding only inserts exact zeros between otherwise bit-identical
// terms, so the sum is identical across constructions of the same series.
inline double sum_squared_returns(const ReturnSeries& rs) {
    double s = 0.0;
    for (const auto& p : rs.points) s += p.r * p.r;
    return s;
}

inline void write_price_series_csv(const PriceSeries& prices, std::ostream& out) {
    out << "date,value,origin\n";
    for (const auto& p : prices.points)
        out << p.date.to_iso() << ',' << format_double(p.close) << ',' << to_string(p.origin)
            << '\n';
}

inline void write_return_series_csv(const ReturnSeries& returns, std::ostream& out) {
    out << "date,r,padded\n";
    for (const auto& p : returns.points)
        out << p.date.to_iso() << ',' << format_double(p.r) << ',' << (p.padded ? 1 : 0) << '\n';
}

}  // namespace covpanel
