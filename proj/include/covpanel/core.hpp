#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "covpanel/date.hpp"
#include "covpanel/errors.hpp"

namespace covpanel {

enum class DatasetVersion { Adjusted, Unadjusted };

inline const char* to_string(DatasetVersion v) {
    return v == DatasetVersion::Adjusted ? "adjusted" : "unadjusted";
}

enum class InstrumentType { Equity, MutualFund, TreasuryBill, Bond, Index, Sukuk, Other };

inline const char* to_string(InstrumentType t) {
    switch (t) {
        case InstrumentType::Equity: return "Equity";
        case InstrumentType::MutualFund: return "MutualFund";
        case InstrumentType::TreasuryBill: return "TreasuryBill";
        case InstrumentType::Bond: return "Bond";
        case InstrumentType::Index: return "Index";
        case InstrumentType::Sukuk: return "Sukuk";
        default: return "Other";
    }
}

// Types come from the metadata file as given; nothing is inferred.
// Unrecognized names map to Other (callers may warn).
inline InstrumentType instrument_type_from_string(std::string_view s, bool* recognized = nullptr) {
    struct Entry { std::string_view name; InstrumentType type; };
    static constexpr Entry entries[] = {
        {"Equity", InstrumentType::Equity},
        {"MutualFund", InstrumentType::MutualFund},
        {"TreasuryBill", InstrumentType::TreasuryBill},
        {"Bond", InstrumentType::Bond},
        {"Index", InstrumentType::Index},
        {"Sukuk", InstrumentType::Sukuk},
        {"Other", InstrumentType::Other},
    };
    for (const auto& e : entries) {
        if (e.name == s) {
            if (recognized) *recognized = true;
            return e.type;
        }
    }
    if (recognized) *recognized = false;
    return InstrumentType::Other;
}

struct OhlcvRow {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;
};

// low <= min(open, close) <= max(open, close) <= high. Violations are
// warned about at ingest time but the row is kept; only close <= 0 is fatal.
inline bool ohlc_ordering_ok(const OhlcvRow& r) {
    const double lo = std::min(r.open, r.close);
    const double hi = std::max(r.open, r.close);
    return r.low <= lo && hi <= r.high;
}

// Date-ordered OHLCV observations for one instrument in one dataset version.
struct InstrumentSeries {
    std::string ticker;
    DatasetVersion version = DatasetVersion::Unadjusted;
    std::vector<OhlcvRow> rows;  // strictly increasing by date, non-empty
};

inline void validate_series(const InstrumentSeries& s) {
    if (s.rows.empty()) throw EmptySeries("instrument series is empty: " + s.ticker);
    for (std::size_t i = 1; i < s.rows.size(); ++i)
        if (!(s.rows[i - 1].date < s.rows[i].date))
            throw InternalInvariantViolation("series rows not strictly increasing by date: " + s.ticker);
    for (const auto& r : s.rows)
        if (!(r.close > 0.0))
            throw InternalInvariantViolation("non-positive close in series: " + s.ticker);
}

// [S_i, E_i] plus the observed-day and calendar-day counts.
struct CoverageWindow {
    Date first_date;
    Date last_date;
    std::int64_t trading_days = 0;
    std::int64_t lifespan_days = 0;  // last - first + 1 in calendar days
};

inline CoverageWindow coverage_window(const InstrumentSeries& series) {
    if (series.rows.empty()) throw EmptySeries("coverage_window: empty series " + series.ticker);
    CoverageWindow w;
    w.first_date = series.rows.front().date;
    w.last_date = series.rows.back().date;
    w.trading_days = static_cast<std::int64_t>(series.rows.size());
    w.lifespan_days = static_cast<std::int64_t>(w.last_date - w.first_date) + 1;
    return w;
}

struct InstrumentMetadata {
    std::string ticker;
    InstrumentType instrument_type = InstrumentType::Other;
    std::optional<CoverageWindow> coverage_adjusted;
    std::optional<CoverageWindow> coverage_unadjusted;
};

inline const std::optional<CoverageWindow>& coverage_for(const InstrumentMetadata& m,
                                                         DatasetVersion v) {
    return v == DatasetVersion::Adjusted ? m.coverage_adjusted : m.coverage_unadjusted;
}

// The panel's date axis: the sorted union of all observed trading dates
// across all instruments and both dataset versions.
class TradingCalendar {
public:
    TradingCalendar() = default;

    static TradingCalendar from_dates(std::vector<Date> dates) {
        if (dates.empty()) throw EmptySeries("trading calendar needs at least one date");
        std::sort(dates.begin(), dates.end());
        dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
        TradingCalendar cal;
        cal.dates_ = std::move(dates);
        cal.index_.reserve(cal.dates_.size());
        for (std::size_t i = 0; i < cal.dates_.size(); ++i)
            cal.index_.emplace(cal.dates_[i].serial(), i);
        return cal;
    }

    const std::vector<Date>& dates() const { return dates_; }
    std::size_t size() const { return dates_.size(); }
    Date panel_start() const { return dates_.front(); }
    Date panel_end() const { return dates_.back(); }

    std::optional<std::size_t> index_of(Date d) const {
        auto it = index_.find(d.serial());
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::vector<Date> dates_;
    std::unordered_map<std::int32_t, std::size_t> index_;
};

// Per (instrument, date) coverage code:
//   0 = neither version, 1 = adjusted only, 2 = unadjusted only, 3 = both.
// Bit semantics: bit 0 = adjusted, bit 1 = unadjusted, so 3 == 1 | 2.
enum class AvailabilityCode : std::uint8_t { None = 0, AdjustedOnly = 1, UnadjustedOnly = 2, Both = 3 };

constexpr AvailabilityCode availability_code(bool adjusted_present, bool unadjusted_present) {
    return static_cast<AvailabilityCode>((adjusted_present ? 1u : 0u) |
                                         (unadjusted_present ? 2u : 0u));
}

constexpr bool has_adjusted(AvailabilityCode c) { return (static_cast<unsigned>(c) & 1u) != 0; }
constexpr bool has_unadjusted(AvailabilityCode c) { return (static_cast<unsigned>(c) & 2u) != 0; }
constexpr bool has_any(AvailabilityCode c) { return static_cast<unsigned>(c) != 0; }

// Dense byte grid indexed (instrument, date). At DSE scale this is about
// 486 x 3300 bytes, so dense storage with O(1) random access wins.
struct AvailabilityMatrix {
    TradingCalendar calendar;
    std::vector<std::string> tickers;
    std::vector<std::uint8_t> codes;  // row-major: [instrument][date]

    AvailabilityCode at(std::size_t instrument, std::size_t date_index) const {
        return static_cast<AvailabilityCode>(codes[instrument * calendar.size() + date_index]);
    }

    void set(std::size_t instrument, std::size_t date_index, AvailabilityCode c) {
        codes[instrument * calendar.size() + date_index] = static_cast<std::uint8_t>(c);
    }

    std::size_t n_instruments() const { return tickers.size(); }
    std::size_t n_dates() const { return calendar.size(); }

    // Per-day count of instruments with a valid observation in any version
    // (codes in {1,2,3}).
    std::vector<std::int64_t> per_date_available_counts() const {
        std::vector<std::int64_t> counts(calendar.size(), 0);
        for (std::size_t i = 0; i < tickers.size(); ++i)
            for (std::size_t t = 0; t < calendar.size(); ++t)
                if (has_any(at(i, t))) ++counts[t];
        return counts;
    }
};

}  // namespace covpanel
