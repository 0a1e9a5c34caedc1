#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "covpanel/core.hpp"
#include "covpanel/errors.hpp"
#include "covpanel/garch.hpp"
#include "covpanel/ingest.hpp"
#include "covpanel/rng.hpp"

namespace covpanel {

// Trading weekday mask, Monday-indexed (days[0] = Monday .. days[6] = Sunday).
struct TradingWeek {
    std::array<bool, 7> days{};

    static TradingWeek five_day() { return {{true, true, true, true, true, false, false}}; }
    static TradingWeek seven_day() { return {{true, true, true, true, true, true, true}}; }

    bool trades_on(Date d) const { return days[static_cast<std::size_t>(d.weekday_mon0())]; }
    int count() const {
        int c = 0;
        for (bool b : days) c += b ? 1 : 0;
        return c;
    }
};

// A synthetic universe: staggered listings, a configurable trading week with
// i.i.d. Bernoulli holiday removal, and GARCH(1,1) closing prices. All
// randomness comes from the documented splitmix64 counter streams, so a
// spec reproduces the same universe on any platform.
struct SyntheticSpec {
    int n_instruments = 20;
    Date panel_start;
    Date panel_end;
    int listing_spread_days = 0;  // listing offsets drawn uniformly from [0, this]
    TradingWeek trading_week = TradingWeek::five_day();
    double holiday_rate = 0.0;  // in [0, 0.2]
    std::vector<GarchParams> garch_params;  // one shared entry, or one per instrument
    std::uint64_t seed = 0;
};

inline void validate_spec(const SyntheticSpec& spec) {
    if (spec.n_instruments < 0) throw ConfigError("synthetic spec: n_instruments must be >= 0");
    if (spec.panel_end < spec.panel_start)
        throw ConfigError("synthetic spec: panel_end before panel_start");
    if (spec.listing_spread_days < 0)
        throw ConfigError("synthetic spec: listing_spread_days must be >= 0");
    if (spec.holiday_rate < 0.0 || spec.holiday_rate > 0.2)
        throw ConfigError("synthetic spec: holiday rate must lie in [0, 0.2]");
    if (spec.trading_week.count() == 0)
        throw ConfigError("synthetic spec: trading week has no trading days");
    if (spec.garch_params.empty())
        throw ConfigError("synthetic spec: need at least one GARCH parameter set");
    if (spec.garch_params.size() != 1 &&
        spec.garch_params.size() != static_cast<std::size_t>(spec.n_instruments))
        throw ConfigError("synthetic spec: garch_params must be shared (1) or per instrument");
    for (const auto& p : spec.garch_params) {
        if (!(p.omega > 0.0) || p.alpha < 0.0 || p.beta < 0.0)
            throw ConfigError("synthetic spec: require omega > 0, alpha >= 0, beta >= 0");
        if (!(p.persistence() < 1.0))
            throw ConfigError("synthetic spec: only stationary processes (alpha + beta < 1)");
    }
}

// Simulates n_days closes: the first element is p0 itself and each step is
// P_t = P_{t-1} * exp(r_t) with r_t = mu + sigma_t z_t, sigma2 following the
// GARCH(1,1) recursion from its unconditional level, and z_t standard normal
// from the seeded stream. Log-differences of the output reproduce the
// simulated returns exactly.
inline std::vector<double> simulate_garch_prices(const GarchParams& params, int n_days, double p0,
                                                 std::uint64_t seed) {
    if (n_days < 2) throw InsufficientData("simulate_garch_prices: need n_days >= 2");
    if (!(p0 > 0.0)) throw std::invalid_argument("simulate_garch_prices: p0 must be positive");
    if (!(params.persistence() < 1.0))
        throw std::invalid_argument("simulate_garch_prices: need alpha + beta < 1");

    SplitMix64 rng(seed);
    std::vector<double> closes;
    closes.reserve(static_cast<std::size_t>(n_days));
    closes.push_back(p0);

    double sigma2 = params.omega / (1.0 - params.alpha - params.beta);
    double price = p0;
    for (int t = 1; t < n_days; ++t) {
        const double z = rng.next_gaussian();
        const double r = params.mu + std::sqrt(sigma2) * z;
        const double innovation = r - params.mu;
        sigma2 = params.omega + params.alpha * innovation * innovation + params.beta * sigma2;
        price *= std::exp(r);
        closes.push_back(price);
    }
    return closes;
}

namespace synthetic_detail {

inline std::string make_ticker(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "SYN%03d", index + 1);
    return buf;
}

}  // namespace synthetic_detail

// Instrument i draws, in order, from its derived stream: listing offset,
// initial price (uniform in [20, 200]), one holiday draw per candidate
// trading day, then the return innovations.
inline std::vector<InstrumentSeries> make_universe(const SyntheticSpec& spec) {
    validate_spec(spec);
    std::vector<InstrumentSeries> universe;
    universe.reserve(static_cast<std::size_t>(spec.n_instruments));

    for (int i = 0; i < spec.n_instruments; ++i) {
        SplitMix64 rng(derive_stream_seed(spec.seed, static_cast<std::uint64_t>(i)));
        const auto offset = static_cast<std::int32_t>(
            rng.next_below(static_cast<std::uint64_t>(spec.listing_spread_days)));
        const double p0 = 20.0 + rng.next_uniform() * 180.0;

        const Date listing = spec.panel_start.plus_days(offset);
        std::vector<Date> dates;
        for (Date d = listing; d <= spec.panel_end; d = d.plus_days(1)) {
            if (!spec.trading_week.trades_on(d)) continue;
            if (spec.holiday_rate > 0.0 && rng.next_uniform() < spec.holiday_rate) continue;
            dates.push_back(d);
        }
        if (dates.size() < 2)
            throw ConfigError("synthetic spec: instrument " + synthetic_detail::make_ticker(i) +
                              " has fewer than 2 trading days; widen the panel");

        const GarchParams& params =
            spec.garch_params.size() == 1 ? spec.garch_params[0] : spec.garch_params[i];
        const auto closes = simulate_garch_prices(params, static_cast<int>(dates.size()), p0,
                                                  rng.next_u64());

        InstrumentSeries series;
        series.ticker = synthetic_detail::make_ticker(i);
        series.version = DatasetVersion::Unadjusted;
        series.rows.reserve(dates.size());
        for (std::size_t t = 0; t < dates.size(); ++t) {
            OhlcvRow row;
            row.date = dates[t];
            row.open = row.high = row.low = row.close = closes[t];
            row.volume = 1000.0;
            series.rows.push_back(row);
        }
        universe.push_back(std::move(series));
    }
    return universe;
}

// Writes a universe to disk in the exact ingestion layout (one CSV per
// ticker under each version directory), so the full CLI pipeline can run
// end-to-end without real data.
inline void write_universe_corpus(const std::vector<InstrumentSeries>& universe,
                                  const std::filesystem::path& adjusted_dir,
                                  const std::filesystem::path& unadjusted_dir) {
    std::filesystem::create_directories(adjusted_dir);
    std::filesystem::create_directories(unadjusted_dir);
    for (const auto& series : universe) {
        for (const auto& dir : {adjusted_dir, unadjusted_dir}) {
            std::ofstream out(dir / (series.ticker + ".csv"), std::ios::binary);
            if (!out) throw ConfigError("cannot write corpus file under " + dir.string());
            write_eod_csv(series, out);
        }
    }
}

}  // namespace covpanel
