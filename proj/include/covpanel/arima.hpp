#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "covpanel/construction.hpp"
#include "covpanel/errors.hpp"
#include "covpanel/garch.hpp"  // FitConfig
#include "covpanel/nelder_mead.hpp"

namespace covpanel {

// ARMA(1,1) on returns, i.e. ARIMA(1,0,1):
//   r_t = c + phi r_{t-1} + theta eps_{t-1} + eps_t
// estimated by conditional sum of squares (pre-sample residual zero,
// conditioning on the first observation).
struct ArimaFit {
    double c = 0.0;
    double phi = 0.0;
    double theta = 0.0;
    double sigma2_eps = 0.0;
    double loglik = 0.0;
    double aic = 0.0;  // 2k - 2 loglik, k = 4
    double bic = 0.0;  // k ln(n_obs) - 2 loglik
    std::int64_t n_obs = 0;
};

struct ArimaConvergenceFailure : ConvergenceFailure {
    ArimaFit best;
    explicit ArimaConvergenceFailure(ArimaFit b)
        : ConvergenceFailure("ARIMA(1,0,1) fit did not converge within the iteration budget"),
          best(std::move(b)) {}
};

struct ForecastMetrics {
    double rmse = 0.0;
    double mae = 0.0;
    std::int64_t n_test = 0;
    double split_fraction = 0.0;
};

namespace arima_detail {

// Conditional residual recursion over t = 2..n with eps_1 = 0.
// Returns the sum of squared residuals, plus the final lagged state needed
// to continue one-step forecasting past the end of the sample.
struct CssState {
    double ssr = 0.0;
    double last_eps = 0.0;
    double last_r = 0.0;
    std::int64_t n_terms = 0;
};

inline CssState css_recursion(double c, double phi, double theta, std::span<const double> r) {
    CssState st;
    st.last_r = r[0];
    double eps_prev = 0.0;
    for (std::size_t t = 1; t < r.size(); ++t) {
        const double pred = c + phi * r[t - 1] + theta * eps_prev;
        const double eps = r[t] - pred;
        st.ssr += eps * eps;
        eps_prev = eps;
    }
    st.last_eps = eps_prev;
    st.last_r = r.back();
    st.n_terms = static_cast<std::int64_t>(r.size()) - 1;
    return st;
}

// Gaussian CSS log-likelihood with the innovation variance concentrated out.
inline double css_loglik(double c, double phi, double theta, std::span<const double> r) {
    const CssState st = css_recursion(c, phi, theta, r);
    const double n = static_cast<double>(st.n_terms);
    const double sigma2 = std::max(st.ssr / n, 1e-300);
    constexpr double ln_2pi = 1.8378770664093454836;
    return -0.5 * n * (ln_2pi + std::log(sigma2) + 1.0);
}

}  // namespace arima_detail

// CSS maximum-likelihood ARIMA(1,0,1) with constant. Stationarity and
// invertibility enforced via tanh parameterization of phi and theta.
inline ArimaFit fit_arima101(std::span<const double> returns, const FitConfig& config = {}) {
    const std::size_t n = returns.size();
    if (n < 50) throw InsufficientData("fit_arima101: need at least 50 returns");

    double mean = 0.0;
    for (double x : returns) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : returns) {
        const double d = x - mean;
        var += d * d;
    }
    var /= static_cast<double>(n);
    const double sd = std::sqrt(std::max(var, 0.0));

    auto objective = [&](const std::vector<double>& th) -> double {
        for (double v : th)
            if (!std::isfinite(v)) return 1e100;
        const double ll = arima_detail::css_loglik(th[0], std::tanh(th[1]), std::tanh(th[2]), returns);
        return std::isfinite(ll) ? -ll : 1e100;
    };

    struct Start { double phi, theta; };
    constexpr Start starts[3] = {{0.0, 0.0}, {0.5, -0.3}, {-0.4, 0.3}};
    const std::vector<double> steps = {std::max(0.1 * sd, 1e-8), 0.3, 0.3};

    SimplexOptions opts;
    opts.max_iterations = config.max_iterations;
    opts.rel_tol = config.rel_tol;

    SimplexResult best;
    best.fval = std::numeric_limits<double>::infinity();
    bool best_converged = false;
    for (const auto& s : starts) {
        const std::vector<double> theta0 = {mean, std::atanh(s.phi), std::atanh(s.theta)};
        SimplexResult r = nelder_mead_minimize(objective, theta0, steps, opts);
        if (r.fval < best.fval) {
            best = std::move(r);
            best_converged = best.converged;
        }
    }

    ArimaFit fit;
    fit.c = best.x[0];
    fit.phi = std::tanh(best.x[1]);
    fit.theta = std::tanh(best.x[2]);
    const auto st = arima_detail::css_recursion(fit.c, fit.phi, fit.theta, returns);
    fit.sigma2_eps = st.ssr / static_cast<double>(st.n_terms);
    fit.loglik = -best.fval;
    fit.n_obs = static_cast<std::int64_t>(n);
    constexpr double k = 4.0;  // c, phi, theta, sigma2_eps
    fit.aic = 2.0 * k - 2.0 * fit.loglik;
    fit.bic = k * std::log(static_cast<double>(fit.n_obs)) - 2.0 * fit.loglik;
    if (!best_converged) throw ArimaConvergenceFailure(fit);
    return fit;
}

inline ArimaFit fit_arima101(const ReturnSeries& returns, const FitConfig& config = {}) {
    return fit_arima101(return_values(returns), config);
}

// Chronological train/test split: fit on the first split_fraction of the
// series, then one-step-ahead forecasts over the test segment with the
// parameters frozen and only the lagged observation/residual state updated.
inline ForecastMetrics rolling_forecast(std::span<const double> returns, double split_fraction,
                                        const FitConfig& config = {}) {
    if (!(split_fraction > 0.0) || !(split_fraction < 1.0))
        throw std::invalid_argument("rolling_forecast: split_fraction must be in (0,1)");
    const std::size_t n = returns.size();
    const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * split_fraction));
    if (n_train < 50 || n - n_train < 20)
        throw InsufficientData("rolling_forecast: need >= 50 training and >= 20 test returns");

    ArimaFit fit;
    try {
        fit = fit_arima101(returns.subspan(0, n_train), config);
    } catch (const ArimaConvergenceFailure& e) {
        fit = e.best;  // frozen parameters only; best-so-far is usable here
    }

    auto state = arima_detail::css_recursion(fit.c, fit.phi, fit.theta, returns.subspan(0, n_train));
    double eps_prev = state.last_eps;
    double r_prev = state.last_r;

    double sum_sq = 0.0, sum_abs = 0.0;
    const std::size_t n_test = n - n_train;
    for (std::size_t t = n_train; t < n; ++t) {
        const double pred = fit.c + fit.phi * r_prev + fit.theta * eps_prev;
        const double err = returns[t] - pred;
        sum_sq += err * err;
        sum_abs += std::fabs(err);
        eps_prev = err;
        r_prev = returns[t];
    }

    ForecastMetrics m;
    m.rmse = std::sqrt(sum_sq / static_cast<double>(n_test));
    m.mae = sum_abs / static_cast<double>(n_test);
    m.n_test = static_cast<std::int64_t>(n_test);
    m.split_fraction = split_fraction;
    if (m.rmse < m.mae * (1.0 - 1e-12))
        throw InternalInvariantViolation("rolling_forecast: rmse < mae");
    return m;
}

inline ForecastMetrics rolling_forecast(const ReturnSeries& returns, double split_fraction,
                                        const FitConfig& config = {}) {
    return rolling_forecast(return_values(returns), split_fraction, config);
}

}  // namespace covpanel
