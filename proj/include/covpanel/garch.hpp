#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "covpanel/construction.hpp"
#include "covpanel/errors.hpp"
#include "covpanel/nelder_mead.hpp"

namespace covpanel {

struct GarchParams {
    double mu = 0.0;
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;

    double persistence() const { return alpha + beta; }
};

struct GarchFit {
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double mu = 0.0;
    double loglik = 0.0;
    std::int64_t n_obs = 0;
    double persistence = 0.0;  // alpha + beta
    bool breakdown = false;    // persistence >= breakdown threshold

    GarchParams params() const { return {mu, omega, alpha, beta}; }
};

struct GarchConvergenceFailure : ConvergenceFailure {
    GarchFit best;
    explicit GarchConvergenceFailure(GarchFit b)
        : ConvergenceFailure("GARCH(1,1) fit did not converge within the iteration budget"),
          best(std::move(b)) {}
};

struct FitConfig {
    int max_iterations = 2000;
    double rel_tol = 1e-10;
    double breakdown_threshold = 0.999;
    // Optional sink for soft warnings (short samples). Null = silent.
    std::function<void(const std::string&)> warn;
};

namespace garch_detail {

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
inline double logit(double p) { return std::log(p / (1.0 - p)); }

// Unconstrained coordinates: (mu, ln omega, logit alpha, logit beta).
// alpha and beta are mapped independently, so nothing pins the persistence
// below 1 and estimation breakdown stays observable.
inline GarchParams params_from_theta(const std::vector<double>& th) {
    return {th[0], std::exp(th[1]), logistic(th[2]), logistic(th[3])};
}

inline std::vector<double> theta_from_params(const GarchParams& p) {
    return {p.mu, std::log(p.omega), logit(p.alpha), logit(p.beta)};
}

// Gaussian log-likelihood of the GARCH(1,1) recursion
//   sigma2_t = omega + alpha (r_{t-1} - mu)^2 + beta sigma2_{t-1}
// with sigma2_1 backcast to the mean squared demeaned return, so zero
// padding flows through the (r - mu)^2 terms. Returns nullopt on any
// non-finite intermediate.
inline std::optional<double> loglik_impl(const GarchParams& p, std::span<const double> r) {
    const std::size_t n = r.size();
    double backcast = 0.0;
    for (double x : r) {
        const double d = x - p.mu;
        backcast += d * d;
    }
    backcast /= static_cast<double>(n);

    constexpr double ln_2pi = 1.8378770664093454836;
    double sigma2 = backcast;
    double ll = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) return std::nullopt;
        const double e = r[t] - p.mu;
        ll -= 0.5 * (ln_2pi + std::log(sigma2) + e * e / sigma2);
        sigma2 = p.omega + p.alpha * e * e + p.beta * sigma2;
    }
    if (!std::isfinite(ll)) return std::nullopt;
    return ll;
}

}  // namespace garch_detail

// Gaussian GARCH(1,1) log-likelihood. Throws NonFiniteLikelihood when the
// variance recursion degenerates (underflow to zero, overflow, NaN).
inline double garch_loglik(const GarchParams& p, std::span<const double> returns) {
    if (!(p.omega > 0.0) || p.alpha < 0.0 || p.beta < 0.0)
        throw std::invalid_argument("garch_loglik: require omega > 0, alpha >= 0, beta >= 0");
    if (returns.size() < 2) throw InsufficientData("garch_loglik: need at least 2 returns");
    auto ll = garch_detail::loglik_impl(p, returns);
    if (!ll) throw NonFiniteLikelihood("garch_loglik: non-finite intermediate value");
    return *ll;
}

inline double garch_loglik(const GarchParams& p, const ReturnSeries& returns) {
    return garch_loglik(p, return_values(returns));
}

// Maximum-likelihood GARCH(1,1) fit with a jointly estimated constant mean.
// Derivative-free simplex search over transformed parameters, run from three
// deterministic starting points; the best final point wins. Throws
// GarchConvergenceFailure (carrying the best fit seen) if no restart meets
// the tolerance within the iteration budget.
inline GarchFit fit_garch11(std::span<const double> returns, const FitConfig& config = {}) {
    const std::size_t n = returns.size();
    if (n < 10) throw InsufficientData("fit_garch11: need at least 10 returns");
    if (n < 100 && config.warn)
        config.warn("fit_garch11: only " + std::to_string(n) +
                    " returns; estimates will be unstable");

    double mean = 0.0;
    for (double x : returns) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : returns) {
        const double d = x - mean;
        var += d * d;
    }
    var /= static_cast<double>(n);
    if (!(var > 0.0)) var = 1e-12;
    const double sd = std::sqrt(var);

    auto objective = [&](const std::vector<double>& th) -> double {
        for (double v : th)
            if (!std::isfinite(v)) return 1e100;
        const GarchParams p = garch_detail::params_from_theta(th);
        if (!(p.omega > 0.0)) return 1e100;
        auto ll = garch_detail::loglik_impl(p, returns);
        return ll ? -*ll : 1e100;
    };

    struct Start { double alpha, beta; };
    constexpr Start starts[3] = {{0.05, 0.90}, {0.10, 0.80}, {0.30, 0.40}};
    const std::vector<double> steps = {std::max(0.1 * sd, 1e-8), 0.5, 0.5, 0.5};

    SimplexOptions opts;
    opts.max_iterations = config.max_iterations;
    opts.rel_tol = config.rel_tol;

    SimplexResult best;
    best.fval = std::numeric_limits<double>::infinity();
    bool best_converged = false;
    for (const auto& s : starts) {
        const double omega0 = std::max(var * (1.0 - s.alpha - s.beta), 1e-300);
        const std::vector<double> theta0 = {mean, std::log(omega0), garch_detail::logit(s.alpha),
                                            garch_detail::logit(s.beta)};
        SimplexResult r = nelder_mead_minimize(objective, theta0, steps, opts);
        if (r.fval < best.fval) {
            best = std::move(r);
            best_converged = best.converged;
        }
    }

    // polish pass: reseed a small simplex at the incumbent with a much
    // tighter tolerance, so the final point sits at a stationary point of
    // the likelihood rather than inside the first simplex's collapsed
    // geometry. The likelihood curvature in mu is of order n / sigma^2, so
    // the main tolerance alone leaves a measurable gradient there.
    SimplexOptions polish_opts = opts;
    polish_opts.rel_tol = std::min(opts.rel_tol, 1e-14);
    const std::vector<double> polish_steps = {std::max(0.01 * sd, 1e-9), 0.05, 0.05, 0.05};
    SimplexResult polish = nelder_mead_minimize(objective, best.x, polish_steps, polish_opts);
    if (polish.fval <= best.fval) {
        best_converged = polish.converged || best_converged;
        best = std::move(polish);
    }

    if (best.fval >= 1e99)
        throw NonFiniteLikelihood("fit_garch11: likelihood is non-finite everywhere the search looked");

    const GarchParams p = garch_detail::params_from_theta(best.x);
    GarchFit fit;
    fit.omega = p.omega;
    fit.alpha = p.alpha;
    fit.beta = p.beta;
    fit.mu = p.mu;
    fit.loglik = -best.fval;
    fit.n_obs = static_cast<std::int64_t>(n);
    fit.persistence = p.persistence();
    fit.breakdown = fit.persistence >= config.breakdown_threshold;
    if (!best_converged) throw GarchConvergenceFailure(fit);
    return fit;
}

inline GarchFit fit_garch11(const ReturnSeries& returns, const FitConfig& config = {}) {
    return fit_garch11(return_values(returns), config);
}

// Long-run variance omega / (1 - alpha - beta). Only defined for
// non-breakdown fits; breakdown fits are estimation failures.
inline double unconditional_variance(const GarchFit& fit) {
    if (fit.breakdown)
        throw BreakdownError("unconditional_variance: persistence " +
                             std::to_string(fit.persistence) + " is at or above the breakdown threshold");
    return fit.omega / (1.0 - fit.alpha - fit.beta);
}

}  // namespace covpanel
