#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "covpanel/errors.hpp"

namespace covpanel {

inline double sample_mean(std::span<const double> xs) {
    if (xs.empty()) throw InsufficientData("sample_mean: empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

// Unbiased (n-1) sample variance, two-pass.
inline double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) throw InsufficientData("sample_variance: need at least 2 observations");
    const double m = sample_mean(xs);
    double ss = 0.0;
    for (double x : xs) {
        const double d = x - m;
        ss += d * d;
    }
    return ss / static_cast<double>(xs.size() - 1);
}

inline double sample_std(std::span<const double> xs) { return std::sqrt(sample_variance(xs)); }

// Quantile with linear interpolation between order statistics
// (h = (n-1)p convention). Input need not be sorted.
inline double quantile(std::span<const double> xs, double p) {
    if (xs.empty()) throw InsufficientData("quantile: empty sample");
    std::vector<double> s(xs.begin(), xs.end());
    std::sort(s.begin(), s.end());
    if (p <= 0.0) return s.front();
    if (p >= 1.0) return s.back();
    const double h = static_cast<double>(s.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= s.size()) return s.back();
    return s[lo] + frac * (s[lo + 1] - s[lo]);
}

inline double median(std::span<const double> xs) { return quantile(xs, 0.5); }

namespace detail {

// Continued fraction for the regularized incomplete beta (Lentz's method).
inline double beta_cont_fraction(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 3e-16;
    constexpr double fpmin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace detail

// Regularized incomplete beta function I_x(a, b).
inline double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * detail::beta_cont_fraction(a, b, x) / a;
    return 1.0 - front * detail::beta_cont_fraction(b, a, 1.0 - x) / b;
}

// Two-sided p-value P(|T_dof| >= |t|) for the Student t distribution.
inline double student_t_two_sided_p(double t, double dof) {
    if (dof <= 0.0) throw UndefinedTest("student_t_two_sided_p: dof must be positive");
    if (t == 0.0) return 1.0;
    const double x = dof / (dof + t * t);
    return regularized_incomplete_beta(0.5 * dof, 0.5, x);
}

namespace detail {

// Upper tail P(X >= k) for X ~ Binomial(m, 1/2). For m small enough that
// the coefficient sum stays finite, sums exact binomial coefficients and
// scales by 2^-m with ldexp, so single-term tails (the k == m case used by
// the all-positive sign test) are exact in double precision.
inline double binomial_half_upper_tail(std::int64_t m, std::int64_t k) {
    if (k <= 0) return 1.0;
    if (k > m) return 0.0;
    if (m <= 1020) {
        double coeff = std::exp(std::lgamma(static_cast<double>(m) + 1.0) -
                                std::lgamma(static_cast<double>(k) + 1.0) -
                                std::lgamma(static_cast<double>(m - k) + 1.0));
        if (k == m) coeff = 1.0;
        double sum = 0.0;
        for (std::int64_t i = k; i <= m; ++i) {
            sum += coeff;
            coeff *= static_cast<double>(m - i) / static_cast<double>(i + 1);
        }
        return std::min(1.0, sum * std::ldexp(1.0, static_cast<int>(-m)));
    }
    // log-space fallback for very large samples
    double tail = 0.0;
    const double ln_half = -0.693147180559945309417232121458;  // ln(1/2)
    for (std::int64_t i = k; i <= m; ++i) {
        const double ln_term = std::lgamma(static_cast<double>(m) + 1.0) -
                               std::lgamma(static_cast<double>(i) + 1.0) -
                               std::lgamma(static_cast<double>(m - i) + 1.0) +
                               static_cast<double>(m) * ln_half;
        tail += std::exp(ln_term);
    }
    return std::min(1.0, tail);
}

}  // namespace detail

// Exact two-sided binomial sign test for H0: median = 0. Zeros are dropped
// per the standard convention; p = min(1, 2 * min(P(X <= k), P(X >= k)))
// with X ~ Binomial(#nonzero, 1/2) and k the count of positives.
inline double sign_test(std::span<const double> deltas) {
    if (deltas.empty()) throw UndefinedTest("sign_test: empty sample");
    std::int64_t m = 0, k = 0;
    for (double d : deltas) {
        if (d == 0.0) continue;
        ++m;
        if (d > 0.0) ++k;
    }
    if (m == 0) throw UndefinedTest("sign_test: all deltas are zero");
    const double upper = detail::binomial_half_upper_tail(m, k);       // P(X >= k)
    const double lower = detail::binomial_half_upper_tail(m, m - k);   // P(X <= k) by symmetry
    return std::min(1.0, 2.0 * std::min(lower, upper));
}

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
};

// One-sample two-sided t test of zero mean.
inline TTestResult t_test(std::span<const double> deltas) {
    if (deltas.size() < 2) throw UndefinedTest("t_test: need at least 2 observations");
    const double m = sample_mean(deltas);
    const double s = sample_std(deltas);
    if (s <= 0.0) throw UndefinedTest("t_test: zero sample variance");
    const double n = static_cast<double>(deltas.size());
    const double t = m / (s / std::sqrt(n));
    return {t, student_t_two_sided_p(t, n - 1.0)};
}

}  // namespace covpanel
