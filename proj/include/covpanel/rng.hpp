#pragma once

#include <cmath>
#include <cstdint>

namespace covpanel {

// Deterministic 64-bit generator (splitmix64, Steele/Lea/Vigna constants).
// The i-th output for seed s is mix(s + (i+1) * 0x9E3779B97F4A7C15), a pure
// counter scheme: any implementation, in any language, can reproduce the
// stream from the seed alone. Used for every stochastic fixture in the
// project so acceptance numbers never depend on a platform RNG.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform on (0,1): top 53 bits plus a half-ulp offset, so 0 and 1
    // are never produced and the inverse normal below stays finite.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Acklam's inverse-CDF rational approximation
    // (relative error < 1.15e-9). Inverse-CDF keeps the draw a pure
    // function of the uniform, which keeps streams reproducible.
    double next_gaussian() { return inverse_normal_cdf(next_uniform()); }

    // Integer uniform on [0, bound] (bound inclusive).
    std::uint64_t next_below(std::uint64_t bound_inclusive) {
        double u = next_uniform();
        auto v = static_cast<std::uint64_t>(u * static_cast<double>(bound_inclusive + 1));
        return v > bound_inclusive ? bound_inclusive : v;
    }

    static double inverse_normal_cdf(double p) {
        static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                        -2.759285104469687e+02, 1.383577518672690e+02,
                                        -3.066479806614716e+01, 2.506628277459239e+00};
        static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                        -1.556989798598866e+02, 6.680131188771972e+01,
                                        -1.328068155288572e+01};
        static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                        -2.400758277161838e+00, -2.549732539343734e+00,
                                        4.374664141464968e+00,  2.938163982698783e+00};
        static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                        2.445134137142996e+00, 3.754408661907416e+00};
        constexpr double p_low = 0.02425;

        if (p < p_low) {
            double q = std::sqrt(-2.0 * std::log(p));
            return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
                   ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
        }
        if (p <= 1.0 - p_low) {
            double q = p - 0.5;
            double r = q * q;
            return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
                   (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
        }
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

private:
    std::uint64_t state_;
};

// Per-entity sub-stream seed: mix(seed + (index+1) * 0xD1B54A32D192ED03).
// Documented so cross-language reimplementations can derive the same
// instrument-level streams.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0xD1B54A32D192ED03ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace covpanel
