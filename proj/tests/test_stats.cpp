#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "covpanel/stats.hpp"

using namespace covpanel;
using Catch::Approx;

TEST_CASE("sample statistics basics") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    CHECK(sample_mean(xs) == Approx(2.5));
    CHECK(sample_variance(xs) == Approx(5.0 / 3.0));
    CHECK(median(xs) == Approx(2.5));
    CHECK(median(std::vector<double>{3.0, 1.0, 2.0}) == Approx(2.0));
    CHECK(quantile(xs, 0.25) == Approx(1.75));
    CHECK_THROWS_AS(sample_variance(std::vector<double>{1.0}), InsufficientData);
}

TEST_CASE("sign test matches the exact binomial") {
    SECTION("53 of 53 positive is exactly 2 * 0.5^53") {
        std::vector<double> deltas(53, 0.2);
        CHECK(sign_test(deltas) == std::ldexp(1.0, -52));
        CHECK(sign_test(deltas) < 1e-4);
    }
    SECTION("5 of 10 positive is 1") {
        std::vector<double> deltas(10, 1.0);
        for (int i = 0; i < 5; ++i) deltas[i] = -1.0;
        CHECK(sign_test(deltas) == 1.0);
    }
    SECTION("1 of 1 positive is 1 (two-sided cap)") {
        CHECK(sign_test(std::vector<double>{0.5}) == 1.0);
    }
    SECTION("zeros are excluded from the count") {
        // 3 of 3 nonzero positive: p = 2 * 0.5^3 = 0.25
        CHECK(sign_test(std::vector<double>{0.1, 0.0, 0.2, 0.0, 0.3}) == Approx(0.25));
    }
    SECTION("asymmetric counts use the smaller tail") {
        // 9 of 10 positive: 2 * P(X >= 9) = 2 * 11/1024
        CHECK(sign_test(std::vector<double>{1, 1, 1, 1, 1, 1, 1, 1, 1, -1}) ==
              Approx(2.0 * 11.0 / 1024.0));
    }
    SECTION("all-zero input is undefined") {
        CHECK_THROWS_AS(sign_test(std::vector<double>{0.0, 0.0}), UndefinedTest);
        CHECK_THROWS_AS(sign_test(std::vector<double>{}), UndefinedTest);
    }
}

TEST_CASE("one-sample t test") {
    SECTION("hand-computed example") {
        // mean 0.20, s = 0.01, t = 0.20 / (0.01 / sqrt(3)) = 20 sqrt(3)
        const auto r = t_test(std::vector<double>{0.19, 0.20, 0.21});
        CHECK(r.t == Approx(34.6410161513775).epsilon(1e-12));
        CHECK(r.p < 1e-3);
    }
    SECTION("symmetric pair has t = 0, p = 1") {
        const auto r = t_test(std::vector<double>{1.0, -1.0});
        CHECK(r.t == 0.0);
        CHECK(r.p == 1.0);
    }
    SECTION("degenerate inputs") {
        CHECK_THROWS_AS(t_test(std::vector<double>{0.3, 0.3, 0.3}), UndefinedTest);
        CHECK_THROWS_AS(t_test(std::vector<double>{0.3}), UndefinedTest);
    }
}

TEST_CASE("student t tail probabilities agree with reference values") {
    // two-sided p for t = 2, dof = 10 is 0.073388034770740366 (reference value
    // from the exact incomplete-beta identity evaluated independently)
    CHECK(student_t_two_sided_p(2.0, 10.0) == Approx(0.073388034770740366).epsilon(1e-10));
    // t = 1, dof = 1 is a Cauchy: two-sided p = 0.5
    CHECK(student_t_two_sided_p(1.0, 1.0) == Approx(0.5).epsilon(1e-10));
    // large-dof limit approaches the normal tail: t = 1.96, dof = 1e6
    CHECK(student_t_two_sided_p(1.96, 1e6) == Approx(0.0499957).margin(5e-4));
}

TEST_CASE("incomplete beta endpoints and symmetry") {
    CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // I_x(a,b) = 1 - I_{1-x}(b,a)
    for (double x : {0.1, 0.37, 0.5, 0.82}) {
        const double lhs = regularized_incomplete_beta(1.7, 2.9, x);
        const double rhs = 1.0 - regularized_incomplete_beta(2.9, 1.7, 1.0 - x);
        CHECK(lhs == Approx(rhs).epsilon(1e-12));
    }
    // I_x(1,1) = x
    CHECK(regularized_incomplete_beta(1.0, 1.0, 0.42) == Approx(0.42).epsilon(1e-12));
}
