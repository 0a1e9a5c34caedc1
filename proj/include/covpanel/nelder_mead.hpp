#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace covpanel {

struct SimplexOptions {
    int max_iterations = 2000;
    double rel_tol = 1e-10;  // on the simplex function-value spread
};

struct SimplexResult {
    std::vector<double> x;
    double fval = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Nelder-Mead downhill simplex with the standard coefficients
// (reflect 1, expand 2, contract 0.5, shrink 0.5). Deterministic:
// no randomized restarts or tie-breaking.
inline SimplexResult nelder_mead_minimize(const std::function<double(const std::vector<double>&)>& f,
                                          const std::vector<double>& x0,
                                          const std::vector<double>& steps,
                                          const SimplexOptions& opt = {}) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> x(n + 1, x0);
    for (std::size_t j = 0; j < n; ++j) x[j + 1][j] += steps[j];

    std::vector<double> fx(n + 1);
    for (std::size_t j = 0; j <= n; ++j) fx[j] = f(x[j]);

    std::vector<std::size_t> order(n + 1);
    auto sort_order = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    };

    SimplexResult result;
    int iter = 0;
    for (; iter < opt.max_iterations; ++iter) {
        sort_order();
        const double fbest = fx[order[0]];
        const double fworst = fx[order[n]];
        if (2.0 * std::fabs(fworst - fbest) <=
            opt.rel_tol * (std::fabs(fworst) + std::fabs(fbest) + 1e-300)) {
            result.converged = true;
            break;
        }

        // centroid of all but the worst vertex
        std::vector<double> centroid(n, 0.0);
        for (std::size_t j = 0; j <= n; ++j) {
            if (j == order[n]) continue;
            for (std::size_t i = 0; i < n; ++i) centroid[i] += x[j][i];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](const std::vector<double>& from, double coef) {
            std::vector<double> p(n);
            for (std::size_t i = 0; i < n; ++i) p[i] = centroid[i] + coef * (from[i] - centroid[i]);
            return p;
        };

        const std::vector<double>& worst = x[order[n]];
        std::vector<double> xr = blend(worst, -1.0);
        double fr = f(xr);

        if (fr < fx[order[0]]) {
            std::vector<double> xe = blend(worst, -2.0);
            double fe = f(xe);
            if (fe < fr) { x[order[n]] = std::move(xe); fx[order[n]] = fe; }
            else         { x[order[n]] = std::move(xr); fx[order[n]] = fr; }
        } else if (fr < fx[order[n - 1]]) {
            x[order[n]] = std::move(xr);
            fx[order[n]] = fr;
        } else if (fr < fx[order[n]]) {
            std::vector<double> xc = blend(xr, 0.5);
            double fc = f(xc);
            if (fc <= fr) { x[order[n]] = std::move(xc); fx[order[n]] = fc; }
            else          { x[order[n]] = std::move(xr); fx[order[n]] = fr; }
        } else {
            std::vector<double> xc = blend(worst, 0.5);
            double fc = f(xc);
            if (fc < fx[order[n]]) {
                x[order[n]] = std::move(xc);
                fx[order[n]] = fc;
            } else {
                for (std::size_t j = 1; j <= n; ++j) {
                    std::size_t idx = order[j];
                    for (std::size_t i = 0; i < n; ++i)
                        x[idx][i] = x[order[0]][i] + 0.5 * (x[idx][i] - x[order[0]][i]);
                    fx[idx] = f(x[idx]);
                }
            }
        }
    }

    sort_order();
    result.x = x[order[0]];
    result.fval = fx[order[0]];
    result.iterations = iter;
    return result;
}

}  // namespace covpanel
