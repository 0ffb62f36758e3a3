#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"
#include "specfun.hpp"

namespace wnev {

// tau_n(x; a) = prod_{k<n} ((a + k i)^2 - x)
inline cplx tau(int n, cplx a, cplx x) {
    cplx t = 1.0;
    for (int k = 0; k < n; ++k) {
        cplx node = a + double(k) * I;
        t *= node * node - x;
    }
    return t;
}

inline cplx series_node(cplx a, int j) {
    cplx w = a + double(j) * I;
    return w * w;
}

struct wilson_series {
    cplx a;
    std::vector<cplx> coefficients;
    int K = 0;
    double gate_margin = 0.0;
    bool gate_passed = true;
    bool gate_checked = false;
};

inline const std::vector<double>& default_gate_grid() {
    static const std::vector<double> g = log_grid(1.0, 1e4, 25);
    return g;
}

// 2 ln 2 minus the top-decade maximum of ln M(r)/sqrt(r), M from 720 samples per circle.
inline double growth_gate_log(const std::function<double(cplx)>& log_abs_f,
                              const std::vector<double>& grid = default_gate_grid()) {
    constexpr int samples = 720;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j : top_decade(grid)) {
        double r = grid[j];
        double lm = -std::numeric_limits<double>::infinity();
        for (int s = 0; s < samples; ++s) {
            double th = 2.0 * pi * (double(s) + 0.5) / samples;
            lm = std::max(lm, log_abs_f(std::polar(r, th)));
        }
        worst = std::max(worst, lm / std::sqrt(r));
    }
    return 2.0 * std::log(2.0) - worst;
}

inline double growth_gate(const std::function<cplx(cplx)>& f, const std::vector<double>& grid = default_gate_grid()) {
    return growth_gate_log([&](cplx x) { return std::log(std::abs(f(x))); }, grid);
}

// Forward substitution at the nodes (a + j i)^2; tau_k vanishes at nodes j < k.
inline wilson_series expand(const std::function<cplx(cplx)>& f, cplx a, int K = 64, bool run_gate = true) {
    if (K < 0) throw error(errc::parameter, "wilson-series", "truncation must be nonnegative");
    wilson_series s;
    s.a = a;
    s.K = K;
    if (run_gate) {
        s.gate_checked = true;
        s.gate_margin = growth_gate(f);
        s.gate_passed = s.gate_margin > 0.0;
    }
    std::vector<cplx> nodes(K + 1);
    for (int j = 0; j <= K; ++j) nodes[j] = series_node(a, j);
    s.coefficients.assign(K + 1, 0.0);
    for (int m = 0; m <= K; ++m) {
        cplx acc = f(nodes[m]);
        cplx t = 1.0;
        for (int k = 0; k < m; ++k) {
            acc -= s.coefficients[k] * t;
            t *= nodes[k] - nodes[m];
        }
        // t = tau_m(x_m) = prod_{j<m} i(j-m)(2a + (j+m)i)
        if (std::abs(t) == 0.0 || !std::isfinite(std::abs(t)))
            throw error(errc::singular, "wilson-series", "diagonal entry tau_m(x_m) vanished or overflowed at m=" +
                                                             std::to_string(m));
        s.coefficients[m] = acc / t;
    }
    return s;
}

// Nested evaluation: acc <- a_k + (x_k - x) acc.
inline cplx reconstruct(const wilson_series& s, cplx x) {
    cplx acc = 0.0;
    for (int k = int(s.coefficients.size()) - 1; k >= 0; --k) acc = s.coefficients[k] + (series_node(s.a, k) - x) * acc;
    return acc;
}

} // namespace wnev
