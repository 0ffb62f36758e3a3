#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "errors.hpp"

namespace wnev {

// ppd log-spaced radii per decade covering [rmin, rmax], both ends included.
inline std::vector<double> log_grid(double rmin, double rmax, int ppd = 25) {
    if (!(rmin > 0.0 && rmax > rmin) || ppd < 1)
        throw error(errc::degenerate_grid, "nevanlinna", "log grid needs 0 < rmin < rmax and ppd >= 1");
    double decades = std::log10(rmax / rmin);
    int n = std::max(1, int(std::ceil(decades * ppd - 1e-9)));
    std::vector<double> g(n + 1);
    for (int j = 0; j <= n; ++j) g[j] = rmin * std::pow(rmax / rmin, double(j) / double(n));
    g.back() = rmax;
    return g;
}

inline double grid_decades(const std::vector<double>& grid) {
    if (grid.size() < 2) return 0.0;
    auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
    return std::log10(*hi / *lo);
}

// Indices of radii in the top decade [rmax/10, rmax].
inline std::vector<std::size_t> top_decade(const std::vector<double>& grid) {
    if (grid.empty()) return {};
    double rmax = *std::max_element(grid.begin(), grid.end());
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < grid.size(); ++j)
        if (grid[j] >= rmax / 10.0 * (1.0 - 1e-12)) idx.push_back(j);
    return idx;
}

struct line_fit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double max_residual = 0.0;
    std::size_t points = 0;
};

inline line_fit ols_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    line_fit f;
    const std::size_t n = std::min(xs.size(), ys.size());
    f.points = n;
    if (n < 2) throw error(errc::degenerate_grid, "nevanlinna", "fit needs at least two points");
    double mx = 0, my = 0;
    for (std::size_t j = 0; j < n; ++j) { mx += xs[j]; my += ys[j]; }
    mx /= double(n);
    my /= double(n);
    double sxx = 0, sxy = 0;
    for (std::size_t j = 0; j < n; ++j) {
        sxx += (xs[j] - mx) * (xs[j] - mx);
        sxy += (xs[j] - mx) * (ys[j] - my);
    }
    if (sxx <= 0.0) throw error(errc::degenerate_grid, "nevanlinna", "fit abscissae are all equal");
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t j = 0; j < n; ++j) {
        double e = ys[j] - (f.intercept + f.slope * xs[j]);
        ss += e * e;
        f.max_residual = std::max(f.max_residual, std::abs(e));
    }
    if (n > 2) f.slope_stderr = std::sqrt(ss / double(n - 2) / sxx);
    return f;
}

// Least-squares exponent of value against r on the top decade of the grid.
inline line_fit growth_exponent(const std::vector<double>& grid, const std::vector<double>& values) {
    std::vector<double> lx, ly;
    for (std::size_t j : top_decade(grid)) {
        lx.push_back(std::log(grid[j]));
        ly.push_back(std::log(std::max(values[j], 1e-300)));
    }
    return ols_fit(lx, ly);
}

inline unsigned default_threads() {
    unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1u : h;
}

// Runs fn(j) for j in [0, n) on a small worker pool; the first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned threads = 0) {
    if (threads == 0) threads = default_threads();
    threads = unsigned(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t j = 0; j < n; ++j) fn(j);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t j = next.fetch_add(1);
                if (j >= n) return;
                try {
                    fn(j);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!failure) failure = std::current_exception();
                    next.store(n);
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace wnev
