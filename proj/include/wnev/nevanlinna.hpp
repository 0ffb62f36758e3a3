#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "divisor.hpp"
#include "errors.hpp"
#include "funcmodel.hpp"
#include "numerics.hpp"
#include "wilson_core.hpp"

namespace wnev {

struct quad_tolerance {
    double abs = 1e-8;
    double rel = 0.0;
};

// Absolute 1e-8 up to r = 1e3, relative 1e-6 beyond.
inline quad_tolerance default_tolerance(double r) {
    if (r <= 1e3) return {1e-8, 0.0};
    return {0.0, 1e-6};
}

inline quad_tolerance tolerance_for(double r, double tol) {
    if (tol > 0.0) return r <= 1e3 ? quad_tolerance{tol, 0.0} : quad_tolerance{0.0, tol};
    return default_tolerance(r);
}

struct circle_integral {
    double value = 0.0;
    double error = 0.0;
    double r_used = 0.0;
    int nudges = 0;
    std::size_t samples = 0;
};

// Mean of g(theta) over [0, 2 pi) by the periodic trapezoid rule with doubling.
template <class G>
circle_integral circle_mean(G&& g, quad_tolerance tol, std::size_t nmin = 256,
                            std::size_t nmax = std::size_t(1) << 20) {
    circle_integral out;
    std::size_t n = nmin;
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += g(2.0 * pi * double(j) / double(n));
    double prev = sum / double(n);
    for (;;) {
        double odd = 0.0;
        for (std::size_t j = 0; j < n; ++j) odd += g(2.0 * pi * (double(j) + 0.5) / double(n));
        sum += odd;
        n *= 2;
        double cur = sum / double(n);
        double diff = std::abs(cur - prev);
        out.value = cur;
        out.error = diff;
        out.samples = n;
        if (diff <= std::max(tol.abs, tol.rel * std::abs(cur)) || n >= nmax) break;
        prev = cur;
    }
    return out;
}

// Nudges r by 1+1e-5 while a point to avoid lies within 1e-6 r of the circle, at most three times.
// Points in `soft` are logarithmic singularities: once the budget is spent they no longer block.
inline double nudge_radius(double r, const std::vector<cplx>& avoid, int& nudges,
                           const std::vector<cplx>& soft = {}) {
    auto close = [&](const std::vector<cplx>& pts, double rr) {
        for (const auto& p : pts)
            if (std::abs(std::abs(p) - rr) <= 1e-6 * rr) return true;
        return false;
    };
    nudges = 0;
    while (close(avoid, r) || close(soft, r)) {
        if (nudges == 3) {
            if (close(avoid, r)) throw error(errc::contour, "nevanlinna", "circle stays within 1e-6 r of a divisor");
            break;
        }
        r *= 1.0 + 1e-5;
        ++nudges;
    }
    return r;
}

namespace detail {

// Divisors near the circle of radius r: poles or zeros of f.
inline std::vector<cplx> divisor_points_near(const divisor_stream& s, double r) {
    std::vector<cplx> pts;
    for (const auto& d : s.enumerate(r * 1.001 + 1.0)) pts.push_back(d.location);
    return pts;
}

// Points x where x, x^+ or x^- is in the stream.
inline std::vector<cplx> shifted_divisor_points(const divisor_stream& s, double r, cplx c) {
    std::vector<cplx> pts;
    double R = std::pow(std::sqrt(r * 1.001) + std::abs(c), 2) + 1.0;
    for (const auto& d : s.enumerate(R)) {
        cplx w = std::sqrt(d.location);
        pts.push_back((w - 0.5 * c) * (w - 0.5 * c));
        pts.push_back((w + 0.5 * c) * (w + 0.5 * c));
        pts.push_back(d.location);
    }
    return pts;
}

inline double log_plus(double v) { return v > 0.0 ? v : 0.0; }

inline void require_evaluator(const meromorphic_model& f, const char* what) {
    if (!f.has_evaluator())
        throw error(errc::evaluator_required, "nevanlinna", std::string(what) + " needs an evaluator for '" + f.label + "'");
}

inline double finite_log_modulus(cplx l) {
    if (std::isnan(l.real())) throw error(errc::pole, "nevanlinna", "evaluator returned NaN on the circle");
    if (l.real() == std::numeric_limits<double>::infinity())
        throw error(errc::contour, "nevanlinna", "pole sampled on the circle");
    return l.real();
}

} // namespace detail

// m(r, f) when sign = +1, m(r, 1/f) when sign = -1.
inline circle_integral proximity_signed(const meromorphic_model& f, double r, int sign, double tol = 0.0) {
    detail::require_evaluator(f, "proximity");
    circle_integral out;
    int nudges = 0;
    // Divisors where ln+ stays bounded only block while the nudge budget lasts.
    const auto& hard = sign > 0 ? f.poles : f.zeros;
    const auto& soft = sign > 0 ? f.zeros : f.poles;
    double rr = nudge_radius(r, detail::divisor_points_near(hard, r), nudges, detail::divisor_points_near(soft, r));
    auto g = [&](double th) {
        cplx l = f.log_at(std::polar(rr, th));
        if (l.real() == -sign * std::numeric_limits<double>::infinity()) return 0.0;
        return detail::log_plus(double(sign) * detail::finite_log_modulus(l));
    };
    out = circle_mean(g, tolerance_for(rr, tol));
    out.r_used = rr;
    out.nudges = nudges;
    return out;
}

inline circle_integral proximity(const meromorphic_model& f, double r, double tol = 0.0) {
    return proximity_signed(f, r, +1, tol);
}

// n(r): total multiplicity with |location| <= r.
inline int counting_unintegrated(const divisor_stream& s, double r) {
    int n = 0;
    for (const auto& d : s.enumerate(r)) n += d.multiplicity;
    return n;
}

// N(r) in closed form: sum mult ln(r/|b|) over 0 < |b| <= r plus n(0) ln r.
inline double counting_integrated(const divisor_stream& s, double r) {
    if (!(r > 0.0)) throw error(errc::parameter, "nevanlinna", "N(r) needs r > 0");
    double N = 0.0;
    for (const auto& d : s.enumerate(r)) {
        double a = std::abs(d.location);
        N += double(d.multiplicity) * (a == 0.0 ? std::log(r) : std::log(r / a));
    }
    return N;
}

struct characteristic_row {
    double r = 0.0;
    double m = 0.0;
    double N = 0.0;
    double T = 0.0;
    double quadrature_error = 0.0;
};

inline characteristic_row characteristic(const meromorphic_model& f, double r, double tol = 0.0) {
    auto q = proximity(f, r, tol);
    characteristic_row row;
    row.r = q.r_used;
    row.m = q.value;
    row.N = counting_integrated(f.poles, q.r_used);
    row.T = row.m + row.N;
    row.quadrature_error = q.error;
    return row;
}

// T(r, 1/f) = m(r, 1/f) + N(r, 0).
inline characteristic_row characteristic_reciprocal(const meromorphic_model& f, double r, double tol = 0.0) {
    auto q = proximity_signed(f, r, -1, tol);
    characteristic_row row;
    row.r = q.r_used;
    row.m = q.value;
    row.N = counting_integrated(f.zeros, q.r_used);
    row.T = row.m + row.N;
    row.quadrature_error = q.error;
    return row;
}

inline std::vector<characteristic_row> characteristic_sweep(const meromorphic_model& f, const std::vector<double>& grid,
                                                            double tol = 0.0, unsigned threads = 0) {
    std::vector<characteristic_row> rows(grid.size());
    parallel_for(grid.size(), [&](std::size_t j) { rows[j] = characteristic(f, grid[j], tol); }, threads);
    return rows;
}

// a as a point of the extended plane.
struct extended_value {
    cplx value = 0.0;
    bool infinite = false;

    static extended_value infinity() { return {0.0, true}; }
    static extended_value finite(cplx v) { return {v, false}; }
};

struct fft_report {
    std::vector<double> r;
    std::vector<double> residual;
    double slope = 0.0;
    bool bounded = false;
};

// T(r, 1/(f-a)) - T(r, f) along the grid.
inline fft_report fft_residual(const meromorphic_model& f, extended_value a, const std::vector<double>& grid,
                               double tol = 0.0, unsigned threads = 0) {
    fft_report rep;
    rep.r = grid;
    rep.residual.assign(grid.size(), 0.0);
    if (a.infinite) {
        rep.bounded = true;
        return rep;
    }
    if (f.constant) {
        cplx c = *f.constant;
        if (c == a.value) throw error(errc::parameter, "nevanlinna", "f - a vanishes identically");
        double lhs = detail::log_plus(-std::log(std::abs(c - a.value)));
        double rhs = detail::log_plus(std::log(std::abs(c)));
        std::fill(rep.residual.begin(), rep.residual.end(), lhs - rhs);
        rep.bounded = true;
        return rep;
    }
    if (a.value != 0.0)
        throw error(errc::missing_divisor, "nevanlinna", "zeros of f - a are not declared for a != 0");
    parallel_for(grid.size(), [&](std::size_t j) {
        auto t1 = characteristic_reciprocal(f, grid[j], tol);
        auto t0 = characteristic(f, t1.r, tol);
        rep.residual[j] = t1.T - t0.T;
    }, threads);
    std::vector<double> lx;
    for (double r : grid) lx.push_back(std::log(r));
    rep.slope = ols_fit(lx, rep.residual).slope;
    rep.bounded = std::abs(rep.slope) <= 0.05;
    return rep;
}

// ln |D_W f / f| at x via the square-root coordinate.
inline cplx log_wilson_quotient(const meromorphic_model& f, cplx x, cplx c = I) {
    cplx z = sqrt_with_cut(x, c);
    cplx l0 = f.log_at_z(z);
    return log_apply_DW([&](cplx w) { return f.log_at_z(w); }, z, c) - l0;
}

// m(r, D_W f / f).
inline circle_integral log_wilson_proximity(const meromorphic_model& f, double r, cplx c = I, double tol = 0.0) {
    detail::require_evaluator(f, "log_wilson_proximity");
    circle_integral out;
    if (f.constant) {
        out.r_used = r;
        return out;
    }
    int nudges = 0;
    double rr = nudge_radius(r, detail::shifted_divisor_points(f.poles, r, c), nudges,
                             detail::shifted_divisor_points(f.zeros, r, c));
    auto g = [&](double th) {
        cplx l = log_wilson_quotient(f, std::polar(rr, th), c);
        if (l.real() == -std::numeric_limits<double>::infinity()) return 0.0;
        return detail::log_plus(detail::finite_log_modulus(l));
    };
    out = circle_mean(g, tolerance_for(rr, tol));
    out.r_used = rr;
    out.nudges = nudges;
    return out;
}

struct probe_report {
    std::size_t tested = 0;
    std::size_t flagged = 0;
    std::size_t excluded = 0;
    double fraction = 0.0;
    std::vector<double> flagged_r;
};

// |ln|f(x^+)/f(x)|| against r^{sigma - 1/2 + eps} along the ray arg x = theta.
inline probe_report pointwise_logdiff_probe(const meromorphic_model& f, double theta, const std::vector<double>& grid,
                                            double eps, cplx c = I) {
    detail::require_evaluator(f, "pointwise_logdiff_probe");
    probe_report rep;
    double rmax = grid.empty() ? 0.0 : *std::max_element(grid.begin(), grid.end());
    std::vector<cplx> divs;
    for (const auto* s : {&f.zeros, &f.poles})
        for (const auto& d : s->enumerate(std::pow(std::sqrt(rmax) + std::abs(c), 2) * 1.01 + 1.0))
            divs.push_back(d.location);
    for (double r : grid) {
        cplx x = std::polar(r, theta);
        lattice_coord p = lattice_coord::from_x(x, c);
        cplx xp = p.plus().x();
        bool near = false;
        for (const auto& d : divs)
            if (std::abs(d - x) <= 1e-3 * r || std::abs(d - xp) <= 1e-3 * r) { near = true; break; }
        if (near) { ++rep.excluded; continue; }
        ++rep.tested;
        double v = std::abs((f.log_at_z(p.plus().z()) - f.log_at_z(p.z())).real());
        if (v > std::pow(r, f.declared_order - 0.5 + eps)) {
            ++rep.flagged;
            rep.flagged_r.push_back(r);
        }
    }
    rep.fraction = rep.tested ? double(rep.flagged) / double(rep.tested) : 0.0;
    return rep;
}

struct order_report {
    double sigma = 0.0;
    double band = 0.0;
    std::vector<double> r;
    std::vector<double> T;
};

// Least-squares slope of ln T against ln r over the top decade.
inline order_report order_estimate(const meromorphic_model& f, const std::vector<double>& grid, double tol = 0.0,
                                   unsigned threads = 0) {
    if (grid.size() < 3 || grid_decades(grid) < 3.0 - 1e-9)
        throw error(errc::degenerate_grid, "nevanlinna", "order estimation needs a grid spanning three decades");
    order_report rep;
    rep.r = grid;
    rep.T.assign(grid.size(), 0.0);
    auto idx = top_decade(grid);
    parallel_for(idx.size(), [&](std::size_t k) { rep.T[idx[k]] = characteristic(f, grid[idx[k]], tol).T; }, threads);
    bool all_small = true;
    for (std::size_t j : idx) all_small = all_small && rep.T[j] <= 1e-12;
    if (all_small) return rep;
    auto fit = growth_exponent(grid, rep.T);
    rep.sigma = fit.slope;
    rep.band = 2.0 * fit.slope_stderr;
    return rep;
}

} // namespace wnev
