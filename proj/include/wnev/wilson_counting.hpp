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
#include "nevanlinna.hpp"
#include "numerics.hpp"
#include "wilson_core.hpp"

namespace wnev {

struct wilson_count_row {
    double r = 0.0;
    int n_W = 0;
    int n_W_tilde = 0;
    double N_W = 0.0;
    double N_W_tilde = 0.0;
};

// Lookup of a finite point set by location.
class point_index {
public:
    point_index() = default;
    explicit point_index(std::vector<divisor> pts) : pts_(normalize_divisors(std::move(pts))) {
        mods_.reserve(pts_.size());
        for (const auto& d : pts_) mods_.push_back(std::abs(d.location));
    }

    const std::vector<divisor>& points() const { return pts_; }

    // Index of the point at x, if any.
    std::optional<std::size_t> find(cplx x) const {
        double a = std::abs(x);
        double tol = divisor_merge_tol * std::max(1.0, a);
        auto lo = std::lower_bound(mods_.begin(), mods_.end(), a - tol);
        for (auto it = lo; it != mods_.end() && *it <= a + tol; ++it) {
            std::size_t k = std::size_t(it - mods_.begin());
            if (same_point(pts_[k].location, x)) return k;
        }
        return std::nullopt;
    }

    int multiplicity_at(cplx x) const {
        auto k = find(x);
        return k ? pts_[*k].multiplicity : 0;
    }

private:
    std::vector<divisor> pts_;
    std::vector<double> mods_;
};

struct shift_order {
    int order = 0;
    bool ambiguous = false;
    bool numeric = false;
};

// Order of zero of D_W(1/F) at x^+ from m at x and m' at x^{++} when they differ.
inline std::optional<int> dw_order_rule(int m, int m_next) {
    if (m != m_next) return std::min(m, m_next);
    return std::nullopt;
}

inline int tilde_contribution(int m, int order) { return std::max(0, m - order); }

namespace detail {

// log of 1/F where F = f for a = infinity and F = 1/f for a = 0.
inline std::function<cplx(cplx)> reciprocal_log(const meromorphic_model& f, const extended_value& a) {
    if (a.infinite) return [&f](cplx z) { return -f.log_at_z(z); };
    return [&f, v = a.value](cplx z) {
        if (v == 0.0) return f.log_at_z(z);
        return log_diff_exp(f.log_at_z(z), std::log(v));
    };
}

} // namespace detail

// Winding of D_W(1/F) around z + c/2 in the square-root coordinate.
inline int numeric_dw_order(const std::function<cplx(cplx)>& g, cplx z, cplx c, std::size_t samples = 512) {
    cplx zc = z + 0.5 * c;
    double rho = 1e-3 * std::abs(c);
    std::vector<cplx> pts(samples);
    for (std::size_t j = 0; j < samples; ++j)
        pts[j] = zc + rho * std::polar(1.0, 2.0 * pi * double(j) / double(samples));
    double w = winding_of_log([&](cplx u) { return log_apply_DW(g, u, c); }, pts);
    return int(std::lround(w));
}

// Order of zero of D_W(1/F) at x^+ for an a-point x of multiplicity m.
inline shift_order dw_vanishing_order_at_shift(const meromorphic_model* f, const extended_value& a, cplx z, int m,
                                               int m_next, cplx c = I) {
    if (auto o = dw_order_rule(m, m_next)) return {*o, false, false};
    if (f && f->has_evaluator() && std::abs(z + 0.5 * c) > 1e-2 * std::abs(c)) {
        auto g = detail::reciprocal_log(*f, a);
        int o = numeric_dw_order(g, z, c);
        return {std::max(o, 0), false, true};
    }
    return {m, true, false};
}

struct a_point {
    cplx x;
    cplx z;
    int multiplicity = 0;
    int next_multiplicity = 0;
    shift_order dw;
};

inline double enumeration_radius(double r, cplx c) {
    double s = std::sqrt(r) + std::abs(c);
    return s * s + 1.0;
}

// a-points of a model as divisors; a = infinity gives poles, a = 0 gives zeros.
inline std::vector<divisor> a_point_divisors(const meromorphic_model& f, const extended_value& a, double R) {
    if (f.constant) return {};
    if (a.infinite) return f.poles.enumerate(R);
    if (a.value == 0.0) return f.zeros.enumerate(R);
    throw error(errc::missing_divisor, "wilson-counting", "a-points of '" + f.label + "' are only declared for a = 0 and a = infinity");
}

struct a_point_table {
    extended_value a;
    cplx c = I;
    double radius = 0.0;
    std::vector<a_point> points;
    bool ambiguous = false;
};

inline a_point_table build_a_point_table(const std::vector<divisor>& apts, const meromorphic_model* f,
                                         const extended_value& a, double radius, cplx c = I) {
    a_point_table t;
    t.a = a;
    t.c = c;
    t.radius = radius;
    point_index idx(apts);
    std::vector<const divisor*> in;
    for (const auto& d : idx.points())
        if (std::abs(d.location) <= radius) in.push_back(&d);
    t.points.resize(in.size());
    parallel_for(in.size(), [&](std::size_t k) {
        const divisor& d = *in[k];
        a_point p;
        p.x = d.location;
        p.z = sqrt_with_cut(d.location, c);
        p.multiplicity = d.multiplicity;
        cplx zz = p.z + c;
        p.next_multiplicity = idx.multiplicity_at(zz * zz);
        p.dw = dw_vanishing_order_at_shift(f, a, p.z, p.multiplicity, p.next_multiplicity, c);
        t.points[k] = p;
    });
    for (const auto& p : t.points) t.ambiguous = t.ambiguous || p.dw.ambiguous;
    return t;
}

inline a_point_table build_a_point_table(const meromorphic_model& f, const extended_value& a, double radius,
                                         cplx c = I) {
    return build_a_point_table(a_point_divisors(f, a, enumeration_radius(radius, c)), &f, a, radius, c);
}

inline wilson_count_row wilson_counts_from_table(const a_point_table& t, double r) {
    wilson_count_row row;
    row.r = r;
    for (const auto& p : t.points) {
        double ax = std::abs(p.x);
        if (ax > r) continue;
        int o = p.dw.order;
        int tl = tilde_contribution(p.multiplicity, o);
        row.n_W += o;
        row.n_W_tilde += tl;
        double w = ax == 0.0 ? std::log(r) : std::log(r / ax);
        row.N_W += double(o) * w;
        row.N_W_tilde += double(tl) * w;
    }
    return row;
}

inline wilson_count_row wilson_counts(const meromorphic_model& f, const extended_value& a, double r, cplx c = I) {
    return wilson_counts_from_table(build_a_point_table(f, a, r, c), r);
}

inline std::vector<wilson_count_row> wilson_count_sweep(const meromorphic_model& f, const extended_value& a,
                                                        const std::vector<double>& grid, cplx c = I) {
    double rmax = grid.empty() ? 0.0 : *std::max_element(grid.begin(), grid.end());
    auto t = build_a_point_table(f, a, rmax, c);
    std::vector<wilson_count_row> rows;
    for (double r : grid) rows.push_back(wilson_counts_from_table(t, r));
    return rows;
}

// N(r, 1/D_W f) + 2 N(r, f) - N(r, D_W f) by Jensen's formula for D_W f.
inline double ramification_term(const meromorphic_model& f, double r, cplx c = I, double tol = 0.0) {
    detail::require_evaluator(f, "ramification_term");
    if (f.constant) throw error(errc::parameter, "wilson-counting", "f lies in the kernel of D_W");
    auto plain = f.as_function();
    cplx d0 = apply_DW_origin(plain, c);
    if (d0 == 0.0 || !std::isfinite(std::abs(d0)))
        throw error(errc::singular, "wilson-counting", "D_W f vanishes or blows up at the origin");
    int nudges = 0;
    double rr = nudge_radius(r, detail::shifted_divisor_points(f.poles, r, c), nudges,
                             detail::shifted_divisor_points(f.zeros, r, c));
    auto g = [&](double th) {
        cplx x = std::polar(rr, th);
        cplx z = sqrt_with_cut(x, c);
        cplx l = log_apply_DW([&](cplx w) { return f.log_at_z(w); }, z, c);
        return detail::finite_log_modulus(l);
    };
    double mean = circle_mean(g, tolerance_for(rr, tol)).value;
    return mean - std::log(std::abs(d0)) + 2.0 * counting_integrated(f.poles, rr);
}

struct wilson_chain {
    cplx start;
    std::vector<cplx> points;
    std::vector<int> multiplicities;
    bool truncated = true;
    double truncation_radius = 0.0;
};

struct chain_report {
    std::vector<wilson_chain> chains;
    std::vector<divisor> residual;
    extended_value a;
};

// Wilson a-sequences among the a-points within radius; runs follow z -> z + c.
inline chain_report detect_chains(const std::vector<divisor>& apts, const extended_value& a, cplx c, double radius) {
    chain_report rep;
    rep.a = a;
    point_index idx(apts);
    const auto& pts = idx.points();
    const std::size_t n = pts.size();
    std::vector<cplx> zs(n);
    std::vector<std::optional<std::size_t>> succ(n);
    std::vector<bool> has_pred(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        zs[k] = sqrt_with_cut(pts[k].location, c);
        cplx zn = zs[k] + c;
        succ[k] = idx.find(zn * zn);
        if (succ[k] && *succ[k] == k) succ[k].reset();
    }
    for (std::size_t k = 0; k < n; ++k)
        if (succ[k]) has_pred[*succ[k]] = true;

    std::vector<bool> in_chain(n, false);
    for (std::size_t s = 0; s < n; ++s) {
        if (has_pred[s]) continue;
        std::vector<std::size_t> run{s};
        while (succ[run.back()] && run.size() <= n) run.push_back(*succ[run.back()]);
        // last point of the run inside the radius
        std::optional<std::size_t> last_in;
        for (std::size_t j = 0; j < run.size(); ++j)
            if (std::abs(pts[run[j]].location) <= radius) last_in = j;
        if (!last_in) continue;
        cplx zn = zs[run[*last_in]] + c;
        bool reaches_boundary = std::abs(zn * zn) > radius;
        if (!reaches_boundary) continue;
        std::size_t begin = *last_in;
        while (begin > 0 && pts[run[begin - 1]].multiplicity <= pts[run[begin]].multiplicity) --begin;
        if (begin == 0) {
            // run start: an unlinked point at (z - c)^2 may still block the sequence
            cplx zs0 = zs[run[0]];
            cplx zp = zs0 - c;
            auto q = idx.find(zp * zp);
            cplx t = zs0 / c;
            bool on_segment = std::abs(t.imag()) < 1e-12 && t.real() >= -1e-12 && t.real() <= 0.5 + 1e-12;
            if (q && !on_segment && pts[*q].multiplicity <= pts[run[0]].multiplicity) continue;
        }
        wilson_chain ch;
        ch.start = pts[run[begin]].location;
        ch.truncation_radius = radius;
        for (std::size_t j = begin; j <= *last_in; ++j) {
            ch.points.push_back(pts[run[j]].location);
            ch.multiplicities.push_back(pts[run[j]].multiplicity);
            in_chain[run[j]] = true;
        }
        rep.chains.push_back(std::move(ch));
    }
    for (std::size_t k = 0; k < n; ++k)
        if (!in_chain[k] && std::abs(pts[k].location) <= radius) rep.residual.push_back(pts[k]);
    return rep;
}

inline chain_report detect_chains(const meromorphic_model& f, const extended_value& a, cplx c, double radius) {
    return detect_chains(a_point_divisors(f, a, enumeration_radius(radius, c)), a, c, radius);
}

// E_W(a, f) within radius, ignoring multiplicity.
inline std::vector<cplx> ew_set(const std::vector<divisor>& apts, const extended_value& a, cplx c, double radius) {
    std::vector<cplx> out;
    for (const auto& d : detect_chains(apts, a, c, radius).residual) out.push_back(d.location);
    return out;
}

inline std::vector<cplx> ew_set(const meromorphic_model& f, const extended_value& a, cplx c, double radius) {
    return ew_set(a_point_divisors(f, a, enumeration_radius(radius, c)), a, c, radius);
}

struct verdict_report {
    bool candidate = false;
    std::vector<double> checkpoints;
    std::vector<std::size_t> residual_sizes;
};

inline std::vector<double> verdict_checkpoints(double radius) {
    std::vector<double> cps;
    for (int j = 0; j <= 4; ++j) cps.push_back(0.5 * radius + double(j) * radius / 8.0);
    return cps;
}

// Candidate when |E_W| is the same at the five checkpoints in the top half of the radius.
inline verdict_report exceptional_value_verdict(const std::vector<divisor>& apts, const extended_value& a, cplx c,
                                                double radius) {
    verdict_report rep;
    rep.checkpoints = verdict_checkpoints(radius);
    for (double r : rep.checkpoints) rep.residual_sizes.push_back(ew_set(apts, a, c, r).size());
    rep.candidate = std::all_of(rep.residual_sizes.begin(), rep.residual_sizes.end(),
                                [&](std::size_t s) { return s == rep.residual_sizes.front(); });
    return rep;
}

inline verdict_report exceptional_value_verdict(const meromorphic_model& f, const extended_value& a, double radius,
                                                cplx c = I) {
    return exceptional_value_verdict(a_point_divisors(f, a, enumeration_radius(radius, c)), a, c, radius);
}

struct defect_estimates {
    extended_value a;
    double theta_W = 0.0;
    double vartheta_W = 0.0;
    double delta = 0.0;
    std::vector<double> grid;
    std::vector<double> T;
    std::vector<double> N_W_tilde;
};

// m(r, a): m(r, f) at infinity, m(r, 1/f) at 0.
inline double proximity_to_value(const meromorphic_model& f, const extended_value& a, double r, double tol = 0.0) {
    if (a.infinite) return proximity(f, r, tol).value;
    if (a.value == 0.0) return proximity_signed(f, r, -1, tol).value;
    throw error(errc::missing_divisor, "wilson-counting", "m(r, a) is only supported for a = 0 and a = infinity");
}

// Top-decade surrogates for Theta_W, vartheta_W and delta.
inline defect_estimates estimate_defects(const meromorphic_model& f, const extended_value& a,
                                         const std::vector<double>& grid, cplx c = I, double tol = 0.0,
                                         unsigned threads = 0) {
    if (grid.size() < 3 || grid_decades(grid) < 3.0 - 1e-9)
        throw error(errc::degenerate_grid, "wilson-counting", "defect estimation needs a grid spanning three decades");
    defect_estimates d;
    d.a = a;
    auto idx = top_decade(grid);
    for (std::size_t j : idx) d.grid.push_back(grid[j]);
    double rmax = *std::max_element(d.grid.begin(), d.grid.end());
    auto table = build_a_point_table(f, a, rmax, c);
    std::vector<double> T(d.grid.size()), m(d.grid.size());
    parallel_for(d.grid.size(), [&](std::size_t k) {
        T[k] = characteristic(f, d.grid[k], tol).T;
        m[k] = proximity_to_value(f, a, d.grid[k], tol);
    }, threads);
    double max_tilde = 0.0, min_NW = std::numeric_limits<double>::infinity(),
           min_m = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < d.grid.size(); ++k) {
        auto row = wilson_counts_from_table(table, d.grid[k]);
        d.T.push_back(T[k]);
        d.N_W_tilde.push_back(row.N_W_tilde);
        if (T[k] <= 0.0) throw error(errc::degenerate_grid, "wilson-counting", "T(r, f) vanishes on the grid");
        max_tilde = std::max(max_tilde, row.N_W_tilde / T[k]);
        min_NW = std::min(min_NW, row.N_W / T[k]);
        min_m = std::min(min_m, m[k] / T[k]);
    }
    d.theta_W = std::clamp(1.0 - max_tilde, 0.0, 1.0);
    d.vartheta_W = std::max(0.0, min_NW);
    d.delta = std::clamp(min_m, 0.0, 1.0);
    return d;
}

struct defect_sum_report {
    std::vector<double> thetas;
    double sum = 0.0;
    bool sum_ok = false;
    std::vector<double> grid;
    std::vector<double> nsft_residual;
    double nsft_exponent = 0.0;
    bool nsft_nonpositive = false;
    bool nsft_ok = false;
};

// Sum of Theta_W over the listed values and the residual (q-1)T - N~_W(r,f) - sum N~_W(r, 1/(f - y_n)).
inline defect_sum_report defect_sum_check(const meromorphic_model& f, const std::vector<extended_value>& values,
                                          const std::vector<double>& grid, cplx c = I, double tol = 0.0) {
    defect_sum_report rep;
    for (const auto& a : values) {
        double th = estimate_defects(f, a, grid, c, tol).theta_W;
        rep.thetas.push_back(th);
        rep.sum += th;
    }
    rep.sum_ok = rep.sum <= 2.0 + 0.1;

    std::vector<extended_value> targets;
    for (const auto& a : values)
        if (!a.infinite) targets.push_back(a);
    const double q = double(targets.size());
    auto idx = top_decade(grid);
    for (std::size_t j : idx) rep.grid.push_back(grid[j]);
    double rmax = *std::max_element(rep.grid.begin(), rep.grid.end());
    auto tinf = build_a_point_table(f, extended_value::infinity(), rmax, c);
    std::vector<a_point_table> tt;
    for (const auto& y : targets) tt.push_back(build_a_point_table(f, y, rmax, c));
    std::vector<double> T(rep.grid.size());
    parallel_for(rep.grid.size(), [&](std::size_t k) { T[k] = characteristic(f, rep.grid[k], tol).T; });
    rep.nsft_nonpositive = true;
    for (std::size_t k = 0; k < rep.grid.size(); ++k) {
        double v = (q - 1.0) * T[k] - wilson_counts_from_table(tinf, rep.grid[k]).N_W_tilde;
        for (const auto& t : tt) v -= wilson_counts_from_table(t, rep.grid[k]).N_W_tilde;
        rep.nsft_residual.push_back(v);
        rep.nsft_nonpositive = rep.nsft_nonpositive && v <= 0.0;
    }
    if (!rep.nsft_nonpositive) {
        std::vector<double> lx, ly;
        for (std::size_t k = 0; k < rep.grid.size(); ++k) {
            lx.push_back(std::log(rep.grid[k]));
            ly.push_back(std::log(std::max(rep.nsft_residual[k], 1e-300)));
        }
        rep.nsft_exponent = ols_fit(lx, ly).slope;
    }
    rep.nsft_ok = rep.nsft_nonpositive || rep.nsft_exponent <= f.declared_order - 0.5 + 0.15;
    return rep;
}

struct sharing_report {
    bool shared = false;
    std::vector<double> radii;
    std::vector<std::size_t> difference_sizes;
    std::vector<int> tilde_difference;
};

namespace detail {

inline std::size_t symmetric_difference_size(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    auto count_missing = [](const std::vector<cplx>& from, const std::vector<cplx>& in) {
        std::size_t s = 0;
        for (const auto& p : from) {
            bool found = false;
            for (const auto& q : in)
                if (same_point(p, q)) { found = true; break; }
            if (!found) ++s;
        }
        return s;
    };
    return count_missing(a, b) + count_missing(b, a);
}

} // namespace detail

// Shared iff |E_W(a,f) symmetric-difference E_W(a,g)| is constant over the top half of the grid.
inline sharing_report share_im_wilson(const std::vector<divisor>& f_apts, const std::vector<divisor>& g_apts,
                                      const extended_value& a, const std::vector<double>& grid, cplx c = I) {
    sharing_report rep;
    if (grid.empty()) throw error(errc::degenerate_grid, "wilson-counting", "sharing needs radii");
    double rmax = *std::max_element(grid.begin(), grid.end());
    for (double r : grid) {
        if (r < 0.5 * rmax) continue;
        rep.radii.push_back(r);
        rep.difference_sizes.push_back(
            detail::symmetric_difference_size(ew_set(f_apts, a, c, r), ew_set(g_apts, a, c, r)));
        auto tf = build_a_point_table(f_apts, nullptr, a, r, c);
        auto tg = build_a_point_table(g_apts, nullptr, a, r, c);
        rep.tilde_difference.push_back(wilson_counts_from_table(tf, r).n_W_tilde -
                                       wilson_counts_from_table(tg, r).n_W_tilde);
    }
    rep.shared = std::all_of(rep.difference_sizes.begin(), rep.difference_sizes.end(),
                             [&](std::size_t s) { return s == rep.difference_sizes.front(); });
    return rep;
}

} // namespace wnev
