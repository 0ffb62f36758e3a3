#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "equations.hpp"
#include "funcmodel.hpp"
#include "io.hpp"
#include "nevanlinna.hpp"
#include "numerics.hpp"
#include "specfun.hpp"
#include "wilson_core.hpp"
#include "wilson_counting.hpp"
#include "wilson_polynomials.hpp"
#include "wilson_series.hpp"

namespace wnev::acceptance {

struct result {
    int id = 0;
    std::string suite;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct context {
    std::string data_dir = "data";
    unsigned threads = 0;
};

namespace detail {

inline std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

// Uniform points in the disk |x| <= R with |arg x| below pi - gap.
inline std::vector<cplx> disk_points(std::size_t n, double R, double gap, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-R, R);
    std::vector<cplx> pts;
    while (pts.size() < n) {
        cplx x(u(rng), u(rng));
        if (std::abs(x) > R || std::abs(x) < 1e-3 || std::abs(std::arg(x)) > pi - gap) continue;
        pts.push_back(x);
    }
    return pts;
}

inline const std::vector<double>& wide_grid() {
    static const std::vector<double> g = log_grid(1e2, 1e6, 25);
    return g;
}

} // namespace detail

inline result kernel() {
    using C = boost::multiprecision::cpp_complex_50;
    using R = C::value_type;
    const R two_pi = 2 * boost::math::constants::pi<R>();
    auto f50 = [&](const C& x) { return cosh(two_pi * sqrt_with_cut_generic(x)); };
    auto f = [](cplx x) { return std::cosh(2.0 * pi * sqrt_with_cut(x)); };
    double worst = 0.0, worst_rel_double = 0.0;
    for (const auto& x : detail::disk_points(200, 100.0, 0.05, 11u)) {
        C v = apply_DW_generic(f50, C(x.real(), x.imag()));
        worst = std::max(worst, static_cast<double>(abs(v)));
        worst_rel_double = std::max(worst_rel_double, std::abs(apply_DW(f, x)) / std::abs(f(x)));
    }
    return {1, "kernel", "D_W cosh(2 pi sqrt x) vanishes", worst < 1e-9,
            "max |D_W f| = " + detail::num(worst) + " (50 digits) < 1e-9; double precision relative " +
                detail::num(worst_rel_double)};
}

inline result best_constant() {
    auto e = model_exp();
    bool ok = true;
    std::string d;
    for (double r : {1e4, 1e5, 1e6}) {
        double v = log_wilson_proximity(e, r).value * pi / (2.0 * std::sqrt(r));
        ok = ok && detail::within(v, 0.95, 1.05);
        d += "r=" + detail::num(r) + ": " + detail::num(v) + " ";
    }
    return {2, "asymptotics", "m(r, D_W e^x / e^x) pi / (2 sqrt r) in [0.95, 1.05]", ok, d};
}

inline const std::vector<std::string>& growth_catalog() {
    static const std::vector<std::string> labels{"exp", "product_i", "phi_ii", "g_iii", "h_iv:0.5", "ghyp",
                                                 "cosh_coeff"};
    return labels;
}

inline result logdiff_lemma(const context& ctx) {
    const auto& grid = detail::wide_grid();
    auto idx = top_decade(grid);
    bool ok = true;
    std::string d;
    for (const auto& label : growth_catalog()) {
        auto f = catalog_model(label);
        std::vector<double> m(grid.size(), 0.0);
        parallel_for(idx.size(), [&](std::size_t k) { m[idx[k]] = log_wilson_proximity(f, grid[idx[k]]).value; },
                     ctx.threads);
        bool vanish = std::all_of(idx.begin(), idx.end(), [&](std::size_t j) { return m[j] <= 1e-12; });
        double bound = f.declared_order - 0.5 + 0.1;
        double slope = vanish ? -INFINITY : growth_exponent(grid, m).slope;
        ok = ok && slope <= bound;
        d += label + ": " + (vanish ? std::string("m = 0") : detail::num(slope)) + " <= " + detail::num(bound) + "; ";
    }
    return {3, "asymptotics", "growth exponent of m(r, D_W f / f) <= sigma - 1/2 + 0.1", ok, d};
}

inline result example_iii(const context& ctx) {
    auto g = model_g_iii(2, 1);
    const auto& grid = detail::wide_grid();
    auto idx = top_decade(grid);
    auto zero = extended_value::finite(0.0);
    double rmax = grid.back();
    auto table = build_a_point_table(g, zero, rmax, I);
    std::vector<double> T(idx.size());
    parallel_for(idx.size(), [&](std::size_t k) { T[k] = characteristic(g, grid[idx[k]]).T; }, ctx.threads);
    double tmin = INFINITY, tmax = -INFINITY, nmin = INFINITY, nmax = -INFINITY;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        double r = grid[idx[k]];
        double t = T[k] / std::sqrt(r);
        double n = wilson_counts_from_table(table, r).n_W_tilde / std::sqrt(r);
        tmin = std::min(tmin, t), tmax = std::max(tmax, t);
        nmin = std::min(nmin, n), nmax = std::max(nmax, n);
    }
    double theta = estimate_defects(g, zero, grid, I, 0.0, ctx.threads).theta_W;
    bool ok = tmin >= 2.85 && tmax <= 3.15 && nmin >= 0.45 && nmax <= 0.55 && detail::within(theta, 0.61, 0.72);
    return {4, "defects", "g_iii(2,1): T/sqrt r, n~_W/sqrt r, Theta_W(0)", ok,
            "T/sqrt r in [" + detail::num(tmin) + ", " + detail::num(tmax) + "] (2.85..3.15); n~_W/sqrt r in [" +
                detail::num(nmin) + ", " + detail::num(nmax) + "] (0.45..0.55); Theta_W(0) = " + detail::num(theta) +
                " (0.61..0.72)"};
}

inline result example_i(const context& ctx) {
    auto f = model_product_i(1.0);
    const auto& grid = detail::wide_grid();
    double t0 = estimate_defects(f, extended_value::finite(0.0), grid, I, 0.0, ctx.threads).theta_W;
    double tinf = estimate_defects(f, extended_value::infinity(), grid, I, 0.0, ctx.threads).theta_W;
    auto verdict = exceptional_value_verdict(f, extended_value::finite(0.0), 1e4);
    double sum = t0 + tinf;
    bool ok = t0 >= 0.95 && verdict.candidate && detail::within(sum, 1.9, 2.0);
    return {5, "defects", "product_i(1): Theta_W(0), exceptional verdict, Theta sum", ok,
            "Theta_W(0) = " + detail::num(t0) + " (>= 0.95); verdict " +
                (verdict.candidate ? "candidate" : "not candidate") + "; Theta_W(0) + Theta_W(inf) = " +
                detail::num(sum) + " (1.9..2.0)"};
}

inline result example_iv(const context& ctx) {
    const auto& grid = detail::wide_grid();
    bool ok = true;
    std::string d;
    for (double s : {0.0, 0.25, 0.5, 1.0}) {
        double th = estimate_defects(model_h_iv(s), extended_value::finite(0.0), grid, I, 0.0, ctx.threads).theta_W;
        ok = ok && std::abs(th - s) <= 0.07;
        d += "s=" + detail::num(s) + ": " + detail::num(th) + "; ";
    }
    return {6, "defects", "h_iv(s): Theta_W(0) within 0.07 of s", ok, d};
}

inline result first_fundamental(const context& ctx) {
    bool ok = true;
    std::string d;
    for (const auto& label : {std::string("product_i:1"), std::string("g_iii:2,1")}) {
        auto rep = fft_residual(catalog_model(label), extended_value::finite(0.0), detail::wide_grid(), 0.0, ctx.threads);
        ok = ok && std::abs(rep.slope) <= 0.05;
        d += label + ": slope " + detail::num(rep.slope) + "; ";
    }
    return {7, "asymptotics", "T(r, 1/f) - T(r, f) has slope 0 +- 0.05 in ln r", ok, d};
}

inline result figure_chains(const context& ctx) {
    auto doc = io::read_json_file(ctx.data_dir + "/figure_dataset.json");
    auto data = io::synthetic_from_json(doc);
    double radius = doc.value("radius", 300.0);
    auto rep = detect_chains(data.divisors, extended_value::infinity(), I, radius);
    auto ew = ew_set(data.divisors, extended_value::infinity(), I, radius);
    bool ok = rep.chains.size() == 3 && ew.size() == 5;
    return {8, "defects", "figure dataset: 3 pole sequences, 5 stray poles", ok,
            "chains " + std::to_string(rep.chains.size()) + ", |E_W| " + std::to_string(ew.size())};
}

inline wilson_params random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.2, 2.0);
    return {u(rng), u(rng), u(rng), u(rng)};
}

inline result lowering() {
    std::mt19937_64 rng(909u);
    std::uniform_real_distribution<double> ux(-6.0, 6.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        auto p = random_params(rng);
        cplx x(ux(rng), ux(rng));
        for (int n = 1; n <= 8; ++n) worst = std::max(worst, lowering_residual(n, p, x).relative);
    }
    return {9, "polynomials", "lowering D_W W_n = C_n W_{n-1}(shifted)", worst < 1e-8,
            "max relative residual " + detail::num(worst) + " < 1e-8"};
}

inline result sturm_liouville() {
    std::mt19937_64 rng(1313u);
    std::uniform_real_distribution<double> ur(0.5, 6.0), ui(-2.0, 2.0);
    double sl = 0.0, eig = 0.0, lit = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        auto p = random_params(rng);
        cplx x(ur(rng), ui(rng));
        for (int n = 0; n <= 5; ++n) {
            sl = std::max(sl, sturm_liouville_residual(n, p, x).relative);
            eig = std::max(eig, lw_eigen_residual(n, p, x).relative);
            if (n > 0) lit = std::max(lit, sturm_liouville_residual(n, p, x, weight_form::literal).relative);
        }
    }
    double phys = 0.0;
    for (double x : {0.7, 1.9, 3.3})
        for (int n = 0; n <= 4; ++n) phys = std::max(phys, physics_eigen_check(n, x).relative);
    bool ok = sl < 1e-6 && eig < 1e-6 && phys < 1e-6;
    return {10, "sturm", "Sturm-Liouville form, L_W eigen relation, physics eigen-solutions", ok,
            "SL " + detail::num(sl) + ", L_W " + detail::num(eig) + " (measure weight; literal weight " +
                detail::num(lit) + "); physics " + detail::num(phys) + " (all < 1e-6)"};
}

inline result hyperbolic_gamma_example(const context& ctx) {
    double feq = 0.0;
    for (double re : {-2.0, -1.0, 0.0, 0.25, 1.0, 2.0})
        for (double im : {-0.3, 0.0, 0.3}) {
            cplx z(re, im);
            cplx lhs = hyperbolic_gamma(1.0, 1.0, z + 0.5 * I);
            cplx rhs = 2.0 * std::cosh(pi * z) * hyperbolic_gamma(1.0, 1.0, z - 0.5 * I);
            feq = std::max(feq, make_residual(lhs, rhs).relative);
        }
    auto eq = ghyp_equation();
    auto f = model_ghyp_solution();
    double c22 = 0.0;
    for (cplx x : {cplx(0.3), cplx(2.0), cplx(0.3, 0.4), cplx(5.0, -1.0)}) c22 = std::max(c22, interp_residual(eq, f, x).relative);
    auto grid = detail::wide_grid();
    double sf = order_estimate(f, grid, 0.0, ctx.threads).sigma;
    double sc = order_estimate(model_cosh_coefficient(), grid, 0.0, ctx.threads).sigma;
    bool ok = feq < 1e-6 && c22 < 1e-6 && std::abs(sf - 1.0) <= 0.1 && std::abs(sc - 0.5) <= 0.05;
    return {11, "equations", "hyperbolic gamma shift equation, interpolation equation, orders", ok,
            "G_hyp shift residual " + detail::num(feq) + " (< 1e-6); symmetrized solution residual " + detail::num(c22) +
                " (< 1e-6); order f " + detail::num(sf) + " (1 +- 0.1); order 2cosh(pi sqrt x) " + detail::num(sc) +
                " (0.5 +- 0.05)"};
}

inline result c_limit() {
    const cplx x(1.3, 0.4);
    const std::vector<double> cs{0.2, 0.1, 0.05, 0.025, 0.0125};
    struct pair {
        std::string name;
        std::function<cplx(cplx)> f, df;
    };
    std::vector<pair> fs{
        {"x^3", [](cplx y) { return y * y * y; }, [](cplx y) { return 3.0 * y * y; }},
        {"e^x", [](cplx y) { return std::exp(y); }, [](cplx y) { return std::exp(y); }},
        {"cosh sqrt x", [](cplx y) { return std::cosh(std::sqrt(y)); },
         [](cplx y) { return std::sinh(std::sqrt(y)) / (2.0 * std::sqrt(y)); }},
    };
    bool ok = true;
    std::string d;
    for (const auto& p : fs) {
        double order = cshift_limit_check(p.f, p.df, x, cs).order;
        ok = ok && order >= 1.9;
        d += p.name + ": " + detail::num(order) + "; ";
    }
    double exact = 0.0;
    for (cplx c : {cplx(0.3), cplx(1.0), I, cplx(0.2, 0.7)})
        for (cplx y : {cplx(2.0, 1.0), cplx(-0.5, 3.0), cplx(7.0, -2.0)}) {
            cplx v = apply_DW([](cplx t) { return t * t; }, lattice_coord::from_x(y, c)) - 2.0 * y;
            exact = std::max(exact, std::abs(v - 0.5 * c * c) / std::max(1.0, std::abs(y)));
        }
    ok = ok && exact < 1e-13;
    return {12, "kernel", "c -> 0 limit order >= 1.9; D_{W,c} x^2 - 2x = c^2/2", ok,
            d + "exact fixture deviation " + detail::num(exact)};
}

inline result series() {
    const cplx a(0.3, 0.2);
    auto p = [](cplx x) { return 1.0 - 2.0 * x + 0.5 * x * x * x + x * x * x * x; };
    auto s = expand(p, a, 6, false);
    double worst = 0.0;
    for (const auto& x : detail::disk_points(10, 10.0, 0.0, 5u))
        worst = std::max(worst, std::abs(reconstruct(s, x) - p(x)) / std::max(1.0, std::abs(p(x))));
    double pass_margin = growth_gate([](cplx x) { return std::cosh(sqrt_with_cut(x)); });
    double fail_margin = growth_gate([](cplx x) { return std::cosh(pi * sqrt_with_cut(x)); });
    bool ok = worst < 1e-10 && pass_margin > 0.0 && fail_margin < 0.0;
    return {13, "series", "Wilson series round trip and growth gate", ok,
            "round trip " + detail::num(worst) + " (< 1e-10); gate cosh sqrt x " + detail::num(pass_margin) +
                " (> 0), cosh pi sqrt x " + detail::num(fail_margin) + " (< 0)"};
}

inline result counting_inequality() {
    auto radii = log_grid(10.0, 1e4, 8);
    bool ok = true;
    double worst = -INFINITY;
    std::vector<std::string> labels = growth_catalog();
    labels.push_back("const:2");
    for (const auto& label : labels) {
        auto f = catalog_model(label);
        for (const auto& a : {extended_value::infinity(), extended_value::finite(0.0)}) {
            const auto& s = a.infinite ? f.poles : f.zeros;
            auto table = build_a_point_table(f, a, radii.back(), I);
            for (double r : radii) {
                auto row = wilson_counts_from_table(table, r);
                double gap = counting_integrated(s, r) - row.N_W - row.N_W_tilde;
                worst = std::max(worst, gap);
                ok = ok && gap <= 1e-9;
            }
        }
    }
    return {14, "asymptotics", "N(r) - N_W(r) <= N~_W(r) at 25 radii per model", ok,
            "max of N - N_W - N~_W = " + detail::num(worst) + " (<= 1e-9)"};
}

inline result nsft(const context& ctx) {
    auto g = model_g_iii(2, 1);
    auto rep = defect_sum_check(g, {extended_value::finite(0.0)}, detail::wide_grid(), I);
    (void)ctx;
    double worst = *std::max_element(rep.nsft_residual.begin(), rep.nsft_residual.end());
    return {15, "asymptotics", "second fundamental theorem residual for g_iii(2,1)", rep.nsft_ok,
            "max residual " + detail::num(worst) +
                (rep.nsft_nonpositive ? std::string(" (<= 0)") : "; exponent " + detail::num(rep.nsft_exponent))};
}

inline const std::vector<std::string>& suites() {
    static const std::vector<std::string> s{"kernel", "polynomials", "sturm", "asymptotics", "defects", "equations",
                                            "series"};
    return s;
}

// Runs the criteria of one suite, or all of them for an empty name; failures to compute count as red.
inline std::vector<result> run(const std::string& suite, const context& ctx = {}) {
    std::vector<std::pair<std::string, std::function<result()>>> all{
        {"kernel", [] { return kernel(); }},
        {"asymptotics", [] { return best_constant(); }},
        {"asymptotics", [&] { return logdiff_lemma(ctx); }},
        {"defects", [&] { return example_iii(ctx); }},
        {"defects", [&] { return example_i(ctx); }},
        {"defects", [&] { return example_iv(ctx); }},
        {"asymptotics", [&] { return first_fundamental(ctx); }},
        {"defects", [&] { return figure_chains(ctx); }},
        {"polynomials", [] { return lowering(); }},
        {"sturm", [] { return sturm_liouville(); }},
        {"equations", [&] { return hyperbolic_gamma_example(ctx); }},
        {"kernel", [] { return c_limit(); }},
        {"series", [] { return series(); }},
        {"asymptotics", [] { return counting_inequality(); }},
        {"asymptotics", [&] { return nsft(ctx); }},
    };
    std::vector<result> out;
    for (std::size_t j = 0; j < all.size(); ++j) {
        if (!suite.empty() && all[j].first != suite) continue;
        try {
            out.push_back(all[j].second());
        } catch (const std::exception& e) {
            out.push_back({int(j) + 1, all[j].first, "computation failed", false, e.what()});
        }
    }
    return out;
}

inline std::string line(const result& r) {
    return std::string(r.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(r.id) + " [" + r.suite + "] " +
           r.name + ": " + r.detail;
}

} // namespace wnev::acceptance
