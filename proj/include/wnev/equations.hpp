#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "funcmodel.hpp"
#include "nevanlinna.hpp"
#include "numerics.hpp"
#include "wilson_core.hpp"
#include "wilson_polynomials.hpp"

namespace wnev {

// Ascending coefficients in x.
using polynomial = std::vector<cplx>;

inline cplx polyval(const polynomial& p, cplx x) {
    cplx acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// One term P_j(x) prod_l (D_W^l f)^{d_l}; exponents[0] refers to f itself.
struct wdp_term {
    polynomial coefficient{1.0};
    std::vector<int> exponents;

    int degree() const {
        int d = 0;
        for (int e : exponents) d += e;
        return d;
    }
};

struct wilson_difference_polynomial {
    std::vector<wdp_term> terms;

    int degree_over_f() const {
        int d = 0;
        for (const auto& t : terms) d = std::max(d, t.degree());
        return d;
    }
    int max_order() const {
        int l = 0;
        for (const auto& t : terms)
            for (int j = 0; j < int(t.exponents.size()); ++j)
                if (t.exponents[j] > 0) l = std::max(l, j);
        return l;
    }
    void validate() const {
        for (const auto& t : terms)
            for (int e : t.exponents)
                if (e < 0) throw error(errc::parameter, "equations", "negative exponent in a difference polynomial");
    }
};

inline cplx wdp_evaluate(const wilson_difference_polynomial& P, const std::function<cplx(cplx)>& f, cplx x,
                         cplx c = I) {
    P.validate();
    std::vector<cplx> dl(P.max_order() + 1);
    std::vector<bool> have(dl.size(), false);
    auto derivative = [&](int l) {
        if (!have[l]) {
            dl[l] = l == 0 ? f(x) : apply_DW_iter(f, x, l, c);
            if (!std::isfinite(dl[l].real()) || !std::isfinite(dl[l].imag()))
                throw error(errc::pole, "equations", "pole on the difference stencil");
            have[l] = true;
        }
        return dl[l];
    };
    cplx total = 0.0;
    for (const auto& t : P.terms) {
        cplx v = polyval(t.coefficient, x);
        for (int l = 0; l < int(t.exponents.size()); ++l)
            for (int e = 0; e < t.exponents[l]; ++e) v *= derivative(l);
        total += v;
    }
    return total;
}

struct clunie_fixture {
    std::string label;
    meromorphic_model f;
    double sigma = 0.0;
    wilson_difference_polynomial P, Q;
    int n = 1;
};

struct clunie_report {
    double exponent = 0.0;
    double bound = 0.0;
    double identity_residual = 0.0;
    bool proximity_vanishes = false;
    bool pass = false;
    std::vector<double> r;
    std::vector<double> m;
};

namespace detail {

inline std::vector<cplx> seeded_points(std::size_t count, double radius, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mod(0.2, 1.0), arg(-pi * 0.95, pi * 0.95);
    std::vector<cplx> pts(count);
    for (auto& p : pts) p = std::polar(radius * mod(rng), arg(rng));
    return pts;
}

inline double model_order(const meromorphic_model& f, const std::vector<double>& grid, double tol, unsigned threads) {
    return order_estimate(f, grid, tol, threads).sigma;
}

} // namespace detail

// Exponent of m(r, P(f)) for f^n P(f) = Q(f); the identity is checked at 20 seeded points first.
inline clunie_report clunie_growth_check(const clunie_fixture& fx, const std::vector<double>& grid, cplx c = I,
                                         double tol = 0.0) {
    if (fx.n < 1) throw error(errc::parameter, "equations", "Clunie exponent n must be at least 1");
    if (fx.Q.degree_over_f() > fx.n)
        throw error(errc::parameter, "equations", "deg_f Q exceeds n; the hypothesis of the lemma fails");
    auto f = fx.f.as_function();
    clunie_report rep;
    for (const auto& x : detail::seeded_points(20, 10.0, 20240601u)) {
        cplx lhs = std::pow(f(x), fx.n) * wdp_evaluate(fx.P, f, x, c);
        cplx rhs = wdp_evaluate(fx.Q, f, x, c);
        double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        rep.identity_residual = std::max(rep.identity_residual, std::abs(lhs - rhs) / scale);
    }
    if (rep.identity_residual > 1e-6)
        throw error(errc::identity, "equations",
                    "f^n P(f) = Q(f) violated, relative residual " + std::to_string(rep.identity_residual));
    rep.r = grid;
    rep.m.assign(grid.size(), 0.0);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        double r = grid[j];
        auto g = [&](double th) {
            double v = std::log(std::abs(wdp_evaluate(fx.P, f, std::polar(r, th), c)));
            return v > 0.0 ? v : 0.0;
        };
        rep.m[j] = circle_mean(g, tolerance_for(r, tol)).value;
    }
    rep.bound = std::max(fx.sigma - 0.5, 0.0) + 0.15;
    bool vanish = true;
    for (std::size_t j : top_decade(grid)) vanish = vanish && rep.m[j] <= 1e-12;
    rep.proximity_vanishes = vanish;
    if (vanish) {
        rep.exponent = -std::numeric_limits<double>::infinity();
    } else {
        rep.exponent = growth_exponent(grid, rep.m).slope;
    }
    rep.pass = rep.exponent <= rep.bound;
    return rep;
}

// f = x^2 + x, P(y) = D_W^2 y, Q(y) = 2y, n = 1.
inline clunie_fixture clunie_fixture_quadratic() {
    clunie_fixture fx;
    fx.label = "quadratic";
    fx.f = model_rational({{cplx(0.0), 1, divisor_kind::zero}, {cplx(-1.0), 1, divisor_kind::zero}});
    fx.sigma = 0.0;
    fx.P.terms = {{{1.0}, {0, 0, 1}}};
    fx.Q.terms = {{{2.0}, {1}}};
    fx.n = 1;
    return fx;
}

// P = 1 against Q(y) = y.
inline clunie_fixture clunie_fixture_unit(const meromorphic_model& f, double sigma) {
    clunie_fixture fx;
    fx.label = "unit";
    fx.f = f;
    fx.sigma = sigma;
    fx.P.terms = {{{1.0}, {}}};
    fx.Q.terms = {{{1.0}, {1}}};
    fx.n = 1;
    return fx;
}

// e^x with P(y) = D_W y and Q(y) = y D_W y; deg_f Q = 2 exceeds n = 1.
inline clunie_fixture clunie_fixture_exp() {
    clunie_fixture fx;
    fx.label = "exp";
    fx.f = model_exp();
    fx.sigma = 1.0;
    fx.P.terms = {{{1.0}, {0, 1}}};
    fx.Q.terms = {{{1.0}, {1, 1}}};
    fx.n = 1;
    return fx;
}

// sum_k A_k(x) y(x^{+(k)}), shifts signed, each A_k a polynomial or a catalog model with a sign.
struct interpolation_term {
    int shift = 0;
    polynomial poly;
    std::optional<meromorphic_model> model;
    double sign = 1.0;

    cplx coefficient(cplx x) const {
        if (model) {
            model_value v = model->evaluate(x);
            if (v.pole) throw error(errc::pole, "equations", "coefficient model has a pole at the evaluation point");
            return sign * v.value;
        }
        return sign * polyval(poly, x);
    }
};

struct interpolation_equation {
    std::vector<interpolation_term> terms;
    cplx c = I;

    void validate() const {
        if (terms.size() < 2) throw error(errc::parameter, "equations", "an interpolation equation needs two terms");
        bool nonzero = false;
        for (const auto& t : terms) nonzero = nonzero || t.model || std::any_of(t.poly.begin(), t.poly.end(), [](cplx v) {
                                                           return v != 0.0;
                                                       });
        if (!nonzero) throw error(errc::parameter, "equations", "all coefficients vanish");
    }
};

// Coefficient from a label: a catalog model, optionally negated with a leading '-'.
inline interpolation_term labelled_term(int shift, const std::string& label) {
    interpolation_term t;
    t.shift = shift;
    std::string name = label;
    if (!name.empty() && name[0] == '-') {
        t.sign = -1.0;
        name = name.substr(1);
    }
    t.model = catalog_model(name);
    return t;
}

inline interpolation_term polynomial_term(int shift, polynomial p) {
    interpolation_term t;
    t.shift = shift;
    t.poly = std::move(p);
    return t;
}

// y(x^+) - 2 cosh(pi sqrt x) y(x^-) = 0.
inline interpolation_equation ghyp_equation() {
    interpolation_equation eq;
    eq.terms = {polynomial_term(1, {1.0}), labelled_term(-1, "-cosh_coeff")};
    return eq;
}

// y(x^+) - y(x^-) = 0.
inline interpolation_equation period_equation() {
    interpolation_equation eq;
    eq.terms = {polynomial_term(1, {1.0}), polynomial_term(-1, {-1.0})};
    return eq;
}

// 2 cosh(2 pi sqrt x): period i in the square-root coordinate, so it solves the period equation.
inline meromorphic_model period_solution() {
    auto m = model_cosh_coefficient(2.0 * pi);
    m.label = "cosh_2pi";
    return m;
}

// Residual against the largest single term.
inline residual_value interp_residual(const interpolation_equation& eq, const meromorphic_model& y, cplx x) {
    eq.validate();
    cplx z = sqrt_with_cut(x, eq.c);
    cplx total = 0.0;
    double scale = 0.0;
    for (const auto& t : eq.terms) {
        cplx a = t.coefficient(x);
        if (a == 0.0) continue;
        model_value v = y.evaluate_z(z + double(t.shift) * 0.5 * eq.c);
        if (v.pole) throw error(errc::pole, "equations", "solution has a pole on the shift stencil");
        cplx term = a * v.value;
        total += term;
        scale = std::max(scale, std::abs(term));
    }
    residual_value r;
    r.residual = total;
    r.scale = scale;
    r.relative = scale > 0.0 ? std::abs(total) / scale : 0.0;
    return r;
}

struct order_bound {
    double sigma_y = 0.0;
    double sigma_l = 0.0;
    double margin = 0.0;
    double max_residual = 0.0;
    bool pass = false;
};

// sigma_y - sigma_l - 1/2 with sigma_l the largest coefficient order (0 for polynomials).
inline order_bound order_bound_report(const interpolation_equation& eq, const meromorphic_model& y,
                                      const std::vector<double>& grid, double tol = 0.0, unsigned threads = 0) {
    order_bound rep;
    for (const auto& x : detail::seeded_points(8, 5.0, 7u))
        rep.max_residual = std::max(rep.max_residual, interp_residual(eq, y, x).relative);
    if (rep.max_residual > 1e-6)
        throw error(errc::identity, "equations",
                    "not a solution: relative residual " + std::to_string(rep.max_residual));
    rep.sigma_y = detail::model_order(y, grid, tol, threads);
    for (const auto& t : eq.terms)
        if (t.model) rep.sigma_l = std::max(rep.sigma_l, detail::model_order(*t.model, grid, tol, threads));
    rep.margin = rep.sigma_y - rep.sigma_l - 0.5;
    rep.pass = rep.margin >= -0.1;
    return rep;
}

} // namespace wnev
