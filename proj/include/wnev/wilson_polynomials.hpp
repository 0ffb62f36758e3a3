#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "specfun.hpp"
#include "wilson_core.hpp"

namespace wnev {

struct wilson_params {
    cplx a, b, c, d;

    cplx sum() const { return a + b + c + d; }
    wilson_params shifted() const { return {a + 0.5, b + 0.5, c + 0.5, d + 0.5}; }
    std::array<cplx, 4> as_array() const { return {a, b, c, d}; }
};

// C_n = -n(n + a + b + c + d - 1).
inline cplx lowering_constant(int n, const wilson_params& p) { return -double(n) * (double(n) + p.sum() - 1.0); }

namespace detail {

// Terms of W_n written without parameter denominators:
// sum_k (-n)_k (n+s-1)_k / k! * prod_{j<k}((a+j)^2 + x) * prod_{k<=j<n}(a+b+j)(a+c+j)(a+d+j).
inline std::vector<cplx> wilson_factors(int n, const wilson_params& p, cplx x, int k) {
    std::vector<cplx> fs;
    cplx s = p.sum();
    for (int j = 0; j < k; ++j) {
        fs.push_back(double(j - n) / double(j + 1));
        fs.push_back(double(n) + s - 1.0 + double(j));
        fs.push_back((p.a + double(j)) * (p.a + double(j)) + x);
    }
    for (int j = k; j < n; ++j) {
        fs.push_back(p.a + p.b + double(j));
        fs.push_back(p.a + p.c + double(j));
        fs.push_back(p.a + p.d + double(j));
    }
    return fs;
}

} // namespace detail

// W_n(x; a, b, c, d) via the terminating 4F3 with its Pochhammer prefactor; depends on x only.
inline cplx wilson_poly(int n, const wilson_params& p, cplx x) {
    if (n < 0) throw error(errc::parameter, "wilson-polynomials", "degree must be nonnegative");
    bool large = false;
    cplx total = 0.0;
    for (int k = 0; k <= n && !large; ++k) {
        cplx t = 1.0;
        for (const auto& f : detail::wilson_factors(n, p, x, k)) {
            t *= f;
            if (std::abs(t) > 1e30) { large = true; break; }
        }
        total += t;
    }
    if (!large) return total;
    // log-magnitude products with a common scale
    std::vector<cplx> logs;
    double lmax = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) {
        cplx l = 0.0;
        bool zero = false;
        for (const auto& f : detail::wilson_factors(n, p, x, k)) {
            if (f == 0.0) { zero = true; break; }
            l += std::log(f);
        }
        if (zero) continue;
        logs.push_back(l);
        lmax = std::max(lmax, l.real());
    }
    cplx s = 0.0;
    for (const auto& l : logs) s += std::exp(l - lmax);
    return s * std::exp(lmax);
}

struct residual_value {
    cplx residual;
    double relative = 0.0;
    double scale = 0.0;
};

inline residual_value make_residual(cplx lhs, cplx rhs) {
    residual_value r;
    r.residual = lhs - rhs;
    r.scale = std::max(std::abs(lhs), std::abs(rhs));
    r.relative = r.scale > 0.0 ? std::abs(r.residual) / r.scale : 0.0;
    return r;
}

// D_W W_n(x) - C_n W_{n-1}(x; a+1/2, b+1/2, c+1/2, d+1/2).
inline residual_value lowering_residual(int n, const wilson_params& p, cplx x) {
    if (n < 1) throw error(errc::parameter, "wilson-polynomials", "lowering needs n >= 1");
    auto W = [&](cplx y) { return wilson_poly(n, p, y); };
    cplx lhs = x == 0.0 ? apply_DW_origin(W) : apply_DW(W, x);
    cplx rhs = lowering_constant(n, p) * wilson_poly(n - 1, p.shifted(), x);
    return make_residual(lhs, rhs);
}

// Which weight enters the Sturm-Liouville form: the gamma product itself, or the
// gamma product divided by the square-root coordinate (the weight against dx).
enum class weight_form { literal, measure };

namespace detail {

inline cplx log_gamma_checked(cplx w, const char* label) {
    if (near_nonpositive_integer(w, 1e-12))
        throw error(errc::singular, "wilson-polynomials",
                    std::string("gamma pole in ") + label + " at argument " + std::to_string(w.real()) + "+" +
                        std::to_string(w.imag()) + "i");
    return log_gamma(w);
}

} // namespace detail

// log mu at square-root coordinate w: prod Gamma(q -+ u) / (Gamma(2u) Gamma(-2u)), u = -w/c.
inline cplx log_weight_z(cplx w, const wilson_params& p, cplx c = I) {
    cplx u = -w / c;
    cplx l = 0.0;
    for (const auto& q : p.as_array()) {
        l += detail::log_gamma_checked(q - u, "mu numerator");
        l += detail::log_gamma_checked(q + u, "mu numerator");
    }
    // 1/(Gamma(2u) Gamma(-2u)) = -2u sin(2 pi u) / pi
    cplx v = -2.0 * u * std::sin(2.0 * pi * u) / pi;
    if (v == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
    return l + std::log(v);
}

inline cplx weight_z(cplx w, const wilson_params& p, cplx c = I, weight_form form = weight_form::literal) {
    cplx v = std::exp(log_weight_z(w, p, c));
    if (form == weight_form::measure) {
        if (w == 0.0) throw error(errc::singular, "wilson-polynomials", "measure weight at the origin");
        v /= w;
    }
    return v;
}

inline cplx weight_mu(cplx x, const wilson_params& p, cplx c = I) {
    return weight_z(sqrt_with_cut(x, c), p, c, weight_form::literal);
}

namespace detail {

// D_{W,c}( mu(.; shifted) D_{W,c} g ) at z on the five-point stencil z + j c/2.
inline cplx nested_sturm(const std::function<cplx(cplx)>& g_of_z, const wilson_params& p, cplx z, cplx c,
                         weight_form form) {
    if (z == 0.0) throw error(errc::singular, "wilson-polynomials", "stencil centred at the origin");
    auto inner = [&](cplx w) {
        if (w == 0.0) throw error(errc::singular, "wilson-polynomials", "inner stencil point at the origin");
        cplx dg = (g_of_z(w + 0.5 * c) - g_of_z(w - 0.5 * c)) / (2.0 * c * w);
        return weight_z(w, p.shifted(), c, form) * dg;
    };
    return (inner(z + 0.5 * c) - inner(z - 0.5 * c)) / (2.0 * c * z);
}

} // namespace detail

// D_W(mu(.; a+1/2, ...) D_W W_n) + n(n+s-1) mu W_n, reported relative to the larger term.
inline residual_value sturm_liouville_residual(int n, const wilson_params& p, cplx x,
                                               weight_form form = weight_form::measure) {
    cplx z = sqrt_with_cut(x);
    auto g = [&](cplx w) { return wilson_poly(n, p, w * w); };
    cplx t1 = detail::nested_sturm(g, p, z, I, form);
    cplx t2 = -lowering_constant(n, p) * weight_z(z, p, I, form) * g(z);
    return make_residual(t1, -t2);
}

// L_W f = (1/mu) D_W(mu(.; shifted) D_W f).
inline cplx lw_apply(const std::function<cplx(cplx)>& f, const wilson_params& p, cplx x,
                     weight_form form = weight_form::measure) {
    cplx z = sqrt_with_cut(x);
    auto g = [&](cplx w) { return f(w * w); };
    return detail::nested_sturm(g, p, z, I, form) / weight_z(z, p, I, form);
}

// L_W W_n against lambda_n W_n.
inline residual_value lw_eigen_residual(int n, const wilson_params& p, cplx x,
                                        weight_form form = weight_form::measure) {
    cplx lhs = lw_apply([&](cplx y) { return wilson_poly(n, p, y); }, p, x, form);
    cplx rhs = lowering_constant(n, p) * wilson_poly(n, p, x);
    return make_residual(lhs, rhs);
}

inline double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= double(k);
    return f;
}

// g_0 = 1, g_n(x) = (x - 1/4) (n+1)!/(2n)! W_{n-1}(-x; 1/2, 1/2, 3/2, 3/2).
inline cplx physics_eigensolution(int n, cplx x) {
    if (n == 0) return 1.0;
    const wilson_params q{0.5, 0.5, 1.5, 1.5};
    return (x - 0.25) * factorial(n + 1) / factorial(2 * n) * wilson_poly(n - 1, q, -x);
}

inline const wilson_params physics_base_params{0.5, 0.5, 1.5, 1.5};

// D_{W,1}(mu_1(.; shifted) D_{W,1} g_n) + (1 - l^2) mu_1 g_n with l = 2n + 1.
inline residual_value physics_eigen_check(int n, cplx x, const wilson_params& base = physics_base_params,
                                          weight_form form = weight_form::measure) {
    if (n < 0) throw error(errc::parameter, "wilson-polynomials", "n must be nonnegative");
    const cplx c = 1.0;
    cplx z = sqrt_with_cut(x, c);
    auto g = [&](cplx w) { return physics_eigensolution(n, w * w); };
    double l = 2.0 * n + 1.0;
    cplx t1 = detail::nested_sturm(g, base, z, c, form);
    cplx t2 = (1.0 - l * l) * weight_z(z, base, c, form) * g(z);
    return make_residual(t1, -t2);
}

} // namespace wnev
