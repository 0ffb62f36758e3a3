#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "specfun.hpp"

namespace wnev {

// Square root with the cut on the line through 0 and c; returns z with Re(z/u) >= 0, u = c/i.
// On the cut the root with Im(z/u) >= 0 is taken, so sqrt_with_cut(-1, i) = i.
inline cplx sqrt_with_cut(cplx x, cplx c = I) {
    if (c == 0.0) throw error(errc::parameter, "wilson-core", "shift c must be nonzero");
    if (x == 0.0) return 0.0;
    cplx u = c / I;
    u /= std::abs(u);
    cplx s = std::sqrt(x / (u * u));
    if (s.real() < 0.0) s = -s;
    if (s.real() == 0.0 && s.imag() < 0.0) s = -s;
    return u * s;
}

// The same branch for c = i in any complex type with sqrt, real and imag (e.g. multiprecision).
template <class C>
C sqrt_with_cut_generic(const C& x) {
    using std::sqrt;
    if (x == C(0)) return C(0);
    C s = sqrt(x);
    if (s.real() < 0) s = -s;
    if (s.real() == 0 && s.imag() < 0) s = -s;
    return s;
}

// D_W f(x) for c = i evaluated in a caller-chosen complex type; f maps C to C.
template <class C, class F>
C apply_DW_generic(F&& f, const C& x) {
    C z = sqrt_with_cut_generic(x);
    if (z == C(0)) throw error(errc::singular, "wilson-core", "D_W at the origin needs the derivative rule");
    C h(0, 1);
    h /= 2;
    C zp = z + h, zm = z - h;
    return (f(zp * zp) - f(zm * zm)) / (C(0, 2) * z);
}

// A point of the square-root lattice; shifts are exact translations of z.
class lattice_coord {
public:
    lattice_coord() = default;
    explicit lattice_coord(cplx z, cplx c = I) : z_(z), c_(c) {
        if (c == 0.0) throw error(errc::parameter, "wilson-core", "shift c must be nonzero");
    }
    static lattice_coord from_x(cplx x, cplx c = I) { return lattice_coord(sqrt_with_cut(x, c), c); }

    cplx z() const { return z_; }
    cplx shift_c() const { return c_; }
    cplx x() const { return z_ * z_; }

    lattice_coord plus() const { return lattice_coord(z_ + 0.5 * c_, c_); }
    lattice_coord minus() const { return lattice_coord(z_ - 0.5 * c_, c_); }
    lattice_coord shifted(int m) const { return lattice_coord(z_ + double(m) * 0.5 * c_, c_); }

private:
    cplx z_ = 0.0;
    cplx c_ = I;
};

inline lattice_coord shift(const lattice_coord& p, int m) { return p.shifted(m); }

struct wilson_evaluation {
    cplx value;
    lattice_coord at;
    std::vector<lattice_coord> used_points;
};

namespace detail {

inline void require_finite(cplx v, const char* where) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw error(errc::pole, "wilson-core", std::string("evaluator infinite at ") + where);
}

} // namespace detail

template <class F>
wilson_evaluation evaluate_DW(F&& f, const lattice_coord& p) {
    if (p.z() == 0.0)
        throw error(errc::singular, "wilson-core", "D_W at the origin needs the derivative rule");
    auto xp = p.plus(), xm = p.minus();
    cplx fp = f(xp.x()), fm = f(xm.x());
    detail::require_finite(fp, "x^+");
    detail::require_finite(fm, "x^-");
    // x^+ - x^- = 2 c z
    cplx v = (fp - fm) / (2.0 * p.shift_c() * p.z());
    return {v, p, {xp, xm}};
}

template <class F>
cplx apply_DW(F&& f, const lattice_coord& p) {
    return evaluate_DW(std::forward<F>(f), p).value;
}

template <class F>
cplx apply_DW(F&& f, cplx x, cplx c = I) {
    return apply_DW(std::forward<F>(f), lattice_coord::from_x(x, c));
}

template <class F>
cplx apply_AW(F&& f, const lattice_coord& p) {
    cplx fp = f(p.plus().x()), fm = f(p.minus().x());
    detail::require_finite(fp, "x^+");
    detail::require_finite(fm, "x^-");
    return 0.5 * (fp + fm);
}

template <class F>
cplx apply_AW(F&& f, cplx x, cplx c = I) {
    return apply_AW(std::forward<F>(f), lattice_coord::from_x(x, c));
}

// D_{W,c} f(0) = f'(c^2/4) from a supplied derivative.
template <class DF>
cplx apply_DW_origin_exact(DF&& df, cplx c = I) {
    return df(0.25 * c * c);
}

// D_{W,c} f(0) from a Richardson-extrapolated central difference at c^2/4.
template <class F>
cplx apply_DW_origin(F&& f, cplx c = I, double h = 1e-3) {
    cplx x0 = 0.25 * c * c;
    auto central = [&](double s) { return (f(x0 + s) - f(x0 - s)) / (2.0 * s); };
    cplx d1 = central(h), d2 = central(0.5 * h);
    detail::require_finite(d1, "the origin stencil");
    detail::require_finite(d2, "the origin stencil");
    double scale = std::max(1.0, std::abs(d2));
    if (std::abs(d1 - d2) > 1e-4 * scale)
        throw error(errc::non_differentiable, "wilson-core", "central differences disagree at c^2/4");
    // One-sided slopes differ by O(s) when smooth and by a fixed jump at a kink.
    cplx f0 = f(x0);
    auto jump = [&](double s) { return std::abs((f(x0 + s) - f0) / s - (f0 - f(x0 - s)) / s); };
    double j1 = jump(h), j2 = jump(0.5 * h);
    if (j1 > 1e-8 * scale && j2 > 0.75 * j1)
        throw error(errc::non_differentiable, "wilson-core", "one-sided slopes disagree at c^2/4");
    return (4.0 * d2 - d1) / 3.0;
}

// k-fold D_W on the symmetric stencil z + j c/2, j = -k, -k+2, ..., k.
template <class F>
cplx apply_DW_iter(F&& f, const lattice_coord& p, int k) {
    if (k < 0) throw error(errc::parameter, "wilson-core", "iteration count must be nonnegative");
    const cplx z = p.z(), c = p.shift_c();
    std::vector<cplx> level;
    level.reserve(k + 1);
    for (int j = -k; j <= k; j += 2) {
        cplx w = z + double(j) * 0.5 * c;
        cplx v = f(w * w);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw error(errc::pole, "wilson-core", "pole on stencil at j=" + std::to_string(j));
        level.push_back(v);
    }
    for (int m = 1; m <= k; ++m) {
        std::vector<cplx> next;
        int span = k - m;
        for (int idx = 0, j = -span; j <= span; j += 2, ++idx) {
            cplx w = z + double(j) * 0.5 * c;
            if (w == 0.0)
                throw error(errc::singular, "wilson-core", "stencil passes through the origin at j=" + std::to_string(j));
            next.push_back((level[idx + 1] - level[idx]) / (2.0 * c * w));
        }
        level = std::move(next);
    }
    return level.front();
}

template <class F>
cplx apply_DW_iter(F&& f, cplx x, int k, cplx c = I) {
    return apply_DW_iter(std::forward<F>(f), lattice_coord::from_x(x, c), k);
}

struct convergence_report {
    std::vector<double> c_values;
    std::vector<double> errors;
    double order = 0.0;
};

// |D_{W,c} f(x) - f'(x)| along a sequence c -> 0 and the least-squares order in c.
template <class F, class DF>
convergence_report cshift_limit_check(F&& f, DF&& df, cplx x, const std::vector<double>& c_sequence) {
    convergence_report rep;
    cplx exact = df(x);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double c : c_sequence) {
        cplx v = apply_DW(f, lattice_coord::from_x(x, cplx(c, 0.0)));
        double e = std::abs(v - exact);
        rep.c_values.push_back(c);
        rep.errors.push_back(e);
        if (e > 0.0) {
            double lx = std::log(c), ly = std::log(e);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly; ++n;
        }
    }
    if (n >= 2) rep.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    else rep.order = std::numeric_limits<double>::infinity();
    return rep;
}

// log(e^A - e^B) up to a multiple of 2 pi i.
inline cplx log_diff_exp(cplx A, cplx B) {
    const double ninf = -std::numeric_limits<double>::infinity();
    if (A.real() == ninf && B.real() == ninf) return {ninf, 0.0};
    if (A.real() == ninf) return B + I * pi;
    if (B.real() == ninf) return A;
    if (A.real() >= B.real()) return A + std::log(-detail::cexpm1(B - A));
    return B + std::log(detail::cexpm1(A - B));
}

// log(e^A + e^B) up to a multiple of 2 pi i.
inline cplx log_sum_exp(cplx A, cplx B) {
    const double ninf = -std::numeric_limits<double>::infinity();
    if (A.real() == ninf) return B;
    if (B.real() == ninf) return A;
    if (A.real() >= B.real()) return A + detail::clog1p(std::exp(B - A));
    return B + detail::clog1p(std::exp(A - B));
}

// log D_{W,c} f at z for an even log-evaluator lf(z) = log f(z^2).
template <class LF>
cplx log_apply_DW(LF&& lf, cplx z, cplx c = I) {
    if (z == 0.0) throw error(errc::singular, "wilson-core", "log D_W at the origin");
    cplx A = lf(z + 0.5 * c), B = lf(z - 0.5 * c);
    if (A.real() == std::numeric_limits<double>::infinity() || B.real() == std::numeric_limits<double>::infinity())
        throw error(errc::pole, "wilson-core", "evaluator infinite on the shift stencil");
    return log_diff_exp(A, B) - std::log(2.0 * c * z);
}

} // namespace wnev
