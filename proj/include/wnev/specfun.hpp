#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "divisor.hpp"
#include "errors.hpp"

namespace wnev {

inline constexpr double pi = std::numbers::pi;
inline const cplx I{0.0, 1.0};

struct tail_bound {
    std::size_t terms_used = 0;
    double tail_estimate = 0.0;
    bool converged = false;
};

namespace detail {

// e^z - 1 without cancellation for small z.
inline cplx cexpm1(cplx z) {
    double x = z.real(), y = z.imag();
    double s = std::sin(0.5 * y);
    double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
    double im = std::exp(x) * std::sin(y);
    return {re, im};
}

// log(1 + z), principal branch.
inline cplx clog1p(cplx z) {
    if (std::abs(z) < 1e-4) {
        cplx t = z, s = 0.0;
        for (int k = 1; k <= 8; ++k) {
            s += (k % 2 ? 1.0 : -1.0) * t / double(k);
            t *= z;
        }
        return s;
    }
    return std::log(1.0 + z);
}

inline bool near_nonpositive_integer(cplx z, double tol = 1e-13) {
    double n = std::round(z.real());
    return n <= 0.0 && std::abs(z - cplx(n, 0.0)) < tol;
}

// log sin(pi z) on Im z >= 0, continuous there.
inline cplx log_sin_pi_upper(cplx z) {
    double n = std::round(z.real());
    cplx w = z - n;
    return -I * pi * z + std::log(-cexpm1(2.0 * pi * I * w)) + cplx(std::log(0.5), 0.5 * pi);
}

inline constexpr std::array<double, 10> stirling_b2k = {
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0, -174611.0 / 330.0};

} // namespace detail

// Principal branch of log Gamma.
inline cplx log_gamma(cplx z) {
    if (detail::near_nonpositive_integer(z))
        throw error(errc::pole, "specfun", "log_gamma at a nonpositive integer");
    if (z.real() < 0.5) {
        if (z.imag() < 0.0) return std::conj(log_gamma(std::conj(z)));
        return std::log(pi) - detail::log_sin_pi_upper(z) - log_gamma(1.0 - z);
    }
    cplx shift = 0.0;
    while (std::abs(z) < 15.0) {
        shift += std::log(z);
        z += 1.0;
    }
    cplx lz = std::log(z);
    cplx s = (z - 0.5) * lz - z + 0.5 * std::log(2.0 * pi);
    cplx zinv = 1.0 / z, z2inv = zinv * zinv, p = zinv;
    for (std::size_t k = 1; k <= detail::stirling_b2k.size(); ++k) {
        cplx term = detail::stirling_b2k[k - 1] / double(2 * k * (2 * k - 1)) * p;
        s += term;
        if (std::abs(term) < 1e-17 * std::abs(s)) break;
        p *= z2inv;
    }
    return s - shift;
}

// Lanczos approximation, g = 7.
inline cplx gamma(cplx z) {
    if (detail::near_nonpositive_integer(z))
        throw error(errc::pole, "specfun", "gamma at a nonpositive integer");
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma(1.0 - z));
    static constexpr std::array<double, 9> p = {
        0.99999999999980993, 676.5203681218851, -1259.1392167224028,
        771.32342877765313, -176.61502916214059, 12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    z -= 1.0;
    cplx a = p[0];
    for (int k = 1; k < 9; ++k) a += p[k] / (z + double(k));
    cplx t = z + 7.5;
    return std::sqrt(2.0 * pi) * std::exp((z + 0.5) * std::log(t) - t) * a;
}

// 1/Gamma, zero at the poles.
inline cplx rgamma(cplx z) {
    if (detail::near_nonpositive_integer(z, 1e-15)) return 0.0;
    return 1.0 / gamma(z);
}

struct series_value {
    cplx value;
    tail_bound tail;
};

inline series_value hyp2f1(cplx a, cplx b, cplx c, cplx z, double tol = 1e-15) {
    if (detail::near_nonpositive_integer(c, 1e-14))
        throw error(errc::parameter, "specfun", "hyp2f1 lower parameter is a nonpositive integer");
    if (std::abs(z - 1.0) < 1e-15) {
        if ((c - a - b).real() <= 0.0)
            throw error(errc::divergence, "specfun", "hyp2f1 at z=1 needs Re(c-a-b) > 0");
        cplx v = gamma(c) * gamma(c - a - b) * rgamma(c - a) * rgamma(c - b);
        return {v, {0, 0.0, true}};
    }
    if (std::abs(z + 1.0) < 1e-15) {
        if (std::abs(c - (1.0 + b - a)) < 1e-14) std::swap(a, b);
        if (std::abs(c - (1.0 + a - b)) < 1e-14) {
            cplx v = gamma(1.0 + a - b) * gamma(1.0 + 0.5 * a) * rgamma(1.0 + a) *
                     rgamma(1.0 + 0.5 * a - b);
            return {v, {0, 0.0, true}};
        }
    }
    if (std::abs(z) >= 1.0)
        throw error(errc::divergence, "specfun", "hyp2f1 series outside the unit disk");

    cplx sum = 0.0, term = 1.0;
    const std::size_t max_terms = 200000;
    for (std::size_t k = 0; k < max_terms; ++k) {
        sum += term;
        double kd = double(k);
        cplx num = (a + kd) * (b + kd);
        if (num == 0.0) return {sum, {k + 1, 0.0, true}};
        cplx ratio = num / ((c + kd) * (kd + 1.0)) * z;
        term *= ratio;
        double rho = std::abs(ratio);
        if (rho < 1.0) {
            double tail = std::abs(term) / (1.0 - rho);
            double floor = 1e-16 * std::abs(sum);
            if (tail <= std::max(tol, floor) && kd > 2.0) {
                return {sum, {k + 1, tail, tail <= tol}};
            }
        }
    }
    return {sum, {max_terms, std::abs(term), false}};
}

// Terminating 4F3 with first upper parameter -n.
inline cplx hyp4f3_terminating(int n, const std::array<cplx, 3>& upper,
                               const std::array<cplx, 3>& lower, cplx arg) {
    if (n < 0) throw error(errc::parameter, "specfun", "hyp4f3 degree must be nonnegative");
    for (int k = 0; k < n; ++k)
        for (const auto& l : lower)
            if (std::abs(l + double(k)) < 1e-14)
                throw error(errc::parameter, "specfun", "vanishing Pochhammer denominator");
    cplx sum = 1.0, term = 1.0;
    for (int k = 0; k < n; ++k) {
        double kd = double(k);
        term *= (kd - double(n)) * (upper[0] + kd) * (upper[1] + kd) * (upper[2] + kd) /
                ((lower[0] + kd) * (lower[1] + kd) * (lower[2] + kd) * (kd + 1.0)) * arg;
        sum += term;
    }
    return sum;
}

// Dilogarithm Li_2 via the Bernoulli series in -log(1-u).
inline cplx dilog(cplx u) {
    static const double zeta2 = pi * pi / 6.0;
    if (u == 0.0) return 0.0;
    if (std::abs(u - 1.0) < 1e-300) return zeta2;
    if (std::abs(u) > 1.0) {
        cplx l = std::log(-u);
        return -zeta2 - 0.5 * l * l - dilog(1.0 / u);
    }
    if (u.real() > 0.5) {
        return zeta2 - std::log(u) * std::log(1.0 - u) - dilog(1.0 - u);
    }
    // B_{2k} / (2k+1)!
    static constexpr std::array<double, 15> c = {
        1.0 / 6.0 / 6.0,
        -1.0 / 30.0 / 120.0,
        1.0 / 42.0 / 5040.0,
        -1.0 / 30.0 / 362880.0,
        5.0 / 66.0 / 39916800.0,
        -691.0 / 2730.0 / 6227020800.0,
        7.0 / 6.0 / 1307674368000.0,
        -3617.0 / 510.0 / 355687428096000.0,
        43867.0 / 798.0 / 121645100408832000.0,
        -174611.0 / 330.0 / 51090942171709440000.0,
        854513.0 / 138.0 / 25852016738884976640000.0,
        -236364091.0 / 2730.0 / 15511210043330985984000000.0,
        8553103.0 / 6.0 / 10888869450418352160768000000.0,
        -23749461029.0 / 870.0 / 8841761993739701954543616000000.0,
        8615841276005.0 / 14322.0 / 8222838654177922817725562880000000.0};
    cplx w = -detail::clog1p(-u);
    cplx w2 = w * w;
    cplx s = w - 0.25 * w2;
    cplx p = w * w2;
    for (double ck : c) {
        cplx t = ck * p;
        s += t;
        if (std::abs(t) < 1e-17 * std::abs(s)) break;
        p *= w2;
    }
    return s;
}

// Closed form of i^{-1} log G_hyp(1,1;z), odd in z, meromorphic continuation of the strip integral.
inline cplx ghyp_exponent(cplx z) {
    if (z.real() < 0.0) return -ghyp_exponent(-z);
    cplx u = std::exp(-2.0 * pi * z);
    cplx l1 = detail::clog1p(-u);
    return -0.5 * pi * z * z - z * l1 + dilog(u) / (2.0 * pi) - pi / 12.0;
}

namespace detail {

inline cplx ghyp_integrand(double a, double b, cplx z, double t) {
    if (t > 1.0) {
        // sin(2tz) / (2 sinh(at) sinh(bt)) with the exponentials combined to stay finite.
        double den = -std::expm1(-2.0 * a * t) * -std::expm1(-2.0 * b * t);
        cplx e1 = std::exp(2.0 * I * t * z - (a + b) * t);
        cplx e2 = std::exp(-2.0 * I * t * z - (a + b) * t);
        cplx s = (e1 - e2) / (2.0 * I) * 2.0 / den;
        return (s - z / (a * b * t)) / t;
    }
    return (std::sin(2.0 * t * z) / (2.0 * std::sinh(a * t) * std::sinh(b * t)) - z / (a * b * t)) / t;
}

inline cplx ghyp_small_t_integral(double a, double b, cplx z, double ts) {
    cplx z2 = z * z;
    double a2 = a * a, b2 = b * b, ab = a * b;
    cplx c0 = -z * (a2 + b2 + 4.0 * z2) / (6.0 * ab);
    cplx c2 = z * (7.0 * a2 * a2 + 10.0 * a2 * b2 + 40.0 * a2 * z2 + 7.0 * b2 * b2 + 40.0 * b2 * z2 +
                   48.0 * z2 * z2) / (360.0 * ab);
    cplx c4 = -z * (31.0 * a2 * a2 * a2 + 49.0 * a2 * a2 * b2 + 196.0 * a2 * a2 * z2 +
                    49.0 * a2 * b2 * b2 + 280.0 * a2 * b2 * z2 + 336.0 * a2 * z2 * z2 +
                    31.0 * b2 * b2 * b2 + 196.0 * b2 * b2 * z2 + 336.0 * b2 * z2 * z2 +
                    192.0 * z2 * z2 * z2) / (15120.0 * ab);
    double t3 = ts * ts * ts;
    return c0 * ts + c2 * t3 / 3.0 + c4 * t3 * ts * ts / 5.0;
}

} // namespace detail

// Hyperbolic gamma G_hyp(a,b;z) by quadrature of its integral representation.
inline cplx hyperbolic_gamma(double a, double b, cplx z, double tol = 1e-10) {
    if (!(a > 0.0 && b > 0.0)) throw error(errc::parameter, "specfun", "hyperbolic_gamma needs a,b > 0");
    double gap = a + b - std::abs(2.0 * z.imag());
    if (gap <= 0.0) throw error(errc::strip, "specfun", "|Im 2z| must be below a+b");
    if (z == 0.0) return 1.0;
    double scale = std::max({1.0, a, b, std::abs(z)});
    double ts = 0.01 / scale;
    double T = std::max(2.0, std::log(10.0 / tol) / gap);
    using gk = boost::math::quadrature::gauss_kronrod<double, 61>;
    double rel = std::min(tol, 1e-12);
    auto re = [&](double t) { return detail::ghyp_integrand(a, b, z, t).real(); };
    auto im = [&](double t) { return detail::ghyp_integrand(a, b, z, t).imag(); };
    cplx integral = detail::ghyp_small_t_integral(a, b, z, ts);
    double err_re = 0.0, err_im = 0.0;
    double lo = ts;
    // Panels of unit length keep the oscillation per panel bounded.
    double panel = std::max(0.25, std::min(1.0, 2.0 / std::max(1.0, std::abs(z.real()))));
    while (lo < T) {
        double hi = std::min(T, lo + panel);
        double e1 = 0.0, e2 = 0.0;
        double vr = gk::integrate(re, lo, hi, 15, rel, &e1);
        double vi = gk::integrate(im, lo, hi, 15, rel, &e2);
        integral += cplx(vr, vi);
        err_re += e1;
        err_im += e2;
        lo = hi;
    }
    integral += -z / (a * b * T);
    return std::exp(I * integral);
}

struct product_value {
    cplx value;
    tail_bound tail;
    int vanishing_order = 0;
};

// Weierstrass-free canonical product over a stream of exponent of convergence below one.
inline product_value infinite_product(const divisor_stream& zeros, cplx x, double tol = 1e-12) {
    product_value out;
    auto accumulate = [&](const std::vector<divisor>& ds, std::size_t from, std::size_t to, cplx& logsum) {
        for (std::size_t k = from; k < to; ++k) {
            const auto& d = ds[k];
            int sgn = d.kind == divisor_kind::zero ? 1 : -1;
            if (same_point(d.location, x) || std::abs(d.location - x) < 1e-14 * std::max(1.0, std::abs(x))) {
                out.vanishing_order += sgn * d.multiplicity;
                continue;
            }
            logsum += double(sgn * d.multiplicity) * detail::clog1p(-x / d.location);
        }
    };

    if (zeros.finite()) {
        auto ds = zeros.enumerate(std::numeric_limits<double>::infinity());
        cplx logsum = 0.0;
        accumulate(ds, 0, ds.size(), logsum);
        out.tail = {ds.size(), 0.0, true};
        out.value = out.vanishing_order > 0 ? cplx(0.0) : std::exp(logsum);
        return out;
    }

    double rho = zeros.convergence_exponent();
    if (!(rho > 0.0 && rho < 1.0))
        throw error(errc::parameter, "specfun", "infinite_product needs exponent of convergence in (0,1)");
    const double p = 1.0 / rho - 1.0;
    const std::size_t k0 = 64, kmax = std::size_t(1) << 17;

    double radius = 16.0;
    std::vector<divisor> ds;
    auto ensure = [&](std::size_t count) {
        while (ds.size() < count) {
            if (radius > 1e200) throw error(errc::parameter, "specfun", "stream exhausted before the tail bound");
            radius *= 4.0;
            ds = zeros.enumerate(radius);
        }
    };

    std::vector<std::vector<cplx>> table;
    cplx logsum = 0.0;
    std::size_t done = 0;
    double err = std::numeric_limits<double>::infinity();
    for (std::size_t K = k0; K <= kmax; K *= 2) {
        ensure(K);
        accumulate(ds, done, K, logsum);
        done = K;
        std::vector<cplx> row{logsum};
        const auto* prev = table.empty() ? nullptr : &table.back();
        for (std::size_t i = 1; prev && i <= prev->size(); ++i) {
            double f = std::pow(2.0, p * double(i)) - 1.0;
            row.push_back(row[i - 1] + (row[i - 1] - (*prev)[i - 1]) / f);
        }
        if (prev) err = std::abs(row.back() - prev->back());
        table.push_back(std::move(row));
        out.tail.terms_used = K;
        out.tail.tail_estimate = err;
        if (table.size() >= 3 && err < tol) break;
    }
    out.tail.converged = err < tol;
    out.value = out.vanishing_order > 0 ? cplx(0.0) : std::exp(table.back().back());
    return out;
}

} // namespace wnev
