#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "divisor.hpp"
#include "errors.hpp"
#include "specfun.hpp"
#include "wilson_core.hpp"

namespace wnev {

struct model_value {
    cplx value;
    bool pole = false;
};

// Evaluator is carried as log f(z^2) in the square-root coordinate; it must be even in z.
class meromorphic_model {
public:
    using log_fn = std::function<cplx(cplx)>;

    std::string label;
    double declared_order = 0.0;
    divisor_stream zeros;
    divisor_stream poles;
    log_fn logz;
    std::optional<cplx> constant;

    bool has_evaluator() const { return static_cast<bool>(logz); }

    cplx log_at_z(cplx z) const {
        if (!logz) throw error(errc::evaluator_required, "funcmodel", "model '" + label + "' has no evaluator");
        return logz(z);
    }
    cplx log_at(cplx x) const { return log_at_z(sqrt_with_cut(x)); }

    model_value evaluate_z(cplx z) const {
        cplx l = log_at_z(z);
        if (l.real() == std::numeric_limits<double>::infinity()) return {cplx(INFINITY, 0.0), true};
        if (l.real() == -std::numeric_limits<double>::infinity()) return {0.0, false};
        return {std::exp(l), false};
    }
    model_value evaluate(cplx x) const { return evaluate_z(sqrt_with_cut(x)); }

    // Plain x-evaluator; poles come back as infinities.
    std::function<cplx(cplx)> as_function() const {
        return [m = *this](cplx x) { return m.evaluate(x).value; };
    }
};

namespace detail {

inline const double ninf = -std::numeric_limits<double>::infinity();
inline const double pinf = std::numeric_limits<double>::infinity();

// -log Gamma(w), -inf at the poles of Gamma.
inline cplx neg_log_gamma(cplx w) {
    if (near_nonpositive_integer(w, 1e-13 * std::max(1.0, std::abs(w)))) return {ninf, 0.0};
    return -log_gamma(w);
}

inline cplx log_gamma_or_pinf(cplx w) {
    if (near_nonpositive_integer(w, 1e-13 * std::max(1.0, std::abs(w)))) return {pinf, 0.0};
    return log_gamma(w);
}

// log(sinh(w)/w), even in w.
inline cplx log_sinhc(cplx w) {
    if (w.real() < 0.0) w = -w;
    if (std::abs(w) < 1.0) {
        if (w == 0.0) return 0.0;
        cplx v = std::sinh(w) / w;
        if (v == 0.0) return {ninf, 0.0};
        return std::log(v);
    }
    cplx e = cexpm1(-2.0 * w);  // e^{-2w} - 1
    if (e == 0.0) return {ninf, 0.0};
    return w + std::log(-e) - std::log(2.0) - std::log(w);
}

// log cosh(w), even in w.
inline cplx log_cosh(cplx w) {
    if (w.real() < 0.0) w = -w;
    cplx e = std::exp(-2.0 * w);
    cplx s = 1.0 + e;
    if (std::abs(s) < 1e-300) return {ninf, 0.0};
    return w + clog1p(e) - std::log(2.0);
}

inline std::vector<divisor> lattice_divisors(cplx base, cplx step, int mult, divisor_kind kind, double r,
                                             int kmin = 0) {
    std::vector<divisor> out;
    for (int k = kmin;; ++k) {
        cplx z = base + double(k) * step;
        double mod = std::norm(z);
        // moduli along a line are convex in k; stop once past the minimum and outside r
        cplx znext = z + step;
        if (mod > r && std::norm(znext) >= mod) break;
        if (mod <= r) out.push_back({z * z, mult, kind});
        if (k > kmin + 100000000) break;
    }
    return out;
}

} // namespace detail

inline meromorphic_model model_exp() {
    meromorphic_model m;
    m.label = "exp";
    m.declared_order = 1.0;
    m.logz = [](cplx z) { return z * z; };
    return m;
}

inline meromorphic_model model_constant(cplx value) {
    meromorphic_model m;
    m.label = "const";
    m.declared_order = 0.0;
    m.constant = value;
    m.logz = [value](cplx) {
        if (value == 0.0) return cplx(detail::ninf, 0.0);
        return std::log(value);
    };
    return m;
}

// prod_{k>=0} [1 - x/(b+ki)^2] = Gamma(-ib)^2 / (Gamma(-ib+iz) Gamma(-ib-iz))
inline meromorphic_model model_product_i(cplx b) {
    for (int k = 0; k < 64; ++k)
        if (std::abs(b - cplx(0.0, double(k))) < 1e-13)
            throw error(errc::parameter, "funcmodel", "product_i needs b outside iN_0");
    cplx beta = -I * b;
    if (detail::near_nonpositive_integer(beta, 1e-13))
        throw error(errc::parameter, "funcmodel", "product_i: Gamma(-ib) has a pole");
    meromorphic_model m;
    m.label = "product_i";
    m.declared_order = 0.5;
    cplx lg0 = 2.0 * log_gamma(beta);
    m.logz = [beta, lg0](cplx z) {
        return lg0 + detail::neg_log_gamma(beta + I * z) + detail::neg_log_gamma(beta - I * z);
    };
    m.zeros = divisor_stream(
        [b](double r) { return detail::lattice_divisors(b, I, 1, divisor_kind::zero, r); }, 0.5);
    return m;
}

// Kummer closed form of the Wilson generating function at t = -1 with b = d = 1/2, a = c.
inline meromorphic_model model_phi_ii(cplx a) {
    for (int k = 1; k < 64; ++k)
        if (std::abs(a - cplx(0.5 - k, 0.0)) < 1e-13)
            throw error(errc::parameter, "funcmodel", "phi_ii needs a outside {1/2 - k}");
    meromorphic_model m;
    m.label = "phi_ii";
    m.declared_order = 0.5;
    cplx lg0 = 2.0 * log_gamma(a + 0.5);
    m.logz = [a, lg0](cplx z) {
        cplx h = 0.5 * I * z;
        return lg0 + detail::log_gamma_or_pinf(1.0 + 0.5 * a + h) + detail::log_gamma_or_pinf(1.0 + 0.5 * a - h) +
               detail::neg_log_gamma(1.0 + a + I * z) + detail::neg_log_gamma(1.0 + a - I * z) +
               detail::neg_log_gamma(0.5 + 0.5 * a + h) + detail::neg_log_gamma(0.5 + 0.5 * a - h);
    };
    // double zeros at -(a + 1 + 2n)^2, z = i(a + 1 + 2n)
    m.zeros = divisor_stream(
        [a](double r) { return detail::lattice_divisors(I * (a + 1.0), 2.0 * I, 2, divisor_kind::zero, r); }, 0.5);
    return m;
}

// prod_k [1 - x/(2ki)^2]^p [1 - x/((2k-1)i)^2]^q
inline meromorphic_model model_g_iii(int p, int q) {
    if (p < 1 || q < 0 || q > p) throw error(errc::parameter, "funcmodel", "g_iii needs p >= q >= 0, p >= 1");
    meromorphic_model m;
    m.label = "g_iii";
    m.declared_order = 0.5;
    m.logz = [p, q](cplx z) {
        cplx w = 0.5 * pi * z;
        cplx v = 0.0;
        if (p) v += double(p) * detail::log_sinhc(w);
        if (q) v += double(q) * detail::log_cosh(w);
        return v;
    };
    m.zeros = divisor_stream(
        [p, q](double r) {
            std::vector<divisor> out;
            for (int k = 1; double(k) * double(k) <= r; ++k) {
                int mult = (k % 2 == 0) ? p : q;
                if (mult > 0) out.push_back({cplx(-double(k) * k, 0.0), mult, divisor_kind::zero});
            }
            return out;
        },
        0.5);
    return m;
}

struct rational_approx {
    long num = 0;
    long den = 1;
};

// s as u/v with v <= 1000.
inline rational_approx rationalize(double s) {
    for (long v = 1; v <= 1000; ++v) {
        double u = std::round(s * double(v));
        if (std::abs(s * double(v) - u) < 1e-9) return {long(u), v};
    }
    throw error(errc::parameter, "funcmodel", "h_iv supports rational s with denominator at most 1000");
}

// prod_{k>=1} [1 - x/((k + a_k) i)^2] with a_k = floor((1-s) k).
inline meromorphic_model model_h_iv(double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw error(errc::parameter, "funcmodel", "h_iv needs s in [0,1]");
    auto q = rationalize(s);
    const long u = q.num, v = q.den;
    const long P = 2 * v - u;
    std::vector<long> R;
    for (long k = 1; k <= v; ++k) R.push_back(k + ((v - u) * k) / v);
    meromorphic_model m;
    m.label = "h_iv";
    m.declared_order = 0.5;
    std::vector<cplx> lg0;
    for (long r : R) lg0.push_back(2.0 * log_gamma(cplx(double(r) / double(P), 0.0)));
    m.logz = [R, P, lg0](cplx z) {
        cplx v = 0.0;
        cplx iz = I * z / double(P);
        for (std::size_t j = 0; j < R.size(); ++j) {
            double al = double(R[j]) / double(P);
            v += lg0[j] + detail::neg_log_gamma(al + iz) + detail::neg_log_gamma(al - iz);
        }
        return v;
    };
    m.zeros = divisor_stream(
        [u, v](double r) {
            std::vector<divisor> out;
            for (long k = 1;; ++k) {
                long n = k + ((v - u) * k) / v;
                if (double(n) * double(n) > r) break;
                out.push_back({cplx(-double(n) * double(n), 0.0), 1, divisor_kind::zero});
            }
            return out;
        },
        0.5);
    return m;
}

// (G_hyp(1,1;z) + G_hyp(1,1;-z))/2 = cos L(z), L the continued exponent.
namespace detail {

// Newton on ghyp_exponent(z) = t in Re z >= 0, with d/dz = -pi z coth(pi z).
inline std::optional<cplx> ghyp_level_point(cplx z, double t) {
    for (int it = 0; it < 80; ++it) {
        cplx d = -pi * z / std::tanh(pi * z);
        cplx step = (ghyp_exponent(z) - t) / d;
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
        if (z.real() < 0.0) z = cplx(0.0, z.imag());
        if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(z))) return z;
    }
    return std::nullopt;
}

// Zeros of cos L: real ones at L = -pi/2 - m pi on x > 0, and k near each lattice point ik on the
// half loop |2 sinh(pi (z - ik))| = 1, Re z > 0, where L is close to const + k theta.
inline std::vector<divisor> ghyp_zeros(double r) {
    std::vector<divisor> out;
    auto push = [&](cplx z) {
        cplx x = z * z;
        if (std::abs(x) <= r) out.push_back({x, 1, divisor_kind::zero});
    };
    for (int m = 0;; ++m) {
        double t = -0.5 * pi - pi * double(m);
        double seed = std::sqrt(std::max(0.05, -2.0 * (t + pi / 12.0) / pi));
        if (seed * seed > r + 4.0) break;
        if (auto z = ghyp_level_point(seed, t)) push(cplx(z->real(), 0.0));
    }
    const int K = int(std::sqrt(r)) + 2;
    for (int k = 1; k <= K; ++k) {
        for (int sgn : {1, -1}) {
            cplx centre(0.0, double(sgn * k));
            auto loop = [&](double th) { return centre + std::asinh(0.5 * std::polar(1.0, th)) / pi; };
            double lo = ghyp_exponent(loop(-0.5 * pi)).real(), hi = ghyp_exponent(loop(0.5 * pi)).real();
            double a = std::min(lo, hi), b = std::max(lo, hi);
            std::vector<cplx> found;
            for (double m = std::ceil((a - 0.5 * pi) / pi); 0.5 * pi + m * pi < b; m += 1.0) {
                double t = 0.5 * pi + m * pi;
                double th = -0.5 * pi + pi * (t - lo) / (hi - lo);
                auto z = ghyp_level_point(loop(th), t);
                if (!z || z->real() <= 1e-12) continue;
                bool dup = false;
                for (const auto& f : found) dup = dup || std::abs(f - *z) < 1e-9 * double(k);
                if (!dup) {
                    found.push_back(*z);
                    push(*z);
                }
            }
        }
    }
    return out;
}

} // namespace detail

inline meromorphic_model model_ghyp_solution() {
    meromorphic_model m;
    m.label = "ghyp";
    m.declared_order = 1.0;
    m.logz = [](cplx z) {
        double k = std::round(z.imag());
        if (k != 0.0 && std::abs(z - cplx(0.0, k)) < 1e-13) return cplx(detail::pinf, 0.0);
        cplx L = ghyp_exponent(z);
        return log_sum_exp(I * L, -I * L) - std::log(2.0);
    };
    m.poles = divisor_stream(
        [](double r) {
            std::vector<divisor> out;
            for (int k = 1; double(k) * k <= r; ++k) out.push_back({cplx(-double(k) * k, 0.0), k, divisor_kind::pole});
            return out;
        },
        0.5);
    m.zeros = divisor_stream(detail::ghyp_zeros, 1.0);
    return m;
}

// 2 cosh(pi sqrt x), the coefficient of the interpolation equation.
inline meromorphic_model model_cosh_coefficient(double scale = pi) {
    meromorphic_model m;
    m.label = "cosh_coeff";
    m.declared_order = 0.5;
    m.logz = [scale](cplx z) { return std::log(2.0) + detail::log_cosh(scale * z); };
    m.zeros = divisor_stream(
        [scale](double r) {
            std::vector<divisor> out;
            for (int k = 0;; ++k) {
                double t = (double(k) + 0.5) * pi / scale;
                if (t * t > r) break;
                out.push_back({cplx(-t * t, 0.0), 1, divisor_kind::zero});
            }
            return out;
        },
        0.5);
    return m;
}

// Rational function prod (x - z_k)^{m_k} / prod (x - p_k)^{m_k}.
inline meromorphic_model model_rational(std::vector<divisor> divs, cplx lead = 1.0) {
    auto data = normalize_divisors(std::move(divs));
    std::vector<divisor> zs, ps;
    for (const auto& d : data) (d.kind == divisor_kind::zero ? zs : ps).push_back(d);
    meromorphic_model m;
    m.label = "rational";
    m.declared_order = 0.0;
    m.zeros = divisor_stream::from_list(zs);
    m.poles = divisor_stream::from_list(ps);
    m.logz = [data, lead](cplx z) {
        cplx x = z * z;
        cplx v = std::log(lead);
        for (const auto& d : data) {
            cplx t = x - d.location;
            if (t == 0.0) return cplx(d.kind == divisor_kind::zero ? detail::ninf : detail::pinf, 0.0);
            v += double(d.kind == divisor_kind::zero ? d.multiplicity : -d.multiplicity) * std::log(t);
        }
        return v;
    };
    return m;
}

struct synthetic_divisor_data {
    std::vector<divisor> divisors;
};

inline meromorphic_model model_from_synthetic(const synthetic_divisor_data& data) {
    std::vector<divisor> zs, ps;
    for (const auto& d : data.divisors) (d.kind == divisor_kind::zero ? zs : ps).push_back(d);
    meromorphic_model m;
    m.label = "synthetic";
    m.declared_order = 0.0;
    m.zeros = divisor_stream::from_list(zs);
    m.poles = divisor_stream::from_list(ps);
    return m;
}

struct consistency_report {
    double winding = 0.0;
    int counted = 0;
    int declared = 0;
    std::size_t samples = 0;
    bool pass = false;
};

// Winding number of log f around a closed curve sampled at the given points.
template <class LF>
double winding_of_log(LF&& lf, const std::vector<cplx>& pts) {
    double total = 0.0;
    cplx prev = lf(pts.front());
    cplx first = prev;
    for (std::size_t j = 1; j <= pts.size(); ++j) {
        cplx cur = j < pts.size() ? lf(pts[j]) : first;
        double d = cur.imag() - prev.imag();
        d = std::remainder(d, 2.0 * pi);
        total += d;
        prev = cur;
    }
    return total / (2.0 * pi);
}

// Argument-principle count on |x - center| = radius against the declared divisors.
inline consistency_report consistency_check(const meromorphic_model& model, cplx center, double radius) {
    if (!model.has_evaluator())
        throw error(errc::evaluator_required, "funcmodel", "consistency_check needs an evaluator");
    consistency_report rep;
    double reach = std::abs(center) + radius * (1.0 + 1e-6) + 1e-6;
    for (const auto* s : {&model.zeros, &model.poles}) {
        for (const auto& d : s->enumerate(reach)) {
            double dist = std::abs(d.location - center);
            if (std::abs(dist - radius) < 1e-6)
                throw error(errc::contour, "funcmodel", "a declared divisor lies on the contour");
            if (dist < radius) rep.declared += (d.kind == divisor_kind::zero ? 1 : -1) * d.multiplicity;
        }
    }
    double last = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t n = 256; n <= (std::size_t(1) << 16); n *= 2) {
        std::vector<cplx> pts(n);
        for (std::size_t j = 0; j < n; ++j)
            pts[j] = center + radius * std::polar(1.0, 2.0 * pi * double(j) / double(n));
        double w = winding_of_log([&](cplx x) { return model.log_at(x); }, pts);
        rep.samples = n;
        rep.winding = w;
        if (std::abs(w - last) < 1e-6 && std::abs(w - std::round(w)) < 0.1) break;
        last = w;
    }
    rep.counted = int(std::lround(rep.winding));
    rep.pass = std::abs(rep.winding - rep.counted) < 0.1 && rep.counted == rep.declared;
    return rep;
}

// Catalog lookup by label, with optional parameters after a colon: "g_iii:2,1", "h_iv:0.25".
inline meromorphic_model catalog_model(const std::string& spec) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string::npos) {
        std::string rest = spec.substr(colon + 1);
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            auto comma = rest.find(',', pos);
            std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            try {
                std::size_t used = 0;
                args.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw error(errc::config, "funcmodel", "bad model parameter '" + tok + "' in '" + spec + "'");
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    auto arg = [&](std::size_t j, double fallback) { return j < args.size() ? args[j] : fallback; };
    if (name == "exp") return model_exp();
    if (name == "const") return model_constant(arg(0, 1.0));
    if (name == "product_i") return model_product_i(cplx(arg(0, 1.0), arg(1, 0.0)));
    if (name == "phi_ii") return model_phi_ii(cplx(arg(0, 1.0), arg(1, 0.0)));
    if (name == "g_iii") return model_g_iii(int(arg(0, 2)), int(arg(1, 1)));
    if (name == "h_iv") return model_h_iv(arg(0, 0.5));
    if (name == "ghyp") return model_ghyp_solution();
    if (name == "cosh_coeff") return model_cosh_coefficient(arg(0, pi));
    throw error(errc::config, "funcmodel", "unknown model label '" + name + "'");
}

} // namespace wnev
