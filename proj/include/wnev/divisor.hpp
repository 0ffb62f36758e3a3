#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

namespace wnev {

using cplx = std::complex<double>;

enum class divisor_kind { zero, pole };

struct divisor {
    cplx location;
    int multiplicity = 1;
    divisor_kind kind = divisor_kind::zero;
};

// Points closer than this (relative) are the same point.
inline constexpr double divisor_merge_tol = 1e-9;

inline bool same_point(cplx a, cplx b) {
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= divisor_merge_tol * scale;
}

// Sort by modulus and merge coincident points of the same kind.
inline std::vector<divisor> normalize_divisors(std::vector<divisor> v) {
    std::stable_sort(v.begin(), v.end(), [](const divisor& a, const divisor& b) {
        return std::abs(a.location) < std::abs(b.location);
    });
    std::vector<divisor> out;
    out.reserve(v.size());
    for (const auto& d : v) {
        bool merged = false;
        for (auto it = out.rbegin(); it != out.rend(); ++it) {
            double gap = std::abs(d.location) - std::abs(it->location);
            if (gap > divisor_merge_tol * std::max(1.0, std::abs(d.location))) break;
            if (it->kind == d.kind && same_point(it->location, d.location)) {
                it->multiplicity += d.multiplicity;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(d);
    }
    return out;
}

// Lazily enumerable zero or pole set, ordered by modulus.
class divisor_stream {
public:
    using enumerator_fn = std::function<std::vector<divisor>(double)>;

    divisor_stream() = default;

    divisor_stream(enumerator_fn fn, double exponent)
        : fn_(std::move(fn)), exponent_(exponent) {}

    static divisor_stream from_list(std::vector<divisor> list, double exponent = 0.0) {
        auto data = std::make_shared<const std::vector<divisor>>(normalize_divisors(std::move(list)));
        divisor_stream s(
            [data](double r) {
                std::vector<divisor> out;
                for (const auto& d : *data) {
                    if (std::abs(d.location) > r) break;
                    out.push_back(d);
                }
                return out;
            },
            exponent);
        s.finite_ = true;
        s.size_ = data->size();
        return s;
    }

    std::vector<divisor> enumerate(double r) const {
        if (!fn_) return {};
        return normalize_divisors(fn_(r));
    }

    bool empty_stream() const { return !fn_ || (finite_ && size_ == 0); }
    bool finite() const { return finite_ || !fn_; }
    std::size_t finite_size() const { return size_; }
    double convergence_exponent() const { return exponent_; }

private:
    enumerator_fn fn_;
    double exponent_ = 0.0;
    bool finite_ = false;
    std::size_t size_ = 0;
};

} // namespace wnev
