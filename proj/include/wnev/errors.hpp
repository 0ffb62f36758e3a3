#pragma once

#include <stdexcept>
#include <string>

namespace wnev {

enum class errc {
    pole,
    parameter,
    divergence,
    strip,
    evaluator_required,
    missing_divisor,
    singular,
    identity,
    degenerate_grid,
    non_differentiable,
    contour,
    config
};

inline const char* errc_name(errc e) {
    switch (e) {
    case errc::pole: return "pole";
    case errc::parameter: return "parameter";
    case errc::divergence: return "divergence";
    case errc::strip: return "strip-violation";
    case errc::evaluator_required: return "evaluator-required";
    case errc::missing_divisor: return "missing-divisor";
    case errc::singular: return "singular-point";
    case errc::identity: return "identity-violation";
    case errc::degenerate_grid: return "degenerate-grid";
    case errc::non_differentiable: return "non-differentiable";
    case errc::contour: return "contour-through-divisor";
    case errc::config: return "config";
    }
    return "unknown";
}

// Every failure carries the module that raised it so front-ends can report it on one line.
class error : public std::runtime_error {
public:
    error(errc code, std::string module, const std::string& what)
        : std::runtime_error(module + ": " + errc_name(code) + ": " + what),
          code_(code), module_(std::move(module)) {}

    errc code() const noexcept { return code_; }
    const std::string& module() const noexcept { return module_; }

private:
    errc code_;
    std::string module_;
};

} // namespace wnev
