#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zfk {

enum class ErrorCode {
    domain,
    singular_limit,
    node_condition,
    overflow_guard,
    radicand_negative,
    denominator_zero,
    quadrature_nonconvergence,
    step_underflow,
    max_steps_exceeded,
    non_finite_state,
    corridor_escape,
    no_bracket,
    root_stagnation,
    no_connection,
    stability_violation,
    configuration,
};

/// Short machine-readable token for an error code (used in CSV error columns).
constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::singular_limit: return "singular_limit";
    case ErrorCode::node_condition: return "node_condition";
    case ErrorCode::overflow_guard: return "overflow_guard";
    case ErrorCode::radicand_negative: return "radicand_negative";
    case ErrorCode::denominator_zero: return "denominator_zero";
    case ErrorCode::quadrature_nonconvergence: return "quadrature_nonconvergence";
    case ErrorCode::step_underflow: return "step_underflow";
    case ErrorCode::max_steps_exceeded: return "max_steps_exceeded";
    case ErrorCode::non_finite_state: return "non_finite_state";
    case ErrorCode::corridor_escape: return "corridor_escape";
    case ErrorCode::no_bracket: return "no_bracket";
    case ErrorCode::root_stagnation: return "root_stagnation";
    case ErrorCode::no_connection: return "no_connection";
    case ErrorCode::stability_violation: return "stability_violation";
    case ErrorCode::configuration: return "configuration";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace zfk
