#pragma once

#include <stdexcept>
#include <string>

namespace peerimex {

enum class ErrorCode {
    invalid_nodes,
    degenerate_stencil,
    inconsistent_p,
    invalid_r,
    invalid_s2,
    unsupported_order,
    unknown_method,
    malformed_file,
    validation,
    singular_at_point,
    no_boundary_on_ray,
    starter_failure,
    step_failure,
    newton_nonconvergence,
    grid_too_small,
    boundary_underspecified,
    invalid_argument,
};

/// Errors in the validation family map to CLI exit code 1, the rest to 2.
[[nodiscard]] constexpr bool is_validation_error(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::singular_at_point:
        case ErrorCode::no_boundary_on_ray:
        case ErrorCode::starter_failure:
        case ErrorCode::step_failure:
        case ErrorCode::newton_nonconvergence:
            return false;
        default:
            return true;
    }
}

[[nodiscard]] const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace peerimex
