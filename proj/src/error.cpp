#include "peerimex/error.hpp"

namespace peerimex {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_nodes: return "invalid-nodes";
        case ErrorCode::degenerate_stencil: return "degenerate-stencil";
        case ErrorCode::inconsistent_p: return "inconsistent-P";
        case ErrorCode::invalid_r: return "invalid-R";
        case ErrorCode::invalid_s2: return "invalid-S2";
        case ErrorCode::unsupported_order: return "unsupported-order";
        case ErrorCode::unknown_method: return "unknown-method";
        case ErrorCode::malformed_file: return "malformed-file";
        case ErrorCode::validation: return "validation";
        case ErrorCode::singular_at_point: return "singular-at-point";
        case ErrorCode::no_boundary_on_ray: return "no-boundary-on-ray";
        case ErrorCode::starter_failure: return "starter-failure";
        case ErrorCode::step_failure: return "step-failure";
        case ErrorCode::newton_nonconvergence: return "newton-nonconvergence";
        case ErrorCode::grid_too_small: return "grid-too-small";
        case ErrorCode::boundary_underspecified: return "boundary-underspecified";
        case ErrorCode::invalid_argument: return "invalid-argument";
    }
    return "unknown";
}

}  // namespace peerimex
