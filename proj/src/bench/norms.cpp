#include "peerimex/bench/norms.hpp"

#include "peerimex/error.hpp"

#include <cmath>

namespace peerimex::bench {

double grid_norm(const Vector& v, NormKind which, double h) {
    switch (which) {
        case NormKind::l2_vector: return v.norm();
        case NormKind::l1_discrete:
            if (!(h > 0.0)) throw Error(ErrorCode::invalid_argument, "discrete norms need h > 0");
            return h * v.cwiseAbs().sum();
        case NormKind::l2_discrete:
            if (!(h > 0.0)) throw Error(ErrorCode::invalid_argument, "discrete norms need h > 0");
            return std::sqrt(h * v.squaredNorm());
    }
    return 0.0;
}

const char* to_string(NormKind n) noexcept {
    switch (n) {
        case NormKind::l2_vector: return "l2-vector";
        case NormKind::l1_discrete: return "l1-discrete";
        case NormKind::l2_discrete: return "l2-discrete";
    }
    return "unknown";
}

}  // namespace peerimex::bench
