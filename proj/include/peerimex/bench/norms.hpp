#pragma once

#include "peerimex/linalg.hpp"

#include <string>

namespace peerimex::bench {

enum class NormKind {
    l2_vector,    ///< sqrt(sum v_i^2)
    l1_discrete,  ///< h sum |v_i|
    l2_discrete,  ///< sqrt(h sum v_i^2)
};

[[nodiscard]] double grid_norm(const Vector& v, NormKind which, double h = 1.0);
[[nodiscard]] const char* to_string(NormKind n) noexcept;

}  // namespace peerimex::bench
