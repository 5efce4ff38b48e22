#pragma once

#include <string>

namespace peerimex {

/// Fixed 17-significant-digit rendering used by every CSV writer.
[[nodiscard]] std::string format_double(double v);

}  // namespace peerimex
