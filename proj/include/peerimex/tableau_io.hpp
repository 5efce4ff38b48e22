#pragma once

#include "peerimex/tableau.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace peerimex {

/// Names accepted by builtin().
[[nodiscard]] const std::vector<std::string>& builtin_names();

/// imex-bdf2, imex-bdf3, imex-bdf4, imex-peer2 or imex-euler.
[[nodiscard]] ImexTableau builtin(const std::string& name);

/// Parses the JSON tableau format (`name`, `s`, `c`, `P`, `R`, `S2`, optional
/// `order` and `source`). Derived matrices are recomputed, never read.
[[nodiscard]] ImexTableau parse_tableau(const std::string& json_text);
[[nodiscard]] ImexTableau load_tableau(const std::filesystem::path& path);

[[nodiscard]] std::string serialize_tableau(const ImexTableau& t);
/// Atomic write (temporary file + rename).
void save_tableau(const ImexTableau& t, const std::filesystem::path& path);

/// Writes `contents` to `path` through a sibling temporary and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace peerimex
