#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace peerimex::cli {

/// Runs one command line (without the program name). Returns 0 on success,
/// 1 on invalid input or a failed check, 2 on a numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace peerimex::cli
