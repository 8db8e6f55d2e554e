#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace emt::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Runs one command line (args[0] is the program name). Results go to
/// `out`, machine-readable errors to `err`. Returns the exit code:
/// 0 success, 1 verification threshold exceeded, 2 input or usage error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace emt::cli
