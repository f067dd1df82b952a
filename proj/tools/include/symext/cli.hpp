#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "symext/group.hpp"

namespace symext::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line; `args` excludes the program name. Results are
/// written as JSON to `out` (or to --output), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads a finite subset given as a JSON array ("[[0,0],[1,0]]") or in brace
/// shorthand ("{0..7}", "{(0,0),(1,0)}"). Errors carry the column.
FiniteSubset parse_subset(std::string_view text, GroupKind kind);

}  // namespace symext::cli
