#pragma once

#include <ostream>
#include <span>
#include <string>

namespace bql::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitPhysics = 3;

/// Runs one CLI invocation. `args` excludes the program name. Reports go to
/// `out` unless --out is given; diagnostics go to `err` as a single line.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace bql::cli
