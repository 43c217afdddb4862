#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace roadgen::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

/// Runs one command line (without the program name). On success only file
/// paths reach `out`, one per line; diagnostics go to `err`. Returns 0 on
/// success, 1 for usage errors, 2 for runtime failures.
int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err,
             const EnvLookup& env = process_env());

}  // namespace roadgen::cli
