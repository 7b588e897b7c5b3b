#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ptw::cli {

/// Exit codes: 0 success, 1 usage or domain error, 2 a checked claim failed.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitClaim = 2;

/// `args` excludes the program name. Results go to `out` unless --out is
/// given; diagnostics always go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Human-readable admissible parameter ranges of one model (or all models for
/// an empty name), printed after usage errors.
std::string admissible_ranges(const std::string& model);

}  // namespace ptw::cli
