#pragma once

#include <string>
#include <vector>

namespace ptw::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriteria = 8;

/// Runs one criterion (1..8). Exceptions from the library are caught and
/// reported as a failure with the message in `detail`.
CriterionResult run_criterion(int id);

/// "criterion N PASS|FAIL  name  (t s)  detail"
std::string format_line(const CriterionResult& r);

}  // namespace ptw::acceptance
