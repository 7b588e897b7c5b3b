// Acceptance criteria 1..8: one PASS/FAIL line each. Exit status is nonzero
// if any selected criterion fails.

#include <iostream>

#include <CLI11.hpp>

#include "acceptance_suite.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1..8)")
      ->check(CLI::Range(1, ptw::acceptance::kCriteria));
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (int id = 1; id <= ptw::acceptance::kCriteria; ++id) {
    if (only != 0 && id != only) continue;
    const auto r = ptw::acceptance::run_criterion(id);
    std::cout << ptw::acceptance::format_line(r) << std::endl;
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
