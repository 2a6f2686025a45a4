#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mlrelax::verify {

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the cross-route agreement suite (the same checks the CLI `verify`
/// subcommand and the acceptance test binary report).
std::vector<CriterionResult> run_acceptance();

/// One line per criterion on `out`; returns true when every criterion passed.
bool print_acceptance(std::ostream& out);

}  // namespace mlrelax::verify
