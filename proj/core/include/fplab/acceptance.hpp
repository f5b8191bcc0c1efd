#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fplab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the full verification suite (lemma reproductions, spanning certificate,
/// remainder-bound soundness, end-to-end approximation, operator invariants)
/// and prints one pass/fail line per criterion to `out`.
std::vector<CriterionResult> run_acceptance(std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace fplab
