#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace armsim {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// The full invariant suite: dynamics identities, oracle comparisons,
// integrator order, kinematics round trips and pipeline determinism. Every
// check is deterministic (fixed seeds) and self-contained.
std::vector<CheckResult> run_acceptance_checks();

// Runs the suite, printing one PASS/FAIL line per check plus a summary.
// Returns true iff everything passed.
bool run_checks(std::ostream& out);

}  // namespace armsim
