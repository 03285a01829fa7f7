#pragma once

#include <string>
#include <vector>

namespace kamsim {

// Outcome of one named self-check.  margin is how far the check cleared its
// threshold (positive = pass with room); detail is a short human-readable
// account of the measured quantities.
struct CheckResult {
  std::string name;
  bool pass = false;
  double margin = 0.0;
  std::string detail;
};

// The oracle and invariant suite behind `kamsim validate`: closed-form
// agreement, monotonicity sweeps, quadrature cross-checks, time-rescaling
// KS tests, frontier brute force, cost identities, and CSV round-trip
// consistency.  Fixed seeds; deterministic.
std::vector<CheckResult> run_validation_checks();

}  // namespace kamsim
