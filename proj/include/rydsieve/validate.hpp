#pragma once

#include <string>
#include <vector>

#include "rydsieve/config.hpp"

namespace rydsieve {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationOptions {
  // Relative distortion injected into one collective coupling before the
  // basis-equivalence comparison.  Nonzero values must make that check
  // fail; the test suite uses this to prove the check can detect defects.
  double perturbation = 0.0;
  int trend_n_max = 16;
};

// Internal-consistency checklist for a resolved configuration:
// small-system equivalence of the symmetric basis against the brute-force
// product space, rotating-frame vs interaction-picture propagation,
// closed-form shift expansions, loss-rate trend against the rate-equation
// estimate, and sanity of the derived operating point.
std::vector<CheckResult> run_validation(const ConfigFile& cfg,
                                        const ValidationOptions& opts = {});

bool all_passed(const std::vector<CheckResult>& results);

// Spearman rank correlation; used by the trend check and the test suite.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}
