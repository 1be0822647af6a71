#pragma once

#include <string>
#include <vector>

#include "wshift/config.hpp"

namespace wshift {

struct CheckResult {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  std::string render() const;       // human-readable, one line per check
  std::string failures_json() const;  // machine-readable failure list
};

struct VerifyOptions {
  int threads = 1;
  // Test fixture: added to every theory value before comparison so a
  // deliberately corrupted oracle is reported as a named failure.
  double corrupt_theory_offset = 0.0;
};

// Empirical-vs-theory suite: for every (eps, shift class) of the config, the
// minimax risk over the class catalog must match the exact theory value
// within 3 SE, or land between the lower and upper bounds with 3-SE slack.
VerifyReport run_verify(const ExperimentConfig& config,
                        const VerifyOptions& options = {});

// Pure-formula identity suite (no sampling): piecewise continuity at regime
// transitions, the CDS <= IDS <= JDS ordering, budget identities, and the
// Bayes posterior limits.
VerifyReport run_identity_suite();

}  // namespace wshift
