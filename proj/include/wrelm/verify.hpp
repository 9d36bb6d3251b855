#pragma once

#include "wrelm/types.hpp"

#include <cstdint>

namespace wrelm {

// Randomized equivalence battery: trains on random instances and checks
// both the batch solution and the ring-adapted solution against the
// brute-force stacked weighted least squares oracle.
struct VerifyOptions {
  Index instances = 100;
  std::uint64_t seed = 2024;
  double tolerance = 1e-8;  // relative infinity-norm
  // Instances whose offline Gram matrix has a condition number above this
  // are redrawn: near the working precision the two solution routes are
  // legitimately allowed to differ, so such draws certify nothing.
  double condition_limit = 1e7;
  // Testing the tester: perturb the adapted solution by 1e-6 so the
  // battery must report a failure.
  bool inject_fault = false;
};

struct VerifyOutcome {
  Index instances_run = 0;
  Index resamples = 0;  // condition-limit redraws
  double worst_trainer_rel = 0.0;
  double worst_adapter_rel = 0.0;
  bool pass = false;
};

VerifyOutcome run_oracle_battery(const VerifyOptions& opts);

}  // namespace wrelm
