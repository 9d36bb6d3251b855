#pragma once

#include "wrelm/dataset.hpp"

#include <cstdint>
#include <vector>

namespace wrelm {

// Near-chaotic synthetic stream: a logistic map x' = mu x (1 - x) whose
// parameter mu is held for a random dwell period and re-drawn uniformly at
// each set-point step. Features are (state, mu, distractors...); the target
// is the next state plus observation noise.
struct GenConfig {
  std::uint64_t seed = 1;
  Index n_steps = 0;
  double mu_min = 2.8;
  double mu_max = 3.9;
  Index dwell_min = 10;   // steps per set point
  Index dwell_max = 200;
  double noise_sigma = 0.0;    // observation noise on the recorded target
  Index n_distractors = 0;     // uniform [0,1) columns carrying no signal
  // Optional state-noise mode: perturbs the trajectory itself after each
  // step (clamped to (0,1)), widening the visited state range. Off by
  // default; observation noise alone never feeds back.
  double state_sigma = 0.0;
};

// z = 2 + n_distractors. Draw order per stream, pinned for reproducibility:
// (mu, dwell) at start and at each set-point change; per step, the
// distractor uniforms, then the observation-noise gaussian (if enabled),
// then the state-noise gaussian (if enabled). Initial state is 0.5.
SeriesDataset generate(const GenConfig& cfg);

// Post-transient state samples per mu value: iterate from 0.5, skip
// transient_skip steps, record n_samples. mu values must lie in (0, 4].
std::vector<std::vector<double>> bifurcation_scan(const std::vector<double>& mu_grid,
                                                  Index transient_skip, Index n_samples);

}  // namespace wrelm
