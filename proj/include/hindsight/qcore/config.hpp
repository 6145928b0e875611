#pragma once

#include <cstddef>
#include <cstdint>

namespace hindsight::qcore {

/// Linear decay from `start` to `end` over `decay_steps` frames, then flat.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  std::int64_t decay_steps = 10000;
};

struct HindsightConfig {
  double delta = 1.0;   // hindsight coefficient
  double gamma = 0.99;  // discount
  double alpha = 1e-3;  // step size
  std::int64_t target_sync_period = 500;
  EpsilonSchedule epsilon;
  std::size_t batch_size = 32;
  std::size_t buffer_capacity = 10000;
  /// Plain TD loss with step size alpha / (1 + delta) and no hindsight term.
  bool lr_half_mode = false;
  /// Admits delta in (-1, 0), which is expected to be unstable.
  bool allow_divergence_study = false;
  /// |Q| above this marks a training run as diverged.
  double q_ceiling = 1e6;

  /// Throws ContractViolation on out-of-range fields.
  void validate() const;
};

}  // namespace hindsight::qcore
