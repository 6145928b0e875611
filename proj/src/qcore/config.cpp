#include "hindsight/qcore/config.hpp"

#include <cmath>

#include "hindsight/common/error.hpp"

namespace hindsight::qcore {

void HindsightConfig::validate() const {
  require(std::isfinite(delta) && delta > -1.0, "delta must be greater than -1");
  require(delta >= 0.0 || allow_divergence_study,
          "negative delta requires the divergence-study flag");
  require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  require(std::isfinite(alpha) && alpha >= 0.0, "alpha must be non-negative");
  require(target_sync_period > 0, "target_sync_period must be positive");
  require(epsilon.start >= 0.0 && epsilon.start <= 1.0 && epsilon.end >= 0.0 && epsilon.end <= 1.0,
          "epsilon schedule endpoints must lie in [0, 1]");
  require(epsilon.decay_steps >= 0, "epsilon decay_steps must be non-negative");
  require(batch_size > 0, "batch_size must be positive");
  require(buffer_capacity >= batch_size, "buffer_capacity must be at least batch_size");
  require(q_ceiling > 0.0, "q_ceiling must be positive");
}

}  // namespace hindsight::qcore
