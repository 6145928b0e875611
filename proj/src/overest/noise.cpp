#include "hindsight/overest/noise.hpp"

#include <algorithm>
#include <cmath>

#include "hindsight/common/error.hpp"
#include "hindsight/common/random.hpp"

namespace hindsight::overest {

void NoiseModel::validate() const {
  require(std::isfinite(epsilon) && epsilon >= 0.0, "NoiseModel: epsilon must be non-negative");
  require(m >= 1, "NoiseModel: need at least one action");
  require(gamma >= 0.0 && gamma <= 1.0, "NoiseModel: gamma must lie in [0, 1]");
}

double thrun_upper_bound(const NoiseModel& nm) {
  nm.validate();
  const double m = static_cast<double>(nm.m);
  return nm.gamma * nm.epsilon * (m - 1.0) / (m + 1.0);
}

double lower_bound(double c, std::size_t m) {
  require(m >= 2, "lower_bound: need at least two actions");
  require(c > 0.0, "lower_bound: C must be positive");
  return std::sqrt(c / static_cast<double>(m - 1));
}

double noise_mc(const NoiseModel& nm, std::size_t trials, std::uint64_t seed) {
  nm.validate();
  require(trials >= 1, "noise_mc: need at least one trial");
  Rng rng(seed);
  double total = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    double best = uniform_real(rng, -nm.epsilon, nm.epsilon);
    for (std::size_t k = 1; k < nm.m; ++k) best = std::max(best, uniform_real(rng, -nm.epsilon, nm.epsilon));
    total += best;
  }
  return nm.gamma * total / static_cast<double>(trials);
}

}  // namespace hindsight::overest
