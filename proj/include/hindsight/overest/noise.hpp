#pragma once

#include <cstddef>
#include <cstdint>

namespace hindsight::overest {

/// Action values corrupted by independent uniform noise in [-epsilon, epsilon].
struct NoiseModel {
  double epsilon = 1.0;
  std::size_t m = 10;  // action count
  double gamma = 1.0;

  void validate() const;
};

/// gamma * epsilon * (m - 1) / (m + 1).
double thrun_upper_bound(const NoiseModel& nm);

/// sqrt(C / (m - 1)); requires m >= 2, C > 0.
double lower_bound(double c, std::size_t m);

/// Monte Carlo mean of gamma * max of m uniform[-epsilon, epsilon] draws.
double noise_mc(const NoiseModel& nm, std::size_t trials, std::uint64_t seed);

}  // namespace hindsight::overest
