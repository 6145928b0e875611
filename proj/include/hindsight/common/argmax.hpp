#pragma once

#include <cstddef>
#include <span>

#include "hindsight/common/error.hpp"

namespace hindsight {

/// Index of the largest value; ties go to the lowest index.
inline std::size_t argmax(std::span<const double> values) {
  require(!values.empty(), "argmax of empty sequence");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

inline double max_value(std::span<const double> values) {
  return values[argmax(values)];
}

}  // namespace hindsight
