#pragma once

#include <cstddef>
#include <vector>

namespace hindsight::qcore {

/// One replay entry. behavior_q is Q(s, a; theta_j) of the executed action,
/// recorded by the acting network when the action was taken.
struct Transition {
  std::vector<double> state;
  std::vector<double> next_state;
  std::size_t action = 0;
  double reward = 0.0;
  bool terminal = false;
  double behavior_q = 0.0;

  bool operator==(const Transition&) const = default;
};

}  // namespace hindsight::qcore
