#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hindsight/common/random.hpp"
#include "hindsight/qcore/q_table.hpp"

namespace hindsight::envs {

struct Outcome {
  std::size_t next_state;
  double probability;
};

/// Finite MDP with exact tables. Terminal states are absorbing and carry
/// zero value; episodes start in `start_state`.
struct TabularMDP {
  std::size_t n_states = 0;
  std::size_t n_actions = 0;
  std::vector<std::vector<Outcome>> transition;  // indexed s * n_actions + a
  std::vector<double> reward;                    // indexed s * n_actions + a
  std::vector<bool> terminal;
  double gamma = 0.9;
  std::size_t start_state = 0;

  const std::vector<Outcome>& outcomes(std::size_t s, std::size_t a) const {
    return transition[s * n_actions + a];
  }
  double reward_of(std::size_t s, std::size_t a) const { return reward[s * n_actions + a]; }

  /// Throws ContractViolation if a distribution does not sum to one within
  /// 1e-12, a reward is non-finite, or an index is out of range.
  void validate() const;
};

struct StepResult {
  std::size_t next_state;
  double reward;
  bool terminal;
};

/// Pure step: one uniform draw from `rng` selects the successor.
StepResult step(const TabularMDP& mdp, std::size_t state, std::size_t action, Rng& rng);

/// One-hot state encoding used as network input.
std::vector<double> one_hot(const TabularMDP& mdp, std::size_t state);

/// Left/right chain of n states. Action 0 moves left (staying put at 0),
/// action 1 moves right; reaching state n-1 ends the episode with reward 1.
TabularMDP chain_mdp(std::size_t n, double gamma);

/// 4x4 deterministic grid with the goal in the bottom-right corner.
/// Actions: 0 up, 1 right, 2 down, 3 left; bumping a wall stays in place.
TabularMDP gridworld_mdp(double gamma);

/// Random MDP with dense stochastic transitions, rewards in [-1, 1] and
/// (optionally) one terminal state. Used by oracle tests.
TabularMDP random_mdp(std::size_t n_states, std::size_t n_actions, double gamma,
                      std::uint64_t seed);

/// Q*(s, a) by value iteration. Returned table has sup-norm Bellman residual
/// at most `tolerance`. Throws ConvergenceError past `max_iterations` sweeps.
qcore::QTable value_iteration(const TabularMDP& mdp, double tolerance = 1e-10,
                              std::size_t max_iterations = 1'000'000);

/// sup over (s, a) of |(T Q)(s, a) - Q(s, a)|.
double bellman_residual(const TabularMDP& mdp, const qcore::QTable& q);

}  // namespace hindsight::envs
