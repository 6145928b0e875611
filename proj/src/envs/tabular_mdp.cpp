#include "hindsight/envs/tabular_mdp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hindsight/common/error.hpp"

namespace hindsight::envs {

void TabularMDP::validate() const {
  require(n_states > 0 && n_actions > 0, "TabularMDP: empty state or action set");
  require(transition.size() == n_states * n_actions && reward.size() == n_states * n_actions &&
              terminal.size() == n_states,
          "TabularMDP: table sizes do not match n_states x n_actions");
  require(gamma >= 0.0 && gamma <= 1.0, "TabularMDP: gamma must lie in [0, 1]");
  require(start_state < n_states, "TabularMDP: start state out of range");
  for (std::size_t i = 0; i < transition.size(); ++i) {
    require(std::isfinite(reward[i]), "TabularMDP: non-finite reward");
    double total = 0.0;
    for (const auto& o : transition[i]) {
      require(o.next_state < n_states && o.probability >= 0.0,
              "TabularMDP: invalid outcome in entry " + std::to_string(i));
      total += o.probability;
    }
    require(std::abs(total - 1.0) <= 1e-12,
            "TabularMDP: distribution " + std::to_string(i) + " does not sum to 1");
  }
}

StepResult step(const TabularMDP& mdp, std::size_t state, std::size_t action, Rng& rng) {
  require(state < mdp.n_states && action < mdp.n_actions, "step: index out of range");
  const auto& outcomes = mdp.outcomes(state, action);
  const double u = uniform01(rng);
  double cumulative = 0.0;
  std::size_t next = outcomes.back().next_state;
  for (const auto& o : outcomes) {
    cumulative += o.probability;
    if (u < cumulative) {
      next = o.next_state;
      break;
    }
  }
  return {next, mdp.reward_of(state, action), static_cast<bool>(mdp.terminal[next])};
}

std::vector<double> one_hot(const TabularMDP& mdp, std::size_t state) {
  require(state < mdp.n_states, "one_hot: state out of range");
  std::vector<double> x(mdp.n_states, 0.0);
  x[state] = 1.0;
  return x;
}

namespace {

TabularMDP empty_mdp(std::size_t n_states, std::size_t n_actions, double gamma) {
  TabularMDP mdp;
  mdp.n_states = n_states;
  mdp.n_actions = n_actions;
  mdp.transition.resize(n_states * n_actions);
  mdp.reward.assign(n_states * n_actions, 0.0);
  mdp.terminal.assign(n_states, false);
  mdp.gamma = gamma;
  return mdp;
}

void set_deterministic(TabularMDP& mdp, std::size_t s, std::size_t a, std::size_t next,
                       double reward) {
  mdp.transition[s * mdp.n_actions + a] = {{next, 1.0}};
  mdp.reward[s * mdp.n_actions + a] = reward;
}

}  // namespace

TabularMDP chain_mdp(std::size_t n, double gamma) {
  require(n >= 2, "chain_mdp: need at least two states");
  auto mdp = empty_mdp(n, 2, gamma);
  const std::size_t goal = n - 1;
  mdp.terminal[goal] = true;
  for (std::size_t s = 0; s < n; ++s) {
    if (s == goal) {
      set_deterministic(mdp, s, 0, s, 0.0);
      set_deterministic(mdp, s, 1, s, 0.0);
      continue;
    }
    set_deterministic(mdp, s, 0, s == 0 ? 0 : s - 1, 0.0);
    set_deterministic(mdp, s, 1, s + 1, s + 1 == goal ? 1.0 : 0.0);
  }
  mdp.validate();
  return mdp;
}

TabularMDP gridworld_mdp(double gamma) {
  constexpr std::size_t side = 4;
  auto mdp = empty_mdp(side * side, 4, gamma);
  const std::size_t goal = side * side - 1;
  mdp.terminal[goal] = true;
  for (std::size_t s = 0; s < side * side; ++s) {
    const std::size_t row = s / side;
    const std::size_t col = s % side;
    const std::size_t moves[4] = {
        row > 0 ? s - side : s,
        col + 1 < side ? s + 1 : s,
        row + 1 < side ? s + side : s,
        col > 0 ? s - 1 : s,
    };
    for (std::size_t a = 0; a < 4; ++a) {
      const std::size_t next = s == goal ? s : moves[a];
      set_deterministic(mdp, s, a, next, s != goal && next == goal ? 1.0 : 0.0);
    }
  }
  mdp.validate();
  return mdp;
}

TabularMDP random_mdp(std::size_t n_states, std::size_t n_actions, double gamma,
                      std::uint64_t seed) {
  Rng rng(seed);
  auto mdp = empty_mdp(n_states, n_actions, gamma);
  if (n_states > 1 && uniform01(rng) < 0.5) mdp.terminal[n_states - 1] = true;
  for (std::size_t i = 0; i < n_states * n_actions; ++i) {
    std::vector<double> weights(n_states);
    double total = 0.0;
    for (auto& w : weights) {
      w = uniform01(rng) < 0.5 ? uniform01(rng) : 0.0;
      total += w;
    }
    if (total == 0.0) {
      weights[uniform_index(rng, n_states)] = 1.0;
      total = 1.0;
    }
    auto& outcomes = mdp.transition[i];
    double assigned = 0.0;
    std::size_t last = 0;
    for (std::size_t s = 0; s < n_states; ++s) {
      if (weights[s] == 0.0) continue;
      outcomes.push_back({s, weights[s] / total});
      assigned += weights[s] / total;
      last = outcomes.size() - 1;
    }
    // absorb rounding into the last outcome so the row sums to one
    outcomes[last].probability += 1.0 - assigned;
    mdp.reward[i] = uniform_real(rng, -1.0, 1.0);
  }
  mdp.validate();
  return mdp;
}

namespace {

double backup(const TabularMDP& mdp, const qcore::QTable& q, std::size_t s, std::size_t a) {
  if (mdp.terminal[s]) return 0.0;
  double future = 0.0;
  for (const auto& o : mdp.outcomes(s, a)) {
    if (!mdp.terminal[o.next_state]) future += o.probability * q.max_value(o.next_state);
  }
  return mdp.reward_of(s, a) + mdp.gamma * future;
}

}  // namespace

double bellman_residual(const TabularMDP& mdp, const qcore::QTable& q) {
  double residual = 0.0;
  for (std::size_t s = 0; s < mdp.n_states; ++s) {
    for (std::size_t a = 0; a < mdp.n_actions; ++a) {
      residual = std::max(residual, std::abs(backup(mdp, q, s, a) - q(s, a)));
    }
  }
  return residual;
}

qcore::QTable value_iteration(const TabularMDP& mdp, double tolerance,
                              std::size_t max_iterations) {
  mdp.validate();
  require(mdp.gamma < 1.0, "value_iteration: gamma must be below 1");
  require(tolerance > 0.0, "value_iteration: tolerance must be positive");
  qcore::QTable q(mdp.n_states, mdp.n_actions);
  qcore::QTable next = q;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    double change = 0.0;
    for (std::size_t s = 0; s < mdp.n_states; ++s) {
      for (std::size_t a = 0; a < mdp.n_actions; ++a) {
        next(s, a) = backup(mdp, q, s, a);
        change = std::max(change, std::abs(next(s, a) - q(s, a)));
      }
    }
    std::swap(q, next);
    // residual of the returned table is at most gamma * change
    if (change <= tolerance) return q;
  }
  throw ConvergenceError("value_iteration: no convergence after " +
                         std::to_string(max_iterations) + " sweeps");
}

}  // namespace hindsight::envs
