#include "hindsight/qcore/q_table.hpp"

#include "hindsight/common/argmax.hpp"
#include "hindsight/common/error.hpp"

namespace hindsight::qcore {

QTable::QTable(std::size_t n_states, std::size_t n_actions, double init)
    : n_states_(n_states), n_actions_(n_actions), values_(n_states * n_actions, init) {
  require(n_states > 0 && n_actions > 0, "QTable dimensions must be positive");
}

double QTable::max_value(std::size_t s) const { return hindsight::max_value(row(s)); }

std::size_t QTable::greedy_action(std::size_t s) const { return argmax(row(s)); }

std::vector<std::size_t> QTable::greedy_policy() const {
  std::vector<std::size_t> policy(n_states_);
  for (std::size_t s = 0; s < n_states_; ++s) policy[s] = greedy_action(s);
  return policy;
}

}  // namespace hindsight::qcore
