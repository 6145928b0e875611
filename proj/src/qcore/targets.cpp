#include "hindsight/qcore/targets.hpp"

#include "hindsight/common/argmax.hpp"

namespace hindsight::qcore {

double dqn_target(const Transition& t, const approx::QNetwork& target, double gamma) {
  if (t.terminal) return t.reward;
  return t.reward + gamma * max_value(target.q_values(t.next_state));
}

double ddqn_target(const Transition& t, const approx::QNetwork& online,
                   const approx::QNetwork& target, double gamma) {
  if (t.terminal) return t.reward;
  const std::size_t selected = argmax(online.q_values(t.next_state));
  return t.reward + gamma * target.q_values(t.next_state)[selected];
}

}  // namespace hindsight::qcore
