#pragma once

#include "hindsight/approx/q_network.hpp"
#include "hindsight/qcore/transition.hpp"

namespace hindsight::qcore {

/// r if terminal, else r + gamma * max_a' Q_target(s', a').
double dqn_target(const Transition& t, const approx::QNetwork& target, double gamma);

/// r if terminal, else r + gamma * Q_target(s', argmax_a' Q_online(s', a')).
double ddqn_target(const Transition& t, const approx::QNetwork& online,
                   const approx::QNetwork& target, double gamma);

}  // namespace hindsight::qcore
