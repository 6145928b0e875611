#pragma once

#include <cstddef>
#include <span>

#include "hindsight/approx/q_network.hpp"
#include "hindsight/qcore/config.hpp"
#include "hindsight/qcore/q_table.hpp"
#include "hindsight/qcore/transition.hpp"

namespace hindsight::qcore {

/// Which regression target drives the update.
enum class LossMode {
  plain,      // y_hat, step alpha
  hindsight,  // r_new = smoothed_reward(y_hat, behavior_q, delta), step alpha
  scaled_lr,  // y_hat, step alpha / (1 + delta)
};

LossMode loss_mode(bool hindsight, const HindsightConfig& config);

/// Single-transition semi-gradient step
///   theta += alpha * (target - Q(s, a; theta)) * grad_theta Q(s, a; theta).
/// Throws NumericalError if the target, Q or the gradient is not finite.
void sgd_update(approx::QNetwork& network, const Transition& t, double y_hat,
                const HindsightConfig& config, LossMode mode = LossMode::hindsight);

struct BatchUpdateStats {
  double mean_q = 0.0;     // mean Q(s_j, a_j; theta_i) before the step
  double max_abs_q = 0.0;  // over the same values
};

/// The per-sample step above averaged over a minibatch (y_hats[j] belongs to
/// batch[j]).
BatchUpdateStats minibatch_update(approx::QNetwork& network, std::span<const Transition> batch,
                                  std::span<const double> y_hats, const HindsightConfig& config,
                                  LossMode mode);

/// Tabular form with a stored behavior value Q_j(s, a):
///   Q(s,a) <- (1 - alpha) Q(s,a) + alpha/(1+delta) (r + gamma max_b Q(s',b) + delta Q_j(s,a)).
/// With delta = 0 this is the classical Watkins update.
void tabular_update(QTable& table, std::size_t s, std::size_t a, std::size_t s_next, double r,
                    double behavior_q, const HindsightConfig& config);

/// Classical Watkins update, kept separately so the delta = 0 reduction can
/// be checked against it.
void watkins_update(QTable& table, std::size_t s, std::size_t a, std::size_t s_next, double r,
                    double alpha, double gamma);

}  // namespace hindsight::qcore
