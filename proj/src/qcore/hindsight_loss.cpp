#include "hindsight/qcore/hindsight_loss.hpp"

#include "hindsight/common/error.hpp"

namespace hindsight::qcore {

double smoothed_reward(double y_hat, double y_bar, double delta) {
  require(delta > -1.0, "smoothed_reward: delta must be greater than -1");
  return (y_hat + delta * y_bar) / (1.0 + delta);
}

double hindsight_loss(double q, double y_hat, double y_bar, double delta) {
  const double forward = y_hat - q;
  const double backward = y_bar - q;
  return forward * forward + delta * backward * backward;
}

double hindsight_loss_grad_q(double q, double y_hat, double y_bar, double delta) {
  return -2.0 * (y_hat - q) - 2.0 * delta * (y_bar - q);
}

}  // namespace hindsight::qcore
