#pragma once

namespace hindsight::qcore {

/// (y_hat + delta * y_bar) / (1 + delta): the bootstrapped target blended
/// with the behavior-time value. Requires delta > -1.
double smoothed_reward(double y_hat, double y_bar, double delta);

/// (y_hat - q)^2 + delta * (y_bar - q)^2.
double hindsight_loss(double q, double y_hat, double y_bar, double delta);

/// d/dq of hindsight_loss, written as 2 (1 + delta) (q - r_new).
double hindsight_loss_grad_q(double q, double y_hat, double y_bar, double delta);

}  // namespace hindsight::qcore
