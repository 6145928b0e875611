#include "hindsight/qcore/update.hpp"

#include <cmath>
#include <string>

#include "hindsight/common/error.hpp"
#include "hindsight/qcore/hindsight_loss.hpp"

namespace hindsight::qcore {

LossMode loss_mode(bool hindsight, const HindsightConfig& config) {
  if (config.lr_half_mode) return LossMode::scaled_lr;
  return hindsight ? LossMode::hindsight : LossMode::plain;
}

namespace {

double step_size(const HindsightConfig& config, LossMode mode) {
  return mode == LossMode::scaled_lr ? config.alpha / (1.0 + config.delta) : config.alpha;
}

double regression_target(const Transition& t, double y_hat, const HindsightConfig& config,
                         LossMode mode) {
  return mode == LossMode::hindsight ? smoothed_reward(y_hat, t.behavior_q, config.delta) : y_hat;
}

struct SampleStep {
  approx::QNetwork::Blocks gradient;
  double q;
};

// (target - q) * grad Q(s, a) for one transition.
SampleStep sample_step(const approx::QNetwork& network, const Transition& t, double y_hat,
                       const HindsightConfig& config, LossMode mode) {
  const double target = regression_target(t, y_hat, config, mode);
  require(t.action < network.num_actions(), "update: action index out of range");
  const double q = network.q_values(t.state)[t.action];
  if (!std::isfinite(target) || !std::isfinite(q)) {
    throw NumericalError("non-finite target or action value (target=" + std::to_string(target) +
                         ", q=" + std::to_string(q) + ")");
  }
  std::vector<double> output_grad(network.num_actions(), 0.0);
  output_grad[t.action] = target - q;
  auto gradient = network.gradient(t.state, output_grad);
  for (const auto& block : gradient) {
    if (!block.all_finite()) throw NumericalError("non-finite gradient");
  }
  return {std::move(gradient), q};
}

}  // namespace

void sgd_update(approx::QNetwork& network, const Transition& t, double y_hat,
                const HindsightConfig& config, LossMode mode) {
  auto step = sample_step(network, t, y_hat, config, mode);
  network.add_scaled(step.gradient, step_size(config, mode));
}

BatchUpdateStats minibatch_update(approx::QNetwork& network, std::span<const Transition> batch,
                                  std::span<const double> y_hats, const HindsightConfig& config,
                                  LossMode mode) {
  require(!batch.empty() && batch.size() == y_hats.size(),
          "minibatch_update: batch and targets must be non-empty and aligned");
  auto total = approx::zero_blocks_like(network.blocks());
  BatchUpdateStats stats;
  for (std::size_t j = 0; j < batch.size(); ++j) {
    auto step = sample_step(network, batch[j], y_hats[j], config, mode);
    for (std::size_t b = 0; b < total.size(); ++b) total[b].add_scaled(step.gradient[b], 1.0);
    stats.mean_q += step.q;
    stats.max_abs_q = std::max(stats.max_abs_q, std::abs(step.q));
  }
  stats.mean_q /= static_cast<double>(batch.size());
  network.add_scaled(total, step_size(config, mode) / static_cast<double>(batch.size()));
  return stats;
}

void tabular_update(QTable& table, std::size_t s, std::size_t a, std::size_t s_next, double r,
                    double behavior_q, const HindsightConfig& config) {
  require(s < table.n_states() && s_next < table.n_states() && a < table.n_actions(),
          "tabular_update: index out of range");
  require(config.delta > -1.0, "tabular_update: delta must be greater than -1");
  const double alpha = config.alpha;
  const double blended = r + config.gamma * table.max_value(s_next) + config.delta * behavior_q;
  table(s, a) = (1.0 - alpha) * table(s, a) + (alpha / (1.0 + config.delta)) * blended;
}

void watkins_update(QTable& table, std::size_t s, std::size_t a, std::size_t s_next, double r,
                    double alpha, double gamma) {
  require(s < table.n_states() && s_next < table.n_states() && a < table.n_actions(),
          "watkins_update: index out of range");
  table(s, a) = (1.0 - alpha) * table(s, a) + alpha * (r + gamma * table.max_value(s_next));
}

}  // namespace hindsight::qcore
