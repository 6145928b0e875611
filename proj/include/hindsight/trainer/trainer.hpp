#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hindsight/approx/q_network.hpp"
#include "hindsight/common/random.hpp"
#include "hindsight/envs/tabular_mdp.hpp"
#include "hindsight/qcore/config.hpp"
#include "hindsight/qcore/transition.hpp"

namespace hindsight::trainer {

enum class BaseAlgorithm { dqn, ddqn, duel };

BaseAlgorithm parse_base(std::string_view name);
std::string_view to_string(BaseAlgorithm base);

/// A base learner with or without the hindsight term. With hindsight off the
/// delta term is not evaluated at all.
struct AgentVariant {
  BaseAlgorithm base = BaseAlgorithm::dqn;
  bool hindsight = true;
  qcore::HindsightConfig config;

  /// "dqn", "dqn-h", "ddqn-half", ...
  std::string label() const;
};

struct NetworkOptions {
  std::vector<std::size_t> hidden;  // empty: linear in the state features
  approx::Activation activation = approx::Activation::relu;
  bool bias = true;
};

struct TrainOptions {
  NetworkOptions network;
  std::int64_t max_episode_steps = 200;
  std::int64_t eval_interval = 0;  // 0 disables periodic snapshots
  std::size_t eval_episodes = 10;
  double eval_epsilon = 0.001;
};

struct EpisodeStats {
  double episode_return = 0.0;
  double mean_selected_q = 0.0;
  std::int64_t steps = 0;
  double epsilon_at_end = 0.0;
  std::int64_t frame_index = 0;  // frame count when the episode ended
};

struct EvalSnapshot {
  std::int64_t frame = 0;
  double eval_return = 0.0;
  double eval_mean_q = 0.0;
};

enum class RunStatus { completed, diverged };

struct Diagnostics {
  RunStatus status = RunStatus::completed;
  std::int64_t frames_run = 0;
  std::int64_t updates = 0;
  std::optional<std::int64_t> diverged_frame;
  std::string reason;
};

struct TrainResult {
  approx::QNetwork online;
  std::vector<EpisodeStats> episodes;
  std::vector<EvalSnapshot> evals;  // periodic snapshots, then the final one
  Diagnostics diagnostics;
};

/// Observation points inside the training loop; both are optional.
struct TrainHooks {
  /// Called with each transition just before it enters the replay buffer,
  /// together with the network that chose the action.
  std::function<void(const qcore::Transition&, const approx::QNetwork& acting)> on_store;
  /// Called at the end of every frame, after learning and target sync.
  std::function<void(std::int64_t frame, const approx::QNetwork& online,
                     const approx::QNetwork& target)>
      after_frame;
};

double epsilon_at(const qcore::EpsilonSchedule& schedule, std::int64_t frame);

struct ActionChoice {
  std::size_t action;
  double behavior_q;
};

/// Greedy with probability 1 - epsilon (ties to the lowest index), uniform
/// otherwise. Always consumes one uniform draw, plus one index draw when
/// exploring.
ActionChoice select_action(const approx::QNetwork& network, std::span<const double> state,
                           double epsilon, Rng& rng);

/// target <- online. Layouts must match.
void sync_target(const approx::QNetwork& online, approx::QNetwork& target);

approx::QNetwork make_network(const envs::TabularMDP& env, BaseAlgorithm base,
                              const NetworkOptions& options, Rng& rng);

/// Greedy action for every state under one-hot features.
std::vector<std::size_t> greedy_policy(const approx::QNetwork& network,
                                       const envs::TabularMDP& env);

EvalSnapshot evaluate(const approx::QNetwork& network, const envs::TabularMDP& env,
                      const TrainOptions& options, Rng& rng, std::int64_t frame);

/// Runs the hindsight DQN training loop for `frames` environment steps.
/// Fully determined by (env, variant, frames, seed, options).
TrainResult train_run(const envs::TabularMDP& env, const AgentVariant& variant,
                      std::int64_t frames, std::uint64_t seed, const TrainOptions& options = {},
                      const TrainHooks& hooks = {});

}  // namespace hindsight::trainer
