#include "hindsight/trainer/trainer.hpp"

#include <cmath>

#include "hindsight/common/argmax.hpp"
#include "hindsight/common/error.hpp"
#include "hindsight/qcore/replay_buffer.hpp"
#include "hindsight/qcore/targets.hpp"
#include "hindsight/qcore/update.hpp"

namespace hindsight::trainer {

BaseAlgorithm parse_base(std::string_view name) {
  if (name == "dqn") return BaseAlgorithm::dqn;
  if (name == "ddqn") return BaseAlgorithm::ddqn;
  if (name == "duel") return BaseAlgorithm::duel;
  throw ContractViolation("unknown base algorithm '" + std::string(name) + "'");
}

std::string_view to_string(BaseAlgorithm base) {
  switch (base) {
    case BaseAlgorithm::dqn: return "dqn";
    case BaseAlgorithm::ddqn: return "ddqn";
    case BaseAlgorithm::duel: return "duel";
  }
  return "dqn";
}

std::string AgentVariant::label() const {
  std::string name(to_string(base));
  if (config.lr_half_mode) return name + "-half";
  return hindsight ? name + "-h" : name;
}

double epsilon_at(const qcore::EpsilonSchedule& schedule, std::int64_t frame) {
  require(frame >= 0, "epsilon_at: negative frame");
  if (frame >= schedule.decay_steps) return schedule.end;
  const double fraction = static_cast<double>(frame) / static_cast<double>(schedule.decay_steps);
  return schedule.start + fraction * (schedule.end - schedule.start);
}

ActionChoice select_action(const approx::QNetwork& network, std::span<const double> state,
                           double epsilon, Rng& rng) {
  require(epsilon >= 0.0 && epsilon <= 1.0, "select_action: epsilon outside [0, 1]");
  const auto q = network.q_values(state);
  const bool explore = uniform01(rng) < epsilon;
  const std::size_t action = explore ? uniform_index(rng, q.size()) : argmax(q);
  return {action, q[action]};
}

void sync_target(const approx::QNetwork& online, approx::QNetwork& target) {
  require(online.same_layout(target), "sync_target: layout mismatch");
  target.blocks() = online.blocks();
}

approx::QNetwork make_network(const envs::TabularMDP& env, BaseAlgorithm base,
                              const NetworkOptions& options, Rng& rng) {
  using approx::MLPSpec;
  if (base != BaseAlgorithm::duel) {
    MLPSpec spec;
    spec.layer_widths.push_back(env.n_states);
    spec.layer_widths.insert(spec.layer_widths.end(), options.hidden.begin(), options.hidden.end());
    spec.layer_widths.push_back(env.n_actions);
    spec.hidden_activations.assign(options.hidden.size(), options.activation);
    spec.bias = options.bias;
    return approx::QNetwork::make_mlp(spec, rng);
  }
  require(!options.hidden.empty(), "dueling network needs at least one hidden layer");
  approx::DuelingSpec spec;
  spec.shared.layer_widths.push_back(env.n_states);
  spec.shared.layer_widths.insert(spec.shared.layer_widths.end(), options.hidden.begin(),
                                  options.hidden.end());
  spec.shared.hidden_activations.assign(options.hidden.size() - 1, options.activation);
  spec.shared.output_activation = options.activation;
  spec.shared.bias = options.bias;
  spec.advantage.layer_widths = {options.hidden.back(), env.n_actions};
  spec.advantage.bias = options.bias;
  spec.value.layer_widths = {options.hidden.back(), 1};
  spec.value.bias = options.bias;
  return approx::QNetwork::make_dueling(spec, rng);
}

std::vector<std::size_t> greedy_policy(const approx::QNetwork& network,
                                       const envs::TabularMDP& env) {
  std::vector<std::size_t> policy(env.n_states);
  for (std::size_t s = 0; s < env.n_states; ++s) {
    policy[s] = argmax(network.q_values(envs::one_hot(env, s)));
  }
  return policy;
}

EvalSnapshot evaluate(const approx::QNetwork& network, const envs::TabularMDP& env,
                      const TrainOptions& options, Rng& rng, std::int64_t frame) {
  double total_return = 0.0;
  double total_q = 0.0;
  std::int64_t total_steps = 0;
  for (std::size_t e = 0; e < options.eval_episodes; ++e) {
    std::size_t state = env.start_state;
    for (std::int64_t t = 0; t < options.max_episode_steps; ++t) {
      const auto choice = select_action(network, envs::one_hot(env, state), options.eval_epsilon, rng);
      const auto result = envs::step(env, state, choice.action, rng);
      total_return += result.reward;
      total_q += choice.behavior_q;
      ++total_steps;
      state = result.next_state;
      if (result.terminal) break;
    }
  }
  EvalSnapshot snapshot;
  snapshot.frame = frame;
  if (options.eval_episodes > 0) {
    snapshot.eval_return = total_return / static_cast<double>(options.eval_episodes);
    snapshot.eval_mean_q = total_q / static_cast<double>(total_steps);
  }
  return snapshot;
}

namespace {

// Per-purpose random streams derived from the run seed.
enum Stream : std::uint64_t { init_stream, act_stream, env_stream, eval_stream, replay_stream };

double bootstrap_target(BaseAlgorithm base, const qcore::Transition& t,
                        const approx::QNetwork& online, const approx::QNetwork& target,
                        double gamma) {
  if (base == BaseAlgorithm::ddqn) return qcore::ddqn_target(t, online, target, gamma);
  return qcore::dqn_target(t, target, gamma);
}

}  // namespace

TrainResult train_run(const envs::TabularMDP& env, const AgentVariant& variant,
                      std::int64_t frames, std::uint64_t seed, const TrainOptions& options,
                      const TrainHooks& hooks) {
  require(frames > 0, "train_run: frames must be positive");
  require(options.max_episode_steps > 0, "train_run: max_episode_steps must be positive");
  require(options.eval_interval >= 0, "train_run: eval_interval must be non-negative");
  env.validate();
  const auto& config = variant.config;
  config.validate();

  Rng init_rng(derive_seed(seed, init_stream));
  Rng act_rng(derive_seed(seed, act_stream));
  Rng env_rng(derive_seed(seed, env_stream));
  Rng eval_rng(derive_seed(seed, eval_stream));
  qcore::HindsightBuffer buffer(config.buffer_capacity, derive_seed(seed, replay_stream));

  approx::QNetwork online = make_network(env, variant.base, options.network, init_rng);
  approx::QNetwork target = online;
  const auto mode = qcore::loss_mode(variant.hindsight, config);

  std::vector<EpisodeStats> episodes;
  std::vector<EvalSnapshot> evals;
  Diagnostics diag;
  std::int64_t frame = 0;

  auto mark_diverged = [&](std::string reason) {
    diag.status = RunStatus::diverged;
    diag.diverged_frame = frame;
    diag.reason = std::move(reason);
  };

  std::vector<double> y_hats(config.batch_size);
  while (frame < frames && diag.status == RunStatus::completed) {
    std::size_t state = env.start_state;
    EpisodeStats stats;
    double q_sum = 0.0;
    for (;;) {
      const double epsilon = epsilon_at(config.epsilon, frame);
      auto features = envs::one_hot(env, state);
      const auto choice = select_action(online, features, epsilon, act_rng);
      const auto result = envs::step(env, state, choice.action, env_rng);

      qcore::Transition t{std::move(features), envs::one_hot(env, result.next_state),
                          choice.action, result.reward, result.terminal, choice.behavior_q};
      if (hooks.on_store) hooks.on_store(t, online);
      buffer.push(std::move(t));

      ++frame;
      ++stats.steps;
      stats.episode_return += result.reward;
      stats.epsilon_at_end = epsilon;
      q_sum += choice.behavior_q;

      if (!std::isfinite(choice.behavior_q) || std::abs(choice.behavior_q) > config.q_ceiling) {
        mark_diverged("acting action value out of range");
      } else if (auto batch = buffer.sample(config.batch_size)) {
        for (std::size_t j = 0; j < batch->size(); ++j) {
          y_hats[j] = bootstrap_target(variant.base, (*batch)[j], online, target, config.gamma);
        }
        try {
          const auto update = qcore::minibatch_update(online, *batch, y_hats, config, mode);
          ++diag.updates;
          if (update.max_abs_q > config.q_ceiling) {
            mark_diverged("action value exceeded ceiling");
          } else if (!online.all_finite()) {
            mark_diverged("non-finite parameters");
          }
        } catch (const NumericalError& e) {
          mark_diverged(e.what());
        }
      }

      if (frame % config.target_sync_period == 0) sync_target(online, target);
      if (hooks.after_frame) hooks.after_frame(frame, online, target);

      const bool stopped = diag.status != RunStatus::completed;
      if (!stopped && options.eval_interval > 0 && frame % options.eval_interval == 0 &&
          frame < frames) {
        evals.push_back(evaluate(online, env, options, eval_rng, frame));
      }
      state = result.next_state;
      if (stopped || result.terminal || stats.steps >= options.max_episode_steps ||
          frame >= frames) {
        break;
      }
    }
    stats.mean_selected_q = q_sum / static_cast<double>(stats.steps);
    stats.frame_index = frame;
    episodes.push_back(stats);
  }

  diag.frames_run = frame;
  if (diag.status == RunStatus::completed) {
    evals.push_back(evaluate(online, env, options, eval_rng, frame));
  }
  return TrainResult{std::move(online), std::move(episodes), std::move(evals), std::move(diag)};
}

}  // namespace hindsight::trainer
