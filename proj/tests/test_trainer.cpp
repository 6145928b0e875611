#include <doctest.h>

#include <vector>

#include "hindsight/common/error.hpp"
#include "hindsight/envs/tabular_mdp.hpp"
#include "hindsight/trainer/trainer.hpp"

using namespace hindsight;
using namespace hindsight::trainer;

namespace {

approx::QNetwork fixed_outputs(std::vector<double> outputs) {
  approx::MLPSpec spec;
  spec.layer_widths = {1, outputs.size()};
  approx::ParamVector p(spec);
  for (std::size_t k = 0; k < outputs.size(); ++k) p[p.bias_index(0, k)] = outputs[k];
  return approx::QNetwork(spec, p);
}

AgentVariant quick_variant(bool hindsight, double delta) {
  AgentVariant v;
  v.hindsight = hindsight;
  v.config.delta = delta;
  v.config.alpha = 0.1;
  v.config.gamma = 0.9;
  v.config.batch_size = 8;
  v.config.buffer_capacity = 500;
  v.config.target_sync_period = 50;
  v.config.epsilon = {1.0, 0.1, 500};
  return v;
}

TrainOptions tabular_options() {
  TrainOptions o;
  o.network.hidden = {};
  o.network.bias = false;
  return o;
}

std::vector<std::vector<double>> trajectory(const envs::TabularMDP& env, const AgentVariant& v,
                                            std::int64_t frames, const TrainOptions& o) {
  std::vector<std::vector<double>> params;
  TrainHooks hooks;
  hooks.after_frame = [&](std::int64_t, const approx::QNetwork& online, const approx::QNetwork&) {
    params.push_back(online.flat_params());
  };
  train_run(env, v, frames, 3, o, hooks);
  return params;
}

}  // namespace

TEST_SUITE("trainer") {

TEST_CASE("select_action greedy examples") {
  Rng rng(0);
  const std::vector<double> x = {0.0};
  const auto c = select_action(fixed_outputs({1, 5, 3}), x, 0.0, rng);
  CHECK(c.action == 1);
  CHECK(c.behavior_q == 5);
  CHECK(select_action(fixed_outputs({2, 2}), x, 0.0, rng).action == 0);
}

TEST_CASE("select_action explores uniformly at epsilon 1") {
  Rng rng(1);
  const auto net = fixed_outputs({0, 9, 0, 0});
  const std::vector<double> x = {0.0};
  std::vector<double> counts(4, 0.0);
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) counts[select_action(net, x, 1.0, rng).action] += 1;
  for (double c : counts) CHECK(std::abs(c / draws - 0.25) <= 0.0025);
}

TEST_CASE("epsilon schedule") {
  const qcore::EpsilonSchedule s{1.0, 0.2, 100};
  CHECK(epsilon_at(s, 0) == 1.0);
  CHECK(epsilon_at(s, 100) == 0.2);
  CHECK(epsilon_at(s, 5000) == 0.2);
  CHECK(epsilon_at(s, 50) == doctest::Approx(0.6).epsilon(1e-15));
  double previous = 2.0;
  for (std::int64_t f = 0; f < 300; ++f) {
    CHECK(epsilon_at(s, f) <= previous);
    previous = epsilon_at(s, f);
  }
}

TEST_CASE("sync_target copies the online network") {
  Rng rng(2);
  const auto env = envs::chain_mdp(4, 0.9);
  NetworkOptions opts;
  opts.hidden = {6};
  auto online = make_network(env, BaseAlgorithm::dqn, opts, rng);
  auto target = make_network(env, BaseAlgorithm::dqn, opts, rng);
  const auto init = target.flat_params();
  CHECK(target.flat_params() == init);
  sync_target(online, target);
  for (std::size_t s = 0; s < 4; ++s) {
    CHECK(online.q_values(envs::one_hot(env, s)) == target.q_values(envs::one_hot(env, s)));
  }
  const auto once = target.flat_params();
  sync_target(online, target);
  CHECK(target.flat_params() == once);

  auto other = make_network(envs::chain_mdp(5, 0.9), BaseAlgorithm::dqn, opts, rng);
  CHECK_THROWS_AS(sync_target(online, other), ContractViolation);
}

TEST_CASE("train_run rejects zero frames") {
  CHECK_THROWS_AS(train_run(envs::chain_mdp(5, 0.9), quick_variant(true, 1), 0, 0), ContractViolation);
}

TEST_CASE("train_run is deterministic for a fixed seed") {
  const auto env = envs::chain_mdp(5, 0.9);
  const auto v = quick_variant(true, 1.0);
  TrainOptions o;
  o.network.hidden = {8};
  const auto a = train_run(env, v, 2000, 17, o);
  const auto b = train_run(env, v, 2000, 17, o);
  REQUIRE(a.episodes.size() == b.episodes.size());
  for (std::size_t i = 0; i < a.episodes.size(); ++i) {
    CHECK(a.episodes[i].episode_return == b.episodes[i].episode_return);
    CHECK(a.episodes[i].mean_selected_q == b.episodes[i].mean_selected_q);
    CHECK(a.episodes[i].frame_index == b.episodes[i].frame_index);
  }
  CHECK(a.online.flat_params() == b.online.flat_params());
}

TEST_CASE("episode frame indices increase and steps are positive") {
  const auto result = train_run(envs::chain_mdp(5, 0.9), quick_variant(true, 1), 3000, 4, tabular_options());
  std::int64_t last = 0;
  for (const auto& e : result.episodes) {
    CHECK(e.steps >= 1);
    CHECK(e.frame_index > last);
    last = e.frame_index;
  }
  CHECK(last == 3000);
}

TEST_CASE("hindsight at delta 0 follows the plain trajectory exactly") {
  const auto env = envs::chain_mdp(5, 0.9);
  for (auto base : {BaseAlgorithm::dqn, BaseAlgorithm::ddqn}) {
    auto on = quick_variant(true, 0.0), off = quick_variant(false, 0.0);
    on.base = off.base = base;
    TrainOptions o;
    o.network.hidden = {8};
    CHECK(trajectory(env, on, 1000, o) == trajectory(env, off, 1000, o));
  }
}

TEST_CASE("halved learning rate mode matches plain training at half the step") {
  const auto env = envs::chain_mdp(5, 0.9);
  auto half = quick_variant(true, 1.0);
  half.config.lr_half_mode = true;
  auto plain = quick_variant(false, 1.0);
  plain.config.alpha = half.config.alpha / 2;
  TrainOptions o;
  o.network.hidden = {8};
  CHECK(trajectory(env, half, 1000, o) == trajectory(env, plain, 1000, o));
}

TEST_CASE("stored behaviour values are the acting network's values") {
  const auto env = envs::chain_mdp(6, 0.9);
  TrainHooks hooks;
  std::size_t audited = 0;
  hooks.on_store = [&](const qcore::Transition& t, const approx::QNetwork& acting) {
    CHECK(t.behavior_q == acting.q_values(t.state)[t.action]);
    ++audited;
  };
  TrainOptions o;
  o.network.hidden = {8};
  train_run(env, quick_variant(true, 1.0), 1500, 8, o, hooks);
  CHECK(audited == 1500);
}

TEST_CASE("target network changes only at sync frames") {
  const auto env = envs::chain_mdp(6, 0.9);
  const auto v = quick_variant(true, 1.0);
  std::vector<double> previous;
  TrainHooks hooks;
  hooks.after_frame = [&](std::int64_t frame, const approx::QNetwork& online, const approx::QNetwork& target) {
    const auto now = target.flat_params();
    if (frame % v.config.target_sync_period == 0) {
      CHECK(now == online.flat_params());
    } else if (!previous.empty()) {
      CHECK(now == previous);
    }
    previous = now;
  };
  train_run(env, v, 1000, 9, tabular_options(), hooks);
}

TEST_CASE("tabular-equivalent dqn recovers the optimal chain policy") {
  const auto env = envs::chain_mdp(5, 0.9);
  const auto oracle = envs::value_iteration(env).greedy_policy();
  auto v = quick_variant(false, 0.0);
  v.config.alpha = 0.2;
  v.config.batch_size = 32;
  v.config.buffer_capacity = 10000;
  v.config.target_sync_period = 500;
  v.config.epsilon = {1.0, 0.05, 10000};
  const auto result = train_run(env, v, 50000, 0, tabular_options());
  const auto policy = greedy_policy(result.online, env);
  for (std::size_t s = 0; s + 1 < env.n_states; ++s) CHECK(policy[s] == oracle[s]);
}

TEST_CASE("dueling agent trains without divergence") {
  const auto env = envs::chain_mdp(5, 0.9);
  auto v = quick_variant(true, 1.0);
  v.base = BaseAlgorithm::duel;
  TrainOptions o;
  o.network.hidden = {8};
  o.eval_interval = 500;
  const auto result = train_run(env, v, 3000, 5, o);
  CHECK(result.diagnostics.status == RunStatus::completed);
  CHECK(result.evals.size() == 6);
  CHECK(result.evals.back().frame == 3000);
}

TEST_CASE("divergence is reported with its frame") {
  const auto env = envs::chain_mdp(5, 0.9);
  auto v = quick_variant(true, 1.0);
  v.config.q_ceiling = 0.5;
  v.config.alpha = 0.5;
  const auto result = train_run(env, v, 20000, 1, tabular_options());
  REQUIRE(result.diagnostics.status == RunStatus::diverged);
  CHECK(result.diagnostics.diverged_frame.has_value());
  CHECK(*result.diagnostics.diverged_frame == result.diagnostics.frames_run);
  CHECK(result.evals.empty());
}

}
