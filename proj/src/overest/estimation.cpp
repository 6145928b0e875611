#include "hindsight/overest/estimation.hpp"

#include <cmath>
#include <string>

#include "hindsight/common/error.hpp"
#include "hindsight/common/random.hpp"
#include "hindsight/qcore/hindsight_loss.hpp"

namespace hindsight::overest {

EstimationMethod parse_method(std::string_view name) {
  if (name == "dqn") return EstimationMethod::dqn;
  if (name == "ddqn") return EstimationMethod::ddqn;
  if (name == "dqn_h") return EstimationMethod::dqn_h;
  if (name == "ddqn_h") return EstimationMethod::ddqn_h;
  throw ContractViolation("unknown estimation method '" + std::string(name) + "'");
}

std::string_view to_string(EstimationMethod method) {
  switch (method) {
    case EstimationMethod::dqn: return "dqn";
    case EstimationMethod::ddqn: return "ddqn";
    case EstimationMethod::dqn_h: return "dqn_h";
    case EstimationMethod::ddqn_h: return "ddqn_h";
  }
  return "dqn";
}

bool is_double(EstimationMethod method) {
  return method == EstimationMethod::ddqn || method == EstimationMethod::ddqn_h;
}

bool uses_hindsight(EstimationMethod method) {
  return method == EstimationMethod::dqn_h || method == EstimationMethod::ddqn_h;
}

double ActionFits::estimate(double state) const {
  std::size_t best = 0;
  double best_value = approx::poly_eval(selection[0], state);
  for (std::size_t a = 1; a < selection.size(); ++a) {
    const double v = approx::poly_eval(selection[a], state);
    if (v > best_value) {
      best = a;
      best_value = v;
    }
  }
  return decoupled() ? approx::poly_eval(evaluation[best], state) : best_value;
}

namespace {

using SampleSets = std::vector<std::vector<approx::Sample>>;

SampleSets primary_sets(const envs::FunctionEstimationEnv& env) {
  SampleSets sets;
  for (std::size_t a = 0; a < env.n_actions; ++a) sets.push_back(envs::sample_set(env, a));
  return sets;
}

// One random adjacent gap per action, anywhere on the sample grid.
SampleSets random_gap_sets(const envs::FunctionEstimationEnv& env, Rng& rng) {
  const int lo = env.sample_states.front();
  const std::size_t positions = env.sample_states.size() - 1;
  SampleSets sets;
  for (std::size_t a = 0; a < env.n_actions; ++a) {
    const int first = lo + static_cast<int>(uniform_index(rng, positions));
    sets.push_back(envs::sample_set_without(env, first));
  }
  return sets;
}

std::vector<approx::PolyRegressor> fit_true_values(const SampleSets& sets, std::size_t degree) {
  std::vector<approx::PolyRegressor> fits;
  for (const auto& samples : sets) fits.push_back(approx::poly_fit(samples, degree));
  return fits;
}

std::vector<approx::PolyRegressor> refit(const envs::FunctionEstimationEnv& env,
                                         const EstimationConfig& config, const SampleSets& sets,
                                         const std::vector<approx::PolyRegressor>& previous,
                                         const ActionFits& current) {
  const bool hindsight = uses_hindsight(config.method);
  std::vector<approx::PolyRegressor> fits;
  for (std::size_t a = 0; a < sets.size(); ++a) {
    std::vector<approx::Sample> targets;
    targets.reserve(sets[a].size());
    for (const auto& sample : sets[a]) {
      const double s = sample.state;
      const double y_hat =
          (1.0 - config.gamma) * envs::true_value(env, s) + config.gamma * current.estimate(s);
      const double y = hindsight
                           ? qcore::smoothed_reward(y_hat, approx::poly_eval(previous[a], s),
                                                    config.delta)
                           : y_hat;
      targets.push_back({s, y});
    }
    fits.push_back(approx::poly_fit(targets, config.degree));
  }
  return fits;
}

}  // namespace

ActionFits estimate_all(const envs::FunctionEstimationEnv& env, const EstimationConfig& config,
                        const RoundObserver& on_round) {
  require(config.rounds >= 1, "estimate_all: rounds must be at least 1");
  require(config.gamma >= 0.0 && config.gamma <= 1.0, "estimate_all: gamma must lie in [0, 1]");
  require(!uses_hindsight(config.method) || config.delta > -1.0,
          "estimate_all: delta must be greater than -1");
  require(env.n_actions > 0 && env.sample_states.size() >= 2, "estimate_all: empty environment");

  const bool decoupled = is_double(config.method);
  const SampleSets selection_sets = primary_sets(env);
  Rng rng(config.seed);

  ActionFits fits;
  fits.selection = fit_true_values(selection_sets, config.degree);
  if (decoupled) fits.evaluation = fit_true_values(random_gap_sets(env, rng), config.degree);
  if (on_round) on_round(0, fits);

  for (std::size_t round = 1; round < config.rounds; ++round) {
    ActionFits next;
    next.selection = refit(env, config, selection_sets, fits.selection, fits);
    if (decoupled) {
      next.evaluation = refit(env, config, random_gap_sets(env, rng), fits.evaluation, fits);
    }
    fits = std::move(next);
    if (on_round) on_round(round, fits);
  }
  return fits;
}

BiasCurve bias_curve(const ActionFits& fits, const envs::FunctionEstimationEnv& env,
                     std::string method_label) {
  require(fits.selection.size() == env.n_actions &&
              (!fits.decoupled() || fits.evaluation.size() == env.n_actions),
          "bias_curve: fits must cover every action");
  BiasCurve curve;
  curve.method_label = std::move(method_label);
  curve.grid = env.eval_grid;
  curve.bias.reserve(env.eval_grid.size());
  for (double s : env.eval_grid) {
    // Q* is identical across actions, so its max is the value itself.
    curve.bias.push_back(fits.estimate(s) - envs::true_value(env, s));
  }
  return curve;
}

double mean_bias(const BiasCurve& curve) {
  require(!curve.bias.empty(), "mean_bias: empty curve");
  double total = 0.0;
  for (double b : curve.bias) total += b;
  return total / static_cast<double>(curve.bias.size());
}

double mean_abs_bias(const BiasCurve& curve) {
  require(!curve.bias.empty(), "mean_abs_bias: empty curve");
  double total = 0.0;
  for (double b : curve.bias) total += std::abs(b);
  return total / static_cast<double>(curve.bias.size());
}

double smoothness(const BiasCurve& curve) {
  require(curve.bias.size() >= 3, "smoothness: need at least three points");
  const std::size_t n = curve.bias.size() - 1;
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += curve.bias[i + 1] - curve.bias[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = curve.bias[i + 1] - curve.bias[i] - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(n - 1));
}

}  // namespace hindsight::overest
