#include "hindsight/envs/function_estimation.hpp"

#include <cmath>
#include <string>

#include "hindsight/common/error.hpp"

namespace hindsight::envs {

TrueValue parse_true_value(std::string_view name) {
  if (name == "sine") return TrueValue::sine;
  if (name == "gaussian") return TrueValue::gaussian;
  throw ContractViolation("unknown true value '" + std::string(name) + "'");
}

std::string_view to_string(TrueValue value) {
  return value == TrueValue::sine ? "sine" : "gaussian";
}

FunctionEstimationEnv make_function_estimation_env(TrueValue value, std::size_t n_actions, int lo,
                                                   int hi, int first_removed, double eval_step) {
  require(n_actions > 0 && lo < hi && eval_step > 0.0, "function estimation: invalid layout");
  require(first_removed >= lo && first_removed + static_cast<int>(n_actions) <= hi,
          "function estimation: removed pairs must fit inside the sample grid");
  FunctionEstimationEnv env;
  env.n_actions = n_actions;
  env.true_value = value;
  for (int s = lo; s <= hi; ++s) env.sample_states.push_back(s);
  for (std::size_t a = 0; a < n_actions; ++a) {
    const int first = first_removed + static_cast<int>(a);
    env.removed_pairs.emplace_back(first, first + 1);
  }
  const auto points = static_cast<std::size_t>(std::llround((hi - lo) / eval_step));
  for (std::size_t i = 0; i <= points; ++i) {
    env.eval_grid.push_back(lo + static_cast<double>(i) * eval_step);
  }
  return env;
}

double true_value(const FunctionEstimationEnv& env, double state) {
  return env.true_value == TrueValue::sine ? std::sin(state) : 2.0 * std::exp(-state * state);
}

std::vector<approx::Sample> sample_set_without(const FunctionEstimationEnv& env, int first) {
  std::vector<approx::Sample> samples;
  for (int s : env.sample_states) {
    if (s == first || s == first + 1) continue;
    const double x = static_cast<double>(s);
    samples.push_back({x, true_value(env, x)});
  }
  return samples;
}

std::vector<approx::Sample> sample_set(const FunctionEstimationEnv& env, std::size_t action) {
  require(action < env.n_actions, "sample_set: action out of range");
  return sample_set_without(env, env.removed_pairs[action].first);
}

}  // namespace hindsight::envs
