#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "hindsight/approx/polynomial.hpp"

namespace hindsight::envs {

enum class TrueValue { sine, gaussian };

TrueValue parse_true_value(std::string_view name);
std::string_view to_string(TrueValue value);

/// Continuous-state function estimation setting: every action has the same
/// true value Q*(s, a), and action a sees the integer sample grid with the
/// adjacent pair (first + a, first + a + 1) removed.
struct FunctionEstimationEnv {
  std::size_t n_actions = 10;
  TrueValue true_value = TrueValue::sine;
  std::vector<int> sample_states;                // integer grid
  std::vector<std::pair<int, int>> removed_pairs;  // one per action
  std::vector<double> eval_grid;
};

/// Default layout: integer states -6..6, action a drops (-5 + a, -4 + a),
/// evaluation grid -6..6 in steps of 0.02.
FunctionEstimationEnv make_function_estimation_env(TrueValue value, std::size_t n_actions = 10,
                                                   int lo = -6, int hi = 6,
                                                   int first_removed = -5,
                                                   double eval_step = 0.02);

/// sin(s) or 2 exp(-s^2); independent of the action.
double true_value(const FunctionEstimationEnv& env, double state);

/// (state, Q*(state)) at every sample state except the action's removed pair.
std::vector<approx::Sample> sample_set(const FunctionEstimationEnv& env, std::size_t action);

/// Same, with an arbitrary adjacent pair (first, first + 1) removed.
std::vector<approx::Sample> sample_set_without(const FunctionEstimationEnv& env, int first);

}  // namespace hindsight::envs
