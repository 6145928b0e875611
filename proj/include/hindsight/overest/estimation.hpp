#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hindsight/approx/polynomial.hpp"
#include "hindsight/envs/function_estimation.hpp"

namespace hindsight::overest {

enum class EstimationMethod { dqn, ddqn, dqn_h, ddqn_h };

EstimationMethod parse_method(std::string_view name);
std::string_view to_string(EstimationMethod method);
bool is_double(EstimationMethod method);
bool uses_hindsight(EstimationMethod method);

struct EstimationConfig {
  EstimationMethod method = EstimationMethod::dqn;
  double delta = 1.0;        // ignored by dqn / ddqn
  std::size_t rounds = 20;   // number of fits; round 0 regresses the true values
  std::size_t degree = 6;
  /// Each sample state is a self-loop with reward (1 - gamma) Q*(s), so the
  /// bootstrapped target is (1 - gamma) Q*(s) + gamma * max-estimate(s).
  double gamma = 0.9;
  std::uint64_t seed = 0;    // drives the evaluation ensemble of double methods
};

/// One polynomial per action. Double methods also carry an evaluation
/// ensemble: the estimate at s is evaluation[a*](s) with
/// a* = argmax_a selection[a](s).
struct ActionFits {
  std::vector<approx::PolyRegressor> selection;
  std::vector<approx::PolyRegressor> evaluation;

  bool decoupled() const { return !evaluation.empty(); }
  /// max_a Q-hat(s, a), or the decoupled estimate for double methods.
  double estimate(double state) const;
};

using RoundObserver = std::function<void(std::size_t round, const ActionFits& fits)>;

/// Iterated refitting on the function estimation environment.
///
/// Round 0 fits every action to Q* on its sample set. Each later round
/// regresses every action onto bootstrapped targets built from the previous
/// round's fits; hindsight methods blend that target with the previous fit of
/// the same action at the same state (smoothed_reward). Double methods refit
/// the evaluation ensemble each round on a freshly drawn adjacent gap per
/// action. Rank-deficient fits propagate RankDeficientError.
ActionFits estimate_all(const envs::FunctionEstimationEnv& env, const EstimationConfig& config,
                        const RoundObserver& on_round = {});

struct BiasCurve {
  std::vector<double> grid;
  std::vector<double> bias;
  std::string method_label;
};

/// bias(s) = estimate(s) - max_a Q*(s, a) on the environment's eval grid.
BiasCurve bias_curve(const ActionFits& fits, const envs::FunctionEstimationEnv& env,
                     std::string method_label = {});

double mean_bias(const BiasCurve& curve);
double mean_abs_bias(const BiasCurve& curve);
/// Sample standard deviation of consecutive bias differences.
double smoothness(const BiasCurve& curve);

}  // namespace hindsight::overest
