#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hindsight/envs/function_estimation.hpp"
#include "hindsight/envs/tabular_mdp.hpp"
#include "hindsight/overest/estimation.hpp"
#include "hindsight/overest/noise.hpp"
#include "hindsight/qcore/config.hpp"
#include "hindsight/trainer/trainer.hpp"

namespace hindsight::experiment {

/// Invalid configuration; `path` is a JSON pointer to the offending value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class ExperimentKind { train, overest, noise_bound, delta_sweep };

ExperimentKind parse_experiment(std::string_view name);
std::string_view to_string(ExperimentKind kind);

struct EnvSpec {
  std::string kind = "chain";  // chain | gridworld
  std::size_t n = 10;          // chain length
  double gamma = 0.9;

  envs::TabularMDP build() const;
};

struct VariantSpec {
  trainer::BaseAlgorithm base = trainer::BaseAlgorithm::dqn;
  bool hindsight = true;
  bool lr_half = false;
  std::optional<double> delta;  // train experiment only; overrides agent.delta
};

struct OverestSpec {
  envs::TrueValue true_value = envs::TrueValue::sine;
  std::vector<overest::EstimationMethod> methods = {
      overest::EstimationMethod::dqn, overest::EstimationMethod::ddqn,
      overest::EstimationMethod::dqn_h, overest::EstimationMethod::ddqn_h};
  std::size_t rounds = 20;
  std::size_t degree = 6;
  double gamma = 0.9;
  double delta = 1.0;
  bool record_all_rounds = false;
};

struct NoiseSpec {
  overest::NoiseModel model;
  std::size_t trials = 1'000'000;
};

struct RunConfig {
  ExperimentKind experiment = ExperimentKind::train;
  std::vector<std::uint64_t> seeds;
  std::string output_dir = "runs/default";
  bool allow_divergence_study = false;

  // train / delta_sweep
  EnvSpec env;
  std::vector<VariantSpec> variants;
  std::vector<double> deltas;
  std::int64_t frames = 50000;
  qcore::HindsightConfig agent;
  trainer::TrainOptions train;

  OverestSpec overest;
  NoiseSpec noise;

  /// The configuration document as read, used for the config hash.
  nlohmann::json source;
};

/// Parses and validates a configuration document. Unknown keys are errors.
RunConfig parse_run_config(const nlohmann::json& document);
RunConfig load_run_config(const std::filesystem::path& path);

/// FNV-1a 64 of the key-sorted serialization, as 16 hex digits.
std::string config_hash(const nlohmann::json& document);

}  // namespace hindsight::experiment
