#include "hindsight/experiment/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <thread>

#include "hindsight/experiment/csv.hpp"
#include "hindsight/overest/estimation.hpp"
#include "hindsight/overest/noise.hpp"
#include "hindsight/trainer/trainer.hpp"

namespace hindsight::experiment {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(CellStatus status) {
  switch (status) {
    case CellStatus::completed: return "completed";
    case CellStatus::diverged: return "diverged";
    case CellStatus::failed: return "failed";
  }
  return "failed";
}

CellStatus parse_cell_status(std::string_view name) {
  if (name == "completed") return CellStatus::completed;
  if (name == "diverged") return CellStatus::diverged;
  if (name == "failed") return CellStatus::failed;
  throw std::runtime_error("unknown cell status '" + std::string(name) + "'");
}

json RunManifest::to_json() const {
  json cells_json = json::array();
  for (const auto& c : cells) {
    cells_json.push_back({{"id", c.id},
                          {"group", c.group},
                          {"delta", c.delta},
                          {"seed", c.seed},
                          {"status", to_string(c.status)},
                          {"diverged_frame", c.diverged_frame ? json(*c.diverged_frame) : json()},
                          {"reason", c.reason},
                          {"files", c.files}});
  }
  return {{"config_hash", config_hash},
          {"artifact_version", artifact_version},
          {"experiment", experiment},
          {"divergence_study", divergence_study},
          {"cells", cells_json},
          {"files", files}};
}

RunManifest RunManifest::from_json(const json& document) {
  RunManifest m;
  m.config_hash = document.at("config_hash").get<std::string>();
  m.artifact_version = document.at("artifact_version").get<std::string>();
  m.experiment = document.at("experiment").get<std::string>();
  m.divergence_study = document.at("divergence_study").get<bool>();
  m.files = document.at("files").get<std::vector<std::string>>();
  for (const auto& c : document.at("cells")) {
    CellRecord cell;
    cell.id = c.at("id").get<std::string>();
    cell.group = c.at("group").get<std::string>();
    cell.delta = c.at("delta").get<std::string>();
    cell.seed = c.at("seed").get<std::uint64_t>();
    cell.status = parse_cell_status(c.at("status").get<std::string>());
    if (!c.at("diverged_frame").is_null()) cell.diverged_frame = c.at("diverged_frame").get<std::int64_t>();
    cell.reason = c.at("reason").get<std::string>();
    cell.files = c.at("files").get<std::vector<std::string>>();
    m.cells.push_back(std::move(cell));
  }
  return m;
}

int RunManifest::exit_code() const {
  for (const auto& c : cells) {
    if (c.status == CellStatus::failed) return 1;
    if (c.status == CellStatus::diverged && !divergence_study) return 1;
  }
  return 0;
}

namespace {

struct CellOutcome {
  CellStatus status = CellStatus::completed;
  std::optional<std::int64_t> diverged_frame;
  std::string reason;
  std::vector<std::string> files;
  std::vector<std::string> summary;  // cell-specific columns of summary.csv
};

struct CellPlan {
  CellRecord record;
  std::function<CellOutcome(const fs::path& dir)> execute;
};

std::vector<std::string> train_summary_header() {
  return {"cell", "variant", "delta", "seed", "status", "diverged_frame",
          "final_eval_return", "final_eval_mean_q", "episodes", "frames_run"};
}

std::vector<std::string> overest_summary_header() {
  return {"cell", "method", "delta", "seed", "status", "mean_bias", "mean_abs_bias", "smoothness"};
}

std::vector<std::string> noise_summary_header() {
  return {"cell", "seed", "status", "m", "epsilon", "gamma", "trials",
          "empirical_mean", "closed_form", "relative_error"};
}

// Summary columns that follow "status" for a cell that produced nothing.
std::size_t trailing_columns(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::overest: return 3;
    case ExperimentKind::noise_bound: return 7;
    default: return 5;
  }
}

void check_delta(double delta, bool allowed, const std::string& path) {
  if (delta < 0.0 && !allowed) {
    throw ConfigError(path, "negative delta requires allow_divergence_study");
  }
}

CellPlan train_cell(const RunConfig& config, const VariantSpec& spec, double delta,
                    std::uint64_t seed, bool divergence_study) {
  trainer::AgentVariant variant{spec.base, spec.hindsight, config.agent};
  variant.config.delta = delta;
  variant.config.lr_half_mode = spec.lr_half;
  variant.config.allow_divergence_study = divergence_study;

  CellPlan plan;
  plan.record.group = variant.label();
  plan.record.delta = format_number(delta);
  plan.record.seed = seed;
  plan.record.id = plan.record.group + "_d" + plan.record.delta + "_s" + std::to_string(seed);
  const CellRecord record = plan.record;

  plan.execute = [&config, variant, record](const fs::path& dir) {
    CellOutcome out;
    const auto env = config.env.build();
    const auto result = trainer::train_run(env, variant, config.frames, record.seed, config.train);

    const std::string episodes_file = "episodes/" + record.id + ".csv";
    const std::string evals_file = "evals/" + record.id + ".csv";
    const std::string seed_text = std::to_string(record.seed);
    {
      CsvWriter w(dir / episodes_file,
                  {"frame", "episode", "return", "mean_q", "epsilon", "seed", "variant", "delta"});
      for (std::size_t e = 0; e < result.episodes.size(); ++e) {
        const auto& ep = result.episodes[e];
        w.row({std::to_string(ep.frame_index), std::to_string(e), format_number(ep.episode_return),
               format_number(ep.mean_selected_q), format_number(ep.epsilon_at_end), seed_text,
               record.group, record.delta});
      }
    }
    {
      CsvWriter w(dir / evals_file,
                  {"frame", "eval_return", "eval_mean_q", "seed", "variant", "delta"});
      for (const auto& snap : result.evals) {
        w.row({std::to_string(snap.frame), format_number(snap.eval_return),
               format_number(snap.eval_mean_q), seed_text, record.group, record.delta});
      }
    }
    out.files = {episodes_file, evals_file};

    const auto& diag = result.diagnostics;
    const bool diverged = diag.status == trainer::RunStatus::diverged;
    out.status = diverged ? CellStatus::diverged : CellStatus::completed;
    out.diverged_frame = diag.diverged_frame;
    out.reason = diag.reason;
    const bool has_final = !diverged && !result.evals.empty();
    out.summary = {diverged ? std::to_string(*diag.diverged_frame) : "",
                   has_final ? format_number(result.evals.back().eval_return) : "",
                   has_final ? format_number(result.evals.back().eval_mean_q) : "",
                   std::to_string(result.episodes.size()), std::to_string(diag.frames_run)};
    return out;
  };
  return plan;
}

CellPlan overest_cell(const RunConfig& config, overest::EstimationMethod method,
                      std::uint64_t seed) {
  overest::EstimationConfig estimation;
  estimation.method = method;
  estimation.delta = overest::uses_hindsight(method) ? config.overest.delta : 0.0;
  estimation.rounds = config.overest.rounds;
  estimation.degree = config.overest.degree;
  estimation.gamma = config.overest.gamma;
  estimation.seed = seed;

  CellPlan plan;
  plan.record.group = std::string(overest::to_string(method));
  plan.record.delta = format_number(estimation.delta);
  plan.record.seed = seed;
  plan.record.id = plan.record.group + "_s" + std::to_string(seed);
  const CellRecord record = plan.record;

  plan.execute = [&config, estimation, record](const fs::path& dir) {
    CellOutcome out;
    const auto env = envs::make_function_estimation_env(config.overest.true_value);
    const std::string bias_file = "bias/" + record.id + ".csv";
    CsvWriter w(dir / bias_file, {"state", "bias", "method", "seed", "round"});
    const std::string seed_text = std::to_string(record.seed);
    auto write_curve = [&](const overest::BiasCurve& curve, std::size_t round) {
      for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        w.row({format_number(curve.grid[i]), format_number(curve.bias[i]), record.group,
               seed_text, std::to_string(round)});
      }
    };
    const std::size_t last_round = estimation.rounds - 1;
    const auto fits = overest::estimate_all(
        env, estimation, [&](std::size_t round, const overest::ActionFits& f) {
          if (config.overest.record_all_rounds && round != last_round) {
            write_curve(overest::bias_curve(f, env, record.group), round);
          }
        });
    const auto curve = overest::bias_curve(fits, env, record.group);
    write_curve(curve, last_round);
    out.files = {bias_file};
    out.summary = {format_number(overest::mean_bias(curve)),
                   format_number(overest::mean_abs_bias(curve)),
                   format_number(overest::smoothness(curve))};
    return out;
  };
  return plan;
}

CellPlan noise_cell(const RunConfig& config, std::uint64_t seed) {
  CellPlan plan;
  plan.record.group = "noise";
  plan.record.delta = "0";
  plan.record.seed = seed;
  plan.record.id = "noise_s" + std::to_string(seed);
  plan.execute = [&config, seed](const fs::path&) {
    CellOutcome out;
    const auto& nm = config.noise.model;
    const double empirical = overest::noise_mc(nm, config.noise.trials, seed);
    const double closed = overest::thrun_upper_bound(nm);
    const double error = closed != 0.0 ? std::abs(empirical - closed) / closed
                                       : std::abs(empirical - closed);
    out.summary = {std::to_string(nm.m), format_number(nm.epsilon), format_number(nm.gamma),
                   std::to_string(config.noise.trials), format_number(empirical),
                   format_number(closed), format_number(error)};
    return out;
  };
  return plan;
}

std::vector<CellPlan> plan_cells(const RunConfig& config, bool divergence_study) {
  std::vector<CellPlan> plans;
  switch (config.experiment) {
    case ExperimentKind::train:
    case ExperimentKind::delta_sweep: {
      check_delta(config.agent.delta, divergence_study, "/agent/delta");
      for (std::size_t i = 0; i < config.variants.size(); ++i) {
        const auto& v = config.variants[i];
        std::vector<double> deltas;
        if (!v.hindsight && !v.lr_half) {
          deltas = {0.0};
        } else if (config.experiment == ExperimentKind::delta_sweep) {
          deltas = config.deltas;
          for (std::size_t k = 0; k < deltas.size(); ++k) {
            check_delta(deltas[k], divergence_study, "/deltas/" + std::to_string(k));
          }
        } else {
          deltas = {v.delta.value_or(config.agent.delta)};
          check_delta(deltas[0], divergence_study, "/variants/" + std::to_string(i) + "/delta");
        }
        for (double d : deltas) {
          for (auto seed : config.seeds) plans.push_back(train_cell(config, v, d, seed, divergence_study));
        }
      }
      break;
    }
    case ExperimentKind::overest:
      for (auto method : config.overest.methods) {
        for (auto seed : config.seeds) plans.push_back(overest_cell(config, method, seed));
      }
      break;
    case ExperimentKind::noise_bound:
      for (auto seed : config.seeds) plans.push_back(noise_cell(config, seed));
      break;
  }
  std::set<std::string> ids;
  for (const auto& p : plans) {
    if (!ids.insert(p.record.id).second) {
      throw ConfigError("/", "duplicate cell '" + p.record.id + "' (repeated seed or variant)");
    }
  }
  return plans;
}

// Leaves `dir` existing and free of any previous run's output.
void prepare_directory(const fs::path& dir) {
  if (!fs::exists(dir)) {
    fs::create_directories(dir);
    return;
  }
  if (!fs::is_directory(dir)) throw ConfigError("/output_dir", dir.string() + " is not a directory");
  const fs::path manifest_path = dir / kManifestName;
  if (fs::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    RunManifest previous;
    try {
      previous = RunManifest::from_json(json::parse(in));
    } catch (const std::exception& e) {
      throw ConfigError("/output_dir", "unreadable previous manifest: " + std::string(e.what()));
    }
    for (const auto& f : previous.files) fs::remove(dir / f);
    fs::remove(manifest_path);
    for (const char* sub : {"episodes", "evals", "bias"}) {
      if (fs::is_directory(dir / sub) && fs::is_empty(dir / sub)) fs::remove(dir / sub);
    }
  }
  if (!fs::is_empty(dir)) {
    throw ConfigError("/output_dir", dir.string() + " is not empty and holds no previous run");
  }
}

CellOutcome execute_safely(const CellPlan& plan, const fs::path& dir) {
  try {
    return plan.execute(dir);
  } catch (const std::exception& e) {
    CellOutcome out;
    out.status = CellStatus::failed;
    out.reason = e.what();
    return out;
  }
}

}  // namespace

RunManifest run(const RunConfig& config, const RunOptions& options) {
  const bool divergence_study = config.allow_divergence_study || options.allow_divergence_study;
  auto plans = plan_cells(config, divergence_study);
  const fs::path dir = options.out_dir.value_or(fs::path(config.output_dir));
  prepare_directory(dir);
  for (const char* sub : {"episodes", "evals", "bias"}) fs::create_directories(dir / sub);

  std::vector<CellOutcome> outcomes(plans.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < plans.size();) {
      outcomes[i] = execute_safely(plans[i], dir);
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(plans.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }

  RunManifest manifest;
  manifest.config_hash = config_hash(config.source);
  manifest.experiment = std::string(to_string(config.experiment));
  manifest.divergence_study = divergence_study;

  std::vector<std::string> header;
  switch (config.experiment) {
    case ExperimentKind::overest: header = overest_summary_header(); break;
    case ExperimentKind::noise_bound: header = noise_summary_header(); break;
    default: header = train_summary_header(); break;
  }
  {
    CsvWriter summary(dir / kSummaryName, header);
    for (std::size_t i = 0; i < plans.size(); ++i) {
      CellRecord record = plans[i].record;
      auto& out = outcomes[i];
      record.status = out.status;
      record.diverged_frame = out.diverged_frame;
      record.reason = out.reason;
      record.files = out.files;

      std::vector<std::string> row = {record.id};
      if (config.experiment != ExperimentKind::noise_bound) {
        row.push_back(record.group);
        row.push_back(record.delta);
      }
      row.push_back(std::to_string(record.seed));
      row.push_back(std::string(to_string(record.status)));
      if (out.summary.empty()) out.summary.assign(trailing_columns(config.experiment), "");
      row.insert(row.end(), out.summary.begin(), out.summary.end());
      summary.row(row);

      manifest.files.insert(manifest.files.end(), record.files.begin(), record.files.end());
      manifest.cells.push_back(std::move(record));
    }
  }
  manifest.files.emplace_back(kSummaryName);
  std::sort(manifest.files.begin(), manifest.files.end());

  for (const char* sub : {"episodes", "evals", "bias"}) {
    if (fs::is_empty(dir / sub)) fs::remove(dir / sub);
  }
  std::ofstream out(dir / kManifestName, std::ios::binary | std::ios::trunc);
  out << manifest.to_json().dump(2) << '\n';
  return manifest;
}

}  // namespace hindsight::experiment
