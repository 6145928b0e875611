#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hindsight/experiment/run_config.hpp"

namespace hindsight::experiment {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

enum class CellStatus { completed, diverged, failed };

std::string_view to_string(CellStatus status);
CellStatus parse_cell_status(std::string_view name);

/// One (variant|method, delta, seed) unit of work and the files it owns.
struct CellRecord {
  std::string id;
  std::string group;  // variant label, estimation method, or "noise"
  std::string delta;  // as written in the CSVs
  std::uint64_t seed = 0;
  CellStatus status = CellStatus::completed;
  std::optional<std::int64_t> diverged_frame;
  std::string reason;
  std::vector<std::string> files;  // relative to the run directory
};

struct RunManifest {
  std::string config_hash;
  std::string artifact_version{kArtifactVersion};
  std::string experiment;
  bool divergence_study = false;
  std::vector<CellRecord> cells;
  std::vector<std::string> files;  // every produced file except the manifest, sorted

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& document);

  /// 0 on success, 1 if any cell failed (or diverged outside a divergence study).
  int exit_code() const;
};

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // overrides config.output_dir
  std::size_t jobs = 1;
  bool allow_divergence_study = false;
};

inline constexpr std::string_view kManifestName = "manifest.json";
inline constexpr std::string_view kSummaryName = "summary.csv";

/// Executes every cell of `config` on a bounded worker pool, then writes
/// summary.csv and manifest.json. A directory holding a previous manifest is
/// cleaned of that run's files first; any other non-empty directory is
/// rejected. Throws ConfigError for configurations that cannot run.
RunManifest run(const RunConfig& config, const RunOptions& options = {});

}  // namespace hindsight::experiment
