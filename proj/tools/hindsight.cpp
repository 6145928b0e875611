#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hindsight/experiment/run_config.hpp"
#include "hindsight/experiment/runner.hpp"
#include "hindsight/experiment/summary.hpp"

namespace ex = hindsight::experiment;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCellFailure = 1;
constexpr int kExitConfigError = 2;

int run_command(const std::string& config_path, const std::string& out_dir, std::size_t jobs,
                bool allow_divergence) {
  ex::RunOptions options;
  if (!out_dir.empty()) options.out_dir = std::filesystem::path(out_dir);
  options.jobs = jobs;
  options.allow_divergence_study = allow_divergence;

  ex::RunManifest manifest;
  try {
    const auto config = ex::load_run_config(config_path);
    manifest = ex::run(config, options);
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  std::size_t completed = 0, diverged = 0, failed = 0;
  for (const auto& cell : manifest.cells) {
    switch (cell.status) {
      case ex::CellStatus::completed: ++completed; break;
      case ex::CellStatus::diverged: ++diverged; break;
      case ex::CellStatus::failed:
        ++failed;
        std::cerr << "cell " << cell.id << " failed: " << cell.reason << '\n';
        break;
    }
  }
  std::cout << manifest.cells.size() << " cells: " << completed << " completed, " << diverged
            << " diverged, " << failed << " failed\n";
  return manifest.exit_code();
}

int summarize_command(const std::string& run_dir) {
  try {
    std::cout << ex::summarize(run_dir).to_csv();
    return kExitOk;
  } catch (const ex::SummaryError& e) {
    std::cerr << e.what() << '\n';
    return kExitCellFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hindsight-factor Q-learning experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir, run_dir;
  std::size_t jobs = 1;
  bool allow_divergence = false;

  auto* run = app.add_subcommand("run", "Execute every cell of an experiment configuration");
  run->add_option("config", config_path, "Path to the JSON configuration")->required();
  run->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--allow-divergence-study", allow_divergence,
                "Permit negative delta and report diverged cells without failing");

  auto* summarize = app.add_subcommand("summarize", "Aggregate a finished run directory");
  summarize->add_option("run_dir", run_dir, "Run directory holding manifest.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*run) return run_command(config_path, out_dir, jobs, allow_divergence);
    return summarize_command(run_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCellFailure;
  }
}
