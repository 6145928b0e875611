#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace hindsight::experiment {

/// Run directory could not be summarized; `issues` lists every problem found.
class SummaryError : public std::runtime_error {
 public:
  explicit SummaryError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

struct SummaryTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
};

/// Aggregates a finished run from its raw CSVs.
///
/// train / delta_sweep: one row per (variant, delta) with mean and sample sd
/// of the final evaluation return and mean selected Q, plus wins/losses over
/// seeds against the hindsight-off variant of the same base.
/// overest: one row per (method, delta) over seeds of final-round bias
/// statistics. noise_bound: one row over seeds.
SummaryTable summarize(const std::filesystem::path& run_dir);

}  // namespace hindsight::experiment
