#include "hindsight/experiment/summary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>


#include "hindsight/experiment/csv.hpp"
#include "hindsight/experiment/runner.hpp"

namespace hindsight::experiment {

namespace fs = std::filesystem;

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string text = "cannot summarize run:";
  for (const auto& i : issues) text += "\n  - " + i;
  return text;
}

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

std::string number_or_blank(const std::vector<double>& xs, double value) {
  return xs.empty() ? "" : format_number(value);
}

// Groups keyed by (group, delta) in order of first appearance.
template <typename Value>
struct OrderedGroups {
  std::vector<std::pair<std::string, std::string>> keys;
  std::map<std::pair<std::string, std::string>, Value> values;

  Value& at(const std::string& group, const std::string& delta) {
    auto key = std::make_pair(group, delta);
    auto it = values.find(key);
    if (it == values.end()) {
      keys.push_back(key);
      it = values.emplace(key, Value{}).first;
    }
    return it->second;
  }
};

std::string counterpart_of(const std::string& label) {
  for (std::string_view suffix : {"-h", "-half"}) {
    if (label.size() > suffix.size() && label.ends_with(suffix)) {
      return label.substr(0, label.size() - suffix.size());
    }
  }
  return "";
}

struct TrainGroup {
  std::size_t cells = 0;
  std::size_t completed = 0;
  std::size_t diverged = 0;
  std::vector<double> returns;
  std::vector<double> mean_qs;
  std::map<std::uint64_t, double> return_by_seed;
};

SummaryTable summarize_train(const fs::path& dir, const RunManifest& manifest,
                             std::vector<std::string>& issues) {
  OrderedGroups<TrainGroup> groups;
  for (const auto& cell : manifest.cells) {
    auto& g = groups.at(cell.group, cell.delta);
    ++g.cells;
    if (cell.status == CellStatus::diverged) ++g.diverged;
    if (cell.status != CellStatus::completed) continue;
    ++g.completed;
    const std::string evals_file = "evals/" + cell.id + ".csv";
    try {
      const auto table = read_csv(dir / evals_file);
      if (table.rows.empty()) {
        issues.push_back(evals_file + ": no evaluation rows for a completed cell");
        continue;
      }
      const auto& last = table.rows.back();
      const double ret = parse_number(last.at(table.column("eval_return")));
      const double q = parse_number(last.at(table.column("eval_mean_q")));
      g.returns.push_back(ret);
      g.mean_qs.push_back(q);
      g.return_by_seed[cell.seed] = ret;
    } catch (const std::exception& e) {
      issues.push_back(evals_file + ": " + e.what());
    }
  }

  SummaryTable table;
  table.header = {"variant", "delta", "cells", "completed", "diverged", "mean_return", "sd_return",
                  "mean_q", "sd_q", "counterpart", "wins", "losses"};
  for (const auto& key : groups.keys) {
    const auto& g = groups.values.at(key);
    const auto r = moments(g.returns);
    const auto q = moments(g.mean_qs);
    std::vector<std::string> row = {key.first,
                                    key.second,
                                    std::to_string(g.cells),
                                    std::to_string(g.completed),
                                    std::to_string(g.diverged),
                                    number_or_blank(g.returns, r.mean),
                                    number_or_blank(g.returns, r.sd),
                                    number_or_blank(g.mean_qs, q.mean),
                                    number_or_blank(g.mean_qs, q.sd)};
    const std::string other = counterpart_of(key.first);
    const TrainGroup* counterpart = nullptr;
    for (const auto& [k, v] : groups.values) {
      if (k.first == other) counterpart = &v;
    }
    if (counterpart == nullptr) {
      row.insert(row.end(), {"", "", ""});
    } else {
      int wins = 0;
      int losses = 0;
      for (const auto& [seed, ret] : g.return_by_seed) {
        const auto it = counterpart->return_by_seed.find(seed);
        if (it == counterpart->return_by_seed.end()) continue;
        if (ret > it->second) ++wins;
        if (ret < it->second) ++losses;
      }
      row.insert(row.end(), {other, std::to_string(wins), std::to_string(losses)});
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

struct OverestGroup {
  std::vector<double> mean_bias;
  std::vector<double> mean_abs_bias;
  std::vector<double> smoothness;
};

SummaryTable summarize_overest(const fs::path& dir, const RunManifest& manifest,
                               std::vector<std::string>& issues) {
  OrderedGroups<OverestGroup> groups;
  for (const auto& cell : manifest.cells) {
    auto& g = groups.at(cell.group, cell.delta);
    if (cell.status != CellStatus::completed) continue;
    const std::string bias_file = "bias/" + cell.id + ".csv";
    try {
      const auto table = read_csv(dir / bias_file);
      const auto round_col = table.column("round");
      const auto bias_col = table.column("bias");
      long last_round = -1;
      for (const auto& row : table.rows) {
        last_round = std::max(last_round, std::stol(row.at(round_col)));
      }
      std::vector<double> bias;
      for (const auto& row : table.rows) {
        if (std::stol(row.at(round_col)) == last_round) bias.push_back(parse_number(row.at(bias_col)));
      }
      if (bias.size() < 3) {
        issues.push_back(bias_file + ": too few final-round rows");
        continue;
      }
      double sum = 0.0;
      double abs_sum = 0.0;
      for (double b : bias) {
        sum += b;
        abs_sum += std::abs(b);
      }
      std::vector<double> diffs;
      for (std::size_t i = 1; i < bias.size(); ++i) diffs.push_back(bias[i] - bias[i - 1]);
      g.mean_bias.push_back(sum / static_cast<double>(bias.size()));
      g.mean_abs_bias.push_back(abs_sum / static_cast<double>(bias.size()));
      g.smoothness.push_back(moments(diffs).sd);
    } catch (const std::exception& e) {
      issues.push_back(bias_file + ": " + e.what());
    }
  }

  SummaryTable table;
  table.header = {"method", "delta", "cells", "mean_bias", "sd_bias", "mean_abs_bias",
                  "sd_abs_bias", "mean_smoothness", "sd_smoothness"};
  for (const auto& key : groups.keys) {
    const auto& g = groups.values.at(key);
    const auto b = moments(g.mean_bias);
    const auto a = moments(g.mean_abs_bias);
    const auto s = moments(g.smoothness);
    table.rows.push_back({key.first, key.second, std::to_string(g.mean_bias.size()),
                          number_or_blank(g.mean_bias, b.mean), number_or_blank(g.mean_bias, b.sd),
                          number_or_blank(g.mean_abs_bias, a.mean),
                          number_or_blank(g.mean_abs_bias, a.sd),
                          number_or_blank(g.smoothness, s.mean), number_or_blank(g.smoothness, s.sd)});
  }
  return table;
}

SummaryTable summarize_noise(const fs::path& dir, std::vector<std::string>& issues) {
  SummaryTable table;
  table.header = {"cells", "m", "epsilon", "gamma", "mean_empirical", "sd_empirical",
                  "closed_form", "relative_error"};
  try {
    const auto csv = read_csv(dir / std::string(kSummaryName));
    std::vector<double> empirical;
    std::vector<std::string> fixed;
    double closed = 0.0;
    for (const auto& row : csv.rows) {
      if (row.at(csv.column("status")) != "completed") continue;
      empirical.push_back(parse_number(row.at(csv.column("empirical_mean"))));
      closed = parse_number(row.at(csv.column("closed_form")));
      fixed = {row.at(csv.column("m")), row.at(csv.column("epsilon")), row.at(csv.column("gamma"))};
    }
    if (empirical.empty()) {
      issues.push_back(std::string(kSummaryName) + ": no completed noise cells");
      return table;
    }
    const auto e = moments(empirical);
    const double rel = closed != 0.0 ? std::abs(e.mean - closed) / closed : std::abs(e.mean);
    table.rows.push_back({std::to_string(empirical.size()), fixed[0], fixed[1], fixed[2],
                          format_number(e.mean), format_number(e.sd), format_number(closed),
                          format_number(rel)});
  } catch (const std::exception& e) {
    issues.push_back(std::string(kSummaryName) + ": " + e.what());
  }
  return table;
}

}  // namespace

SummaryError::SummaryError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::string SummaryTable::to_csv() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

SummaryTable summarize(const fs::path& run_dir) {
  std::vector<std::string> issues;
  const fs::path manifest_path = run_dir / std::string(kManifestName);
  if (!fs::exists(manifest_path)) throw SummaryError({manifest_path.string() + ": missing"});

  RunManifest manifest;
  try {
    std::ifstream in(manifest_path);
    manifest = RunManifest::from_json(nlohmann::json::parse(in));
  } catch (const std::exception& e) {
    throw SummaryError({manifest_path.string() + ": " + e.what()});
  }
  for (const auto& f : manifest.files) {
    if (!fs::exists(run_dir / f)) issues.push_back(f + ": listed in manifest but missing");
  }

  SummaryTable table;
  if (manifest.experiment == "overest") {
    table = summarize_overest(run_dir, manifest, issues);
  } else if (manifest.experiment == "noise_bound") {
    table = summarize_noise(run_dir, issues);
  } else if (manifest.experiment == "train" || manifest.experiment == "delta_sweep") {
    table = summarize_train(run_dir, manifest, issues);
  } else {
    issues.push_back("manifest: unknown experiment '" + manifest.experiment + "'");
  }
  if (!issues.empty()) throw SummaryError(std::move(issues));
  return table;
}

}  // namespace hindsight::experiment
