#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hindsight::qcore {

/// Dense state x action table of action values.
class QTable {
 public:
  QTable(std::size_t n_states, std::size_t n_actions, double init = 0.0);

  std::size_t n_states() const { return n_states_; }
  std::size_t n_actions() const { return n_actions_; }

  double& operator()(std::size_t s, std::size_t a) { return values_[s * n_actions_ + a]; }
  double operator()(std::size_t s, std::size_t a) const { return values_[s * n_actions_ + a]; }
  std::span<const double> row(std::size_t s) const {
    return std::span<const double>(values_).subspan(s * n_actions_, n_actions_);
  }
  double max_value(std::size_t s) const;
  std::size_t greedy_action(std::size_t s) const;
  std::vector<std::size_t> greedy_policy() const;

  bool operator==(const QTable&) const = default;

 private:
  std::size_t n_states_;
  std::size_t n_actions_;
  std::vector<double> values_;
};

}  // namespace hindsight::qcore
