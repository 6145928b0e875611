#pragma once

#include <span>
#include <vector>

#include "hindsight/approx/mlp.hpp"

namespace hindsight::approx {

/// q[a] = adv[a] - mean(adv) + value. Adding a constant to every advantage
/// leaves the result unchanged.
std::vector<double> dueling_aggregate(std::span<const double> advantages, double state_value);

/// Shared trunk feeding an advantage stream and a scalar state-value stream.
/// The trunk's output_activation is applied to the shared features.
struct DuelingSpec {
  MLPSpec shared;
  MLPSpec advantage;
  MLPSpec value;

  void validate() const;
  std::size_t num_actions() const { return advantage.output_width(); }
  bool operator==(const DuelingSpec&) const = default;
};

struct DuelingHead {
  DuelingSpec spec;
  ParamVector shared_params;
  ParamVector advantage_params;
  ParamVector value_params;
};

DuelingHead init_dueling_head(const DuelingSpec& spec, Rng& rng);

std::vector<double> dueling_forward(const DuelingHead& head, std::span<const double> input);
std::vector<double> dueling_forward(const DuelingSpec& spec, const ParamVector& shared,
                                    const ParamVector& advantage, const ParamVector& value,
                                    std::span<const double> input);

struct DuelingGradient {
  ParamVector shared_params;
  ParamVector advantage_params;
  ParamVector value_params;
};

/// Gradient of <dueling_forward(input), output_grad> with respect to all
/// three parameter blocks.
DuelingGradient dueling_backward(const DuelingHead& head, std::span<const double> input,
                                 std::span<const double> output_grad);
DuelingGradient dueling_backward(const DuelingSpec& spec, const ParamVector& shared,
                                 const ParamVector& advantage, const ParamVector& value,
                                 std::span<const double> input,
                                 std::span<const double> output_grad);

}  // namespace hindsight::approx
