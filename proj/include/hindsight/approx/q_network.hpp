#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "hindsight/approx/dueling.hpp"
#include "hindsight/approx/mlp.hpp"

namespace hindsight::approx {

/// Action-value approximator Q(s, .; theta): either a plain MLP whose output
/// width is the action count, or a dueling head.
///
/// Parameters are held as one or three ParamVector blocks (MLP: {params};
/// dueling: {shared, advantage, value}). Gradients use the same block shape.
class QNetwork {
 public:
  using Blocks = std::vector<ParamVector>;

  static QNetwork make_mlp(const MLPSpec& spec, Rng& rng);
  static QNetwork make_dueling(const DuelingSpec& spec, Rng& rng);
  QNetwork(MLPSpec spec, ParamVector params);
  explicit QNetwork(DuelingHead head);

  bool is_dueling() const { return std::holds_alternative<DuelingSpec>(spec_); }
  std::size_t num_actions() const;
  std::size_t input_width() const;

  std::vector<double> q_values(std::span<const double> input) const;

  /// Gradient of <q_values(input), output_grad>, shaped like blocks().
  Blocks gradient(std::span<const double> input, std::span<const double> output_grad) const;

  /// params += scale * step, block by block.
  void add_scaled(const Blocks& step, double scale);

  const Blocks& blocks() const { return blocks_; }
  Blocks& blocks() { return blocks_; }
  std::vector<double> flat_params() const;

  bool same_layout(const QNetwork& other) const;
  bool all_finite() const;

 private:
  std::variant<MLPSpec, DuelingSpec> spec_;
  Blocks blocks_;
};

/// Zero-valued blocks with the same layout as `like`.
QNetwork::Blocks zero_blocks_like(const QNetwork::Blocks& like);

}  // namespace hindsight::approx
