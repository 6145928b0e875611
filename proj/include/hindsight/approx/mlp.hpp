#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hindsight/common/random.hpp"

namespace hindsight::approx {

enum class Activation { relu, tanh, identity };

Activation parse_activation(std::string_view name);
std::string_view to_string(Activation activation);

/// Fully connected architecture. layer_widths[0] is the input width and
/// layer_widths.back() the output width; hidden_activations has one entry per
/// hidden layer (layer_widths.size() - 2 entries).
struct MLPSpec {
  std::vector<std::size_t> layer_widths;
  std::vector<Activation> hidden_activations;
  Activation output_activation = Activation::identity;
  bool bias = true;

  /// Throws ContractViolation if the description is malformed.
  void validate() const;

  std::size_t num_layers() const { return layer_widths.size() - 1; }
  std::size_t input_width() const { return layer_widths.front(); }
  std::size_t output_width() const { return layer_widths.back(); }
  Activation activation(std::size_t layer) const;
  std::size_t param_count() const;

  bool operator==(const MLPSpec&) const = default;
};

/// Flat parameter storage for one MLPSpec.
///
/// Layer l occupies a contiguous block: its weight matrix in row-major order
/// (row = output unit, column = input unit) followed by its bias vector.
class ParamVector {
 public:
  ParamVector() = default;
  /// Zero-initialised parameters laid out for `spec`.
  explicit ParamVector(const MLPSpec& spec);

  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::size_t weight_index(std::size_t layer, std::size_t row, std::size_t col) const;
  std::size_t bias_index(std::size_t layer, std::size_t row) const;
  double weight(std::size_t layer, std::size_t row, std::size_t col) const {
    return values_[weight_index(layer, row, col)];
  }
  double& weight(std::size_t layer, std::size_t row, std::size_t col) {
    return values_[weight_index(layer, row, col)];
  }
  bool has_bias() const { return bias_; }

  bool same_layout(const ParamVector& other) const {
    return widths_ == other.widths_ && bias_ == other.bias_;
  }

  /// values += scale * other. Layouts must match.
  void add_scaled(const ParamVector& other, double scale);
  bool all_finite() const;

 private:
  std::vector<std::size_t> widths_;
  std::vector<std::size_t> offsets_;
  bool bias_ = true;
  std::vector<double> values_;
};

/// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for every weight and bias.
ParamVector init_params(const MLPSpec& spec, Rng& rng);

std::vector<double> mlp_forward(const MLPSpec& spec, const ParamVector& params,
                                std::span<const double> input);

struct MlpGradient {
  ParamVector params;
  std::vector<double> input;
};

/// Gradient of <mlp_forward(input), output_grad> with respect to every
/// parameter.
ParamVector mlp_backward(const MLPSpec& spec, const ParamVector& params,
                         std::span<const double> input,
                         std::span<const double> output_grad);

/// Same as mlp_backward, also returning the gradient with respect to the input.
MlpGradient mlp_backward_full(const MLPSpec& spec, const ParamVector& params,
                              std::span<const double> input,
                              std::span<const double> output_grad);

}  // namespace hindsight::approx
