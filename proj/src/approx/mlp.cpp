#include "hindsight/approx/mlp.hpp"

#include <cmath>
#include <string>

#include "hindsight/common/error.hpp"

namespace hindsight::approx {

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "identity") return Activation::identity;
  throw ContractViolation("unknown activation '" + std::string(name) + "'");
}

std::string_view to_string(Activation activation) {
  switch (activation) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::identity: return "identity";
  }
  return "identity";
}

void MLPSpec::validate() const {
  require(layer_widths.size() >= 2, "MLPSpec needs at least input and output widths");
  for (auto w : layer_widths) require(w > 0, "MLPSpec layer widths must be positive");
  require(hidden_activations.size() == layer_widths.size() - 2,
          "MLPSpec needs one activation per hidden layer");
}

Activation MLPSpec::activation(std::size_t layer) const {
  return layer + 1 == num_layers() ? output_activation : hidden_activations[layer];
}

std::size_t MLPSpec::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < layer_widths.size(); ++l) {
    n += layer_widths[l + 1] * (layer_widths[l] + (bias ? 1 : 0));
  }
  return n;
}

ParamVector::ParamVector(const MLPSpec& spec) : widths_(spec.layer_widths), bias_(spec.bias) {
  spec.validate();
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    offsets_.push_back(offset);
    offset += widths_[l + 1] * (widths_[l] + (bias_ ? 1 : 0));
  }
  values_.assign(offset, 0.0);
}

std::size_t ParamVector::weight_index(std::size_t layer, std::size_t row, std::size_t col) const {
  require(layer < offsets_.size() && row < widths_[layer + 1] && col < widths_[layer],
          "ParamVector: weight index out of range");
  return offsets_[layer] + row * widths_[layer] + col;
}

std::size_t ParamVector::bias_index(std::size_t layer, std::size_t row) const {
  require(bias_, "ParamVector: layout has no bias terms");
  require(layer < offsets_.size() && row < widths_[layer + 1],
          "ParamVector: bias index out of range");
  return offsets_[layer] + widths_[layer + 1] * widths_[layer] + row;
}

void ParamVector::add_scaled(const ParamVector& other, double scale) {
  require(same_layout(other), "ParamVector::add_scaled: layout mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += scale * other.values_[i];
}

bool ParamVector::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

ParamVector init_params(const MLPSpec& spec, Rng& rng) {
  ParamVector params(spec);
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(spec.layer_widths[l]));
    for (std::size_t r = 0; r < spec.layer_widths[l + 1]; ++r) {
      for (std::size_t c = 0; c < spec.layer_widths[l]; ++c) {
        params.weight(l, r, c) = uniform_real(rng, -bound, bound);
      }
      if (spec.bias) params[params.bias_index(l, r)] = uniform_real(rng, -bound, bound);
    }
  }
  return params;
}

namespace {

double activate(Activation a, double x) {
  switch (a) {
    case Activation::relu: return x > 0.0 ? x : 0.0;
    case Activation::tanh: return std::tanh(x);
    case Activation::identity: return x;
  }
  return x;
}

// Derivative expressed through the pre-activation and the activation output.
double activate_derivative(Activation a, double pre, double out) {
  switch (a) {
    case Activation::relu: return pre > 0.0 ? 1.0 : 0.0;
    case Activation::tanh: return 1.0 - out * out;
    case Activation::identity: return 1.0;
  }
  return 1.0;
}

struct ForwardTrace {
  // activations[0] is the input; activations[l + 1] the output of layer l.
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> activations;
};

void check_shapes(const MLPSpec& spec, const ParamVector& params, std::size_t input_width) {
  spec.validate();
  require(params.size() == spec.param_count() && params.has_bias() == spec.bias,
          "mlp: parameter vector does not match spec");
  require(input_width == spec.input_width(), "mlp: input width mismatch");
}

ForwardTrace forward_trace(const MLPSpec& spec, const ParamVector& params,
                           std::span<const double> input) {
  ForwardTrace trace;
  trace.activations.emplace_back(input.begin(), input.end());
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    const auto& x = trace.activations.back();
    const std::size_t out_width = spec.layer_widths[l + 1];
    const std::size_t in_width = spec.layer_widths[l];
    const Activation act = spec.activation(l);
    std::vector<double> z(out_width);
    std::vector<double> y(out_width);
    for (std::size_t r = 0; r < out_width; ++r) {
      double acc = spec.bias ? params[params.bias_index(l, r)] : 0.0;
      const std::size_t row = params.weight_index(l, r, 0);
      for (std::size_t c = 0; c < in_width; ++c) acc += params[row + c] * x[c];
      z[r] = acc;
      y[r] = activate(act, acc);
    }
    trace.pre.push_back(std::move(z));
    trace.activations.push_back(std::move(y));
  }
  return trace;
}

}  // namespace

std::vector<double> mlp_forward(const MLPSpec& spec, const ParamVector& params,
                                std::span<const double> input) {
  check_shapes(spec, params, input.size());
  auto trace = forward_trace(spec, params, input);
  return std::move(trace.activations.back());
}

MlpGradient mlp_backward_full(const MLPSpec& spec, const ParamVector& params,
                              std::span<const double> input,
                              std::span<const double> output_grad) {
  check_shapes(spec, params, input.size());
  require(output_grad.size() == spec.output_width(), "mlp_backward: output gradient width mismatch");

  const auto trace = forward_trace(spec, params, input);
  MlpGradient grad{ParamVector(spec), {}};
  std::vector<double> upstream(output_grad.begin(), output_grad.end());

  for (std::size_t l = spec.num_layers(); l-- > 0;) {
    const std::size_t out_width = spec.layer_widths[l + 1];
    const std::size_t in_width = spec.layer_widths[l];
    const Activation act = spec.activation(l);
    const auto& x = trace.activations[l];
    std::vector<double> downstream(in_width, 0.0);
    for (std::size_t r = 0; r < out_width; ++r) {
      const double dz = upstream[r] * activate_derivative(act, trace.pre[l][r], trace.activations[l + 1][r]);
      if (spec.bias) grad.params[grad.params.bias_index(l, r)] = dz;
      const std::size_t row = params.weight_index(l, r, 0);
      for (std::size_t c = 0; c < in_width; ++c) {
        grad.params[row + c] = dz * x[c];
        downstream[c] += dz * params[row + c];
      }
    }
    upstream = std::move(downstream);
  }
  grad.input = std::move(upstream);
  return grad;
}

ParamVector mlp_backward(const MLPSpec& spec, const ParamVector& params,
                         std::span<const double> input,
                         std::span<const double> output_grad) {
  return mlp_backward_full(spec, params, input, output_grad).params;
}

}  // namespace hindsight::approx
