#include "hindsight/approx/dueling.hpp"

#include "hindsight/common/error.hpp"

namespace hindsight::approx {

std::vector<double> dueling_aggregate(std::span<const double> advantages, double state_value) {
  require(!advantages.empty(), "dueling_aggregate: empty advantage sequence");
  double mean = 0.0;
  for (double a : advantages) mean += a;
  mean /= static_cast<double>(advantages.size());
  std::vector<double> q(advantages.size());
  for (std::size_t i = 0; i < advantages.size(); ++i) q[i] = advantages[i] - mean + state_value;
  return q;
}

void DuelingSpec::validate() const {
  shared.validate();
  advantage.validate();
  value.validate();
  require(advantage.input_width() == shared.output_width() &&
              value.input_width() == shared.output_width(),
          "DuelingSpec: stream inputs must match the shared trunk output");
  require(value.output_width() == 1, "DuelingSpec: value stream must have one output");
}

DuelingHead init_dueling_head(const DuelingSpec& spec, Rng& rng) {
  spec.validate();
  DuelingHead head{spec, init_params(spec.shared, rng), {}, {}};
  head.advantage_params = init_params(spec.advantage, rng);
  head.value_params = init_params(spec.value, rng);
  return head;
}

std::vector<double> dueling_forward(const DuelingSpec& spec, const ParamVector& shared,
                                    const ParamVector& advantage, const ParamVector& value,
                                    std::span<const double> input) {
  const auto features = mlp_forward(spec.shared, shared, input);
  const auto adv = mlp_forward(spec.advantage, advantage, features);
  const auto state_value = mlp_forward(spec.value, value, features);
  return dueling_aggregate(adv, state_value[0]);
}

std::vector<double> dueling_forward(const DuelingHead& head, std::span<const double> input) {
  return dueling_forward(head.spec, head.shared_params, head.advantage_params,
                         head.value_params, input);
}

DuelingGradient dueling_backward(const DuelingHead& head, std::span<const double> input,
                                 std::span<const double> output_grad) {
  return dueling_backward(head.spec, head.shared_params, head.advantage_params,
                          head.value_params, input, output_grad);
}

DuelingGradient dueling_backward(const DuelingSpec& spec, const ParamVector& shared,
                                 const ParamVector& advantage, const ParamVector& value,
                                 std::span<const double> input,
                                 std::span<const double> output_grad) {
  require(output_grad.size() == spec.num_actions(),
          "dueling_backward: output gradient width mismatch");
  const auto features = mlp_forward(spec.shared, shared, input);

  // d q[a] / d adv[k] = [a == k] - 1/n ; d q[a] / d value = 1
  double grad_sum = 0.0;
  for (double g : output_grad) grad_sum += g;
  const double grad_mean = grad_sum / static_cast<double>(output_grad.size());
  std::vector<double> adv_grad(output_grad.size());
  for (std::size_t i = 0; i < output_grad.size(); ++i) adv_grad[i] = output_grad[i] - grad_mean;
  const double value_grad[] = {grad_sum};

  auto adv = mlp_backward_full(spec.advantage, advantage, features, adv_grad);
  auto val = mlp_backward_full(spec.value, value, features, value_grad);
  std::vector<double> feature_grad(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) feature_grad[i] = adv.input[i] + val.input[i];

  return DuelingGradient{
      mlp_backward(spec.shared, shared, input, feature_grad),
      std::move(adv.params), std::move(val.params)};
}

}  // namespace hindsight::approx
