#include "hindsight/approx/q_network.hpp"

#include "hindsight/common/error.hpp"

namespace hindsight::approx {

QNetwork QNetwork::make_mlp(const MLPSpec& spec, Rng& rng) {
  return QNetwork(spec, init_params(spec, rng));
}

QNetwork QNetwork::make_dueling(const DuelingSpec& spec, Rng& rng) {
  return QNetwork(init_dueling_head(spec, rng));
}

QNetwork::QNetwork(MLPSpec spec, ParamVector params) : spec_(std::move(spec)) {
  const auto& mlp = std::get<MLPSpec>(spec_);
  mlp.validate();
  require(params.size() == mlp.param_count(), "QNetwork: parameters do not match spec");
  blocks_.push_back(std::move(params));
}

QNetwork::QNetwork(DuelingHead head) : spec_(head.spec) {
  head.spec.validate();
  blocks_.push_back(std::move(head.shared_params));
  blocks_.push_back(std::move(head.advantage_params));
  blocks_.push_back(std::move(head.value_params));
}

std::size_t QNetwork::num_actions() const {
  if (const auto* mlp = std::get_if<MLPSpec>(&spec_)) return mlp->output_width();
  return std::get<DuelingSpec>(spec_).num_actions();
}

std::size_t QNetwork::input_width() const {
  if (const auto* mlp = std::get_if<MLPSpec>(&spec_)) return mlp->input_width();
  return std::get<DuelingSpec>(spec_).shared.input_width();
}

std::vector<double> QNetwork::q_values(std::span<const double> input) const {
  if (const auto* mlp = std::get_if<MLPSpec>(&spec_)) return mlp_forward(*mlp, blocks_[0], input);
  return dueling_forward(std::get<DuelingSpec>(spec_), blocks_[0], blocks_[1], blocks_[2], input);
}

QNetwork::Blocks QNetwork::gradient(std::span<const double> input,
                                    std::span<const double> output_grad) const {
  Blocks grad;
  if (const auto* mlp = std::get_if<MLPSpec>(&spec_)) {
    grad.push_back(mlp_backward(*mlp, blocks_[0], input, output_grad));
    return grad;
  }
  auto g = dueling_backward(std::get<DuelingSpec>(spec_), blocks_[0], blocks_[1], blocks_[2],
                            input, output_grad);
  grad.push_back(std::move(g.shared_params));
  grad.push_back(std::move(g.advantage_params));
  grad.push_back(std::move(g.value_params));
  return grad;
}

void QNetwork::add_scaled(const Blocks& step, double scale) {
  require(step.size() == blocks_.size(), "QNetwork::add_scaled: block count mismatch");
  for (std::size_t b = 0; b < blocks_.size(); ++b) blocks_[b].add_scaled(step[b], scale);
}

std::vector<double> QNetwork::flat_params() const {
  std::vector<double> flat;
  for (const auto& block : blocks_) {
    flat.insert(flat.end(), block.values().begin(), block.values().end());
  }
  return flat;
}

bool QNetwork::same_layout(const QNetwork& other) const {
  if (spec_ != other.spec_ || blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (!blocks_[b].same_layout(other.blocks_[b])) return false;
  }
  return true;
}

bool QNetwork::all_finite() const {
  for (const auto& block : blocks_) {
    if (!block.all_finite()) return false;
  }
  return true;
}

QNetwork::Blocks zero_blocks_like(const QNetwork::Blocks& like) {
  QNetwork::Blocks zeros = like;
  for (auto& block : zeros) {
    for (double& v : block.values()) v = 0.0;
  }
  return zeros;
}

}  // namespace hindsight::approx
