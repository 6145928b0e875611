#include "hindsight/qcore/replay_buffer.hpp"

#include "hindsight/common/error.hpp"

namespace hindsight::qcore {

HindsightBuffer::HindsightBuffer(std::size_t capacity, std::uint64_t seed)
    : capacity_(capacity), rng_(seed) {
  require(capacity > 0, "HindsightBuffer capacity must be positive");
  slots_.reserve(capacity);
}

void HindsightBuffer::push(Transition t) {
  if (slots_.size() < capacity_) {
    slots_.push_back(std::move(t));
  } else {
    slots_[head_] = std::move(t);
  }
  head_ = (head_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

const Transition& HindsightBuffer::at(std::size_t i) const {
  require(i < size_, "HindsightBuffer::at out of range");
  const std::size_t oldest = (head_ + capacity_ - size_) % capacity_;
  return slots_[(oldest + i) % capacity_];
}

std::optional<std::vector<Transition>> HindsightBuffer::sample(std::size_t n) {
  if (!ready(n)) return std::nullopt;
  std::vector<Transition> batch;
  batch.reserve(n);
  for (std::size_t k = 0; k < n; ++k) batch.push_back(at(uniform_index(rng_, size_)));
  return batch;
}

}  // namespace hindsight::qcore
