#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hindsight/common/random.hpp"
#include "hindsight/qcore/transition.hpp"

namespace hindsight::qcore {

/// Fixed-capacity FIFO replay memory that keeps behavior-time action values.
class HindsightBuffer {
 public:
  HindsightBuffer(std::size_t capacity, std::uint64_t seed);

  /// Appends `t`; evicts the oldest entry when full.
  void push(Transition t);

  /// n entries drawn uniformly with replacement, or nullopt while the buffer
  /// holds fewer than n transitions.
  std::optional<std::vector<Transition>> sample(std::size_t n);

  /// Restart the sampling generator.
  void reseed(std::uint64_t seed) { rng_.seed(seed); }

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  bool ready(std::size_t n) const { return n > 0 && size_ >= n; }

  /// i-th entry counting from the oldest.
  const Transition& at(std::size_t i) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // slot written by the next push
  std::size_t size_ = 0;
  std::vector<Transition> slots_;
  Rng rng_;
};

}  // namespace hindsight::qcore
