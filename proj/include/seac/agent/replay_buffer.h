#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "seac/env/point_mass_env.h"
#include "seac/nn/mlp.h"

namespace seac {

struct Transition {
  Observation state{};
  std::array<double, 3> action{};  // duration, fx, fy
  double reward = 0.0;
  Observation next_state{};
  bool done = false;      // episode ended here, for any reason
  bool terminal = false;  // goal or crash: no bootstrapping past this step
};

/// Columns of a sampled minibatch, one transition per column.
template <typename T>
struct Batch {
  nn::Matrix<T> state;       // 11 x B
  nn::Matrix<T> action;      // 3 x B
  nn::Vector<T> reward;      // B
  nn::Matrix<T> next_state;  // 11 x B
  nn::Vector<T> terminal;    // B, 1 for goal/crash
};

/// Fixed-capacity FIFO ring of transitions stored in single precision.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(const Transition& t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  /// Logical index 0 is the oldest stored transition.
  Transition at(std::size_t i) const;

  /// `n` distinct indices drawn uniformly from [0, size()).
  std::vector<std::size_t> sample_indices(std::size_t n, std::mt19937_64& rng) const;

  template <typename T>
  Batch<T> gather(const std::vector<std::size_t>& indices) const;

  template <typename T>
  Batch<T> sample(std::size_t n, std::mt19937_64& rng) const {
    return gather<T>(sample_indices(n, rng));
  }

  void save(std::ostream& out) const;
  void load(std::istream& in);

 private:
  static constexpr std::size_t kRow = 2 * kObservationDim + 3 + 1 + 2;
  std::size_t physical(std::size_t logical) const;

  std::size_t capacity_;
  std::size_t size_ = 0;
  std::size_t cursor_ = 0;
  std::vector<float> data_;
};

}  // namespace seac
