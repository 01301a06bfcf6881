#include "seac/agent/replay_buffer.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace seac {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay buffer capacity must be positive");
}

void ReplayBuffer::push(const Transition& t) {
  float row[kRow];
  std::size_t k = 0;
  for (double v : t.state) row[k++] = static_cast<float>(v);
  for (double v : t.action) row[k++] = static_cast<float>(v);
  row[k++] = static_cast<float>(t.reward);
  for (double v : t.next_state) row[k++] = static_cast<float>(v);
  row[k++] = t.done ? 1.0f : 0.0f;
  row[k++] = t.terminal ? 1.0f : 0.0f;

  if (size_ < capacity_) {
    data_.insert(data_.end(), row, row + kRow);
    ++size_;
  } else {
    std::copy(row, row + kRow, data_.begin() + static_cast<std::ptrdiff_t>(cursor_ * kRow));
  }
  cursor_ = (cursor_ + 1) % capacity_;
}

std::size_t ReplayBuffer::physical(std::size_t logical) const {
  if (logical >= size_) throw std::out_of_range("replay buffer index out of range");
  return size_ < capacity_ ? logical : (cursor_ + logical) % capacity_;
}

Transition ReplayBuffer::at(std::size_t i) const {
  const float* row = data_.data() + physical(i) * kRow;
  Transition t;
  std::size_t k = 0;
  for (auto& v : t.state) v = row[k++];
  for (auto& v : t.action) v = row[k++];
  t.reward = row[k++];
  for (auto& v : t.next_state) v = row[k++];
  t.done = row[k++] != 0.0f;
  t.terminal = row[k++] != 0.0f;
  return t;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t n, std::mt19937_64& rng) const {
  if (n > size_) throw std::invalid_argument("cannot sample more transitions than stored");
  // Floyd's algorithm: n distinct values without materializing [0, size).
  std::vector<std::size_t> out;
  out.reserve(n);
  std::unordered_set<std::size_t> seen;
  seen.reserve(2 * n);
  for (std::size_t j = size_ - n; j < size_; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, j);
    const std::size_t t = pick(rng);
    const std::size_t chosen = seen.insert(t).second ? t : j;
    if (chosen == j) seen.insert(j);
    out.push_back(chosen);
  }
  return out;
}

template <typename T>
Batch<T> ReplayBuffer::gather(const std::vector<std::size_t>& indices) const {
  const auto n = static_cast<Eigen::Index>(indices.size());
  Batch<T> b;
  b.state.resize(kObservationDim, n);
  b.action.resize(3, n);
  b.reward.resize(n);
  b.next_state.resize(kObservationDim, n);
  b.terminal.resize(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const float* row = data_.data() + physical(indices[static_cast<std::size_t>(c)]) * kRow;
    std::size_t k = 0;
    for (int i = 0; i < kObservationDim; ++i) b.state(i, c) = static_cast<T>(row[k++]);
    for (int i = 0; i < 3; ++i) b.action(i, c) = static_cast<T>(row[k++]);
    b.reward(c) = static_cast<T>(row[k++]);
    for (int i = 0; i < kObservationDim; ++i) b.next_state(i, c) = static_cast<T>(row[k++]);
    ++k;  // done
    b.terminal(c) = static_cast<T>(row[k]);
  }
  return b;
}

void ReplayBuffer::save(std::ostream& out) const {
  const std::uint64_t header[3] = {capacity_, size_, cursor_};
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  out.write(reinterpret_cast<const char*>(data_.data()),
            static_cast<std::streamsize>(data_.size() * sizeof(float)));
}

void ReplayBuffer::load(std::istream& in) {
  std::uint64_t header[3];
  if (!in.read(reinterpret_cast<char*>(header), sizeof header)) {
    throw std::runtime_error("replay buffer state truncated");
  }
  if (header[0] != capacity_) throw std::runtime_error("replay buffer capacity mismatch");
  if (header[1] > header[0] || header[2] >= header[0]) throw std::runtime_error("replay buffer header corrupt");
  size_ = header[1];
  cursor_ = header[2];
  data_.assign(size_ * kRow, 0.0f);
  if (!in.read(reinterpret_cast<char*>(data_.data()), static_cast<std::streamsize>(data_.size() * sizeof(float)))) {
    throw std::runtime_error("replay buffer state truncated");
  }
}

template Batch<float> ReplayBuffer::gather<float>(const std::vector<std::size_t>&) const;
template Batch<double> ReplayBuffer::gather<double>(const std::vector<std::size_t>&) const;

}  // namespace seac
