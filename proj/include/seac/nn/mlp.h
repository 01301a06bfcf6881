#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace seac::nn {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

enum class Activation : std::uint32_t { Identity = 0, Relu = 1 };

template <typename T>
struct Dense {
  Matrix<T> weight;  // out x in
  Vector<T> bias;    // out
};

/// Fully connected network: affine layers, `hidden` activation between them,
/// linear output. Batches are column-major: one sample per column.
template <typename T>
struct MlpParams {
  std::vector<Dense<T>> layers;
  Activation hidden = Activation::Relu;

  int input_dim() const { return static_cast<int>(layers.front().weight.cols()); }
  int output_dim() const { return static_cast<int>(layers.back().weight.rows()); }
  std::size_t parameter_count() const;

  /// Same shapes, all zeros.
  MlpParams zeros_like() const;
  void set_zero();

  /// Declaration order: per layer, weight row-major then bias.
  std::vector<T> flatten() const;
  void assign(std::span<const T> flat);

  template <typename U>
  MlpParams<U> cast() const {
    MlpParams<U> out;
    out.hidden = hidden;
    for (const auto& l : layers) out.layers.push_back({l.weight.template cast<U>(), l.bias.template cast<U>()});
    return out;
  }

  bool all_finite() const;
  bool same_shape(const MlpParams& other) const;
};

/// Builds a network with layer widths `sizes` (input first, output last) and
/// uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and biases.
template <typename T>
MlpParams<T> make_mlp(std::span<const int> sizes, std::mt19937_64& rng,
                      Activation hidden = Activation::Relu);

/// Activations kept by forward() for backward(). `inputs[l]` feeds layer l.
template <typename T>
struct MlpCache {
  std::vector<Matrix<T>> inputs;
};

template <typename T>
Matrix<T> forward(const MlpParams<T>& params, const Matrix<T>& input, MlpCache<T>* cache = nullptr);

/// Reverse pass. Accumulates parameter gradients into `grads` when non-null and
/// returns the gradient with respect to the network input.
template <typename T>
Matrix<T> backward(const MlpParams<T>& params, const MlpCache<T>& cache, const Matrix<T>& grad_out,
                   MlpParams<T>* grads);

/// target <- (1 - tau) * target + tau * online, elementwise.
template <typename T>
void polyak_update(MlpParams<T>& target, const MlpParams<T>& online, T tau);

}  // namespace seac::nn
