#pragma once

#include <cstdint>
#include <span>

#include "seac/nn/mlp.h"

namespace seac::nn {

struct AdamConfig {
  double lr = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Bias-corrected Adam on a flat block of parameters. `step` is the 1-based
/// index of this update.
template <typename T>
void adam_update(std::span<T> param, std::span<T> m, std::span<T> v, std::span<const T> grad,
                 std::int64_t step, const AdamConfig& cfg);

template <typename T>
struct AdamState {
  AdamConfig config;
  MlpParams<T> m;
  MlpParams<T> v;
  std::int64_t step = 0;

  AdamState() = default;
  AdamState(const MlpParams<T>& like, AdamConfig cfg)
      : config(cfg), m(like.zeros_like()), v(like.zeros_like()) {}
};

template <typename T>
void adam_step(AdamState<T>& state, MlpParams<T>& params, const MlpParams<T>& grads);

/// Adam for a single scalar parameter such as the log temperature.
struct ScalarAdam {
  AdamConfig config;
  double m = 0.0;
  double v = 0.0;
  std::int64_t step = 0;

  void apply(double& param, double grad);
};

}  // namespace seac::nn
