#include "seac/nn/adam.h"

#include <cmath>
#include <stdexcept>

namespace seac::nn {

template <typename T>
void adam_update(std::span<T> param, std::span<T> m, std::span<T> v, std::span<const T> grad,
                 std::int64_t step, const AdamConfig& cfg) {
  if (param.size() != m.size() || param.size() != v.size() || param.size() != grad.size()) {
    throw std::invalid_argument("adam_update size mismatch");
  }
  const T b1 = static_cast<T>(cfg.beta1);
  const T b2 = static_cast<T>(cfg.beta2);
  const T bc1 = static_cast<T>(1.0 - std::pow(cfg.beta1, static_cast<double>(step)));
  const T bc2 = static_cast<T>(1.0 - std::pow(cfg.beta2, static_cast<double>(step)));
  const T lr = static_cast<T>(cfg.lr);
  const T eps = static_cast<T>(cfg.eps);

  using Arr = Eigen::Array<T, Eigen::Dynamic, 1>;
  const auto n = static_cast<Eigen::Index>(param.size());
  Eigen::Map<Arr> p(param.data(), n);
  Eigen::Map<Arr> mm(m.data(), n);
  Eigen::Map<Arr> vv(v.data(), n);
  Eigen::Map<const Arr> g(grad.data(), n);
  mm = b1 * mm + (T(1) - b1) * g;
  vv = b2 * vv + (T(1) - b2) * g.square();
  p -= lr * (mm / bc1) / ((vv / bc2).sqrt() + eps);
}

template <typename T>
void adam_step(AdamState<T>& state, MlpParams<T>& params, const MlpParams<T>& grads) {
  if (!params.same_shape(grads) || !params.same_shape(state.m)) {
    throw std::invalid_argument("adam_step shape mismatch");
  }
  ++state.step;
  auto span_of = [](auto& mat) { return std::span<T>(mat.data(), static_cast<std::size_t>(mat.size())); };
  auto cspan_of = [](const auto& mat) {
    return std::span<const T>(mat.data(), static_cast<std::size_t>(mat.size()));
  };
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    adam_update<T>(span_of(params.layers[l].weight), span_of(state.m.layers[l].weight),
                   span_of(state.v.layers[l].weight), cspan_of(grads.layers[l].weight), state.step,
                   state.config);
    adam_update<T>(span_of(params.layers[l].bias), span_of(state.m.layers[l].bias),
                   span_of(state.v.layers[l].bias), cspan_of(grads.layers[l].bias), state.step,
                   state.config);
  }
}

void ScalarAdam::apply(double& param, double grad) {
  ++step;
  adam_update<double>(std::span<double>(&param, 1), std::span<double>(&m, 1),
                      std::span<double>(&v, 1), std::span<const double>(&grad, 1), step, config);
}

template void adam_update<float>(std::span<float>, std::span<float>, std::span<float>,
                                 std::span<const float>, std::int64_t, const AdamConfig&);
template void adam_update<double>(std::span<double>, std::span<double>, std::span<double>,
                                  std::span<const double>, std::int64_t, const AdamConfig&);
template void adam_step<float>(AdamState<float>&, MlpParams<float>&, const MlpParams<float>&);
template void adam_step<double>(AdamState<double>&, MlpParams<double>&, const MlpParams<double>&);

}  // namespace seac::nn
