#include "seac/nn/mlp.h"

#include <cmath>
#include <stdexcept>

namespace seac::nn {

template <typename T>
std::size_t MlpParams<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

template <typename T>
MlpParams<T> MlpParams<T>::zeros_like() const {
  MlpParams out;
  out.hidden = hidden;
  for (const auto& l : layers) {
    out.layers.push_back({Matrix<T>::Zero(l.weight.rows(), l.weight.cols()), Vector<T>::Zero(l.bias.size())});
  }
  return out;
}

template <typename T>
void MlpParams<T>::set_zero() {
  for (auto& l : layers) {
    l.weight.setZero();
    l.bias.setZero();
  }
}

template <typename T>
std::vector<T> MlpParams<T>::flatten() const {
  std::vector<T> flat;
  flat.reserve(parameter_count());
  for (const auto& l : layers) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) flat.push_back(l.weight(r, c));
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) flat.push_back(l.bias(r));
  }
  return flat;
}

template <typename T>
void MlpParams<T>::assign(std::span<const T> flat) {
  if (flat.size() != parameter_count()) throw std::invalid_argument("flat parameter size mismatch");
  std::size_t k = 0;
  for (auto& l : layers) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = flat[k++];
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = flat[k++];
  }
}

template <typename T>
bool MlpParams<T>::all_finite() const {
  for (const auto& l : layers) {
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  }
  return true;
}

template <typename T>
bool MlpParams<T>::same_shape(const MlpParams& other) const {
  if (layers.size() != other.layers.size()) return false;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].weight.rows() != other.layers[i].weight.rows() ||
        layers[i].weight.cols() != other.layers[i].weight.cols()) {
      return false;
    }
  }
  return true;
}

template <typename T>
MlpParams<T> make_mlp(std::span<const int> sizes, std::mt19937_64& rng, Activation hidden) {
  if (sizes.size() < 2) throw std::invalid_argument("an MLP needs at least input and output sizes");
  MlpParams<T> p;
  p.hidden = hidden;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    const int in = sizes[i];
    const int out = sizes[i + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> u(-bound, bound);
    Dense<T> layer{Matrix<T>(out, in), Vector<T>(out)};
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) layer.weight(r, c) = static_cast<T>(u(rng));
    }
    for (int r = 0; r < out; ++r) layer.bias(r) = static_cast<T>(u(rng));
    p.layers.push_back(std::move(layer));
  }
  return p;
}

template <typename T>
Matrix<T> forward(const MlpParams<T>& params, const Matrix<T>& input, MlpCache<T>* cache) {
  if (input.rows() != params.input_dim()) throw std::invalid_argument("MLP input size mismatch");
  if (cache) cache->inputs.resize(params.layers.size());

  Matrix<T> x = input;
  const std::size_t last = params.layers.size() - 1;
  for (std::size_t l = 0; l <= last; ++l) {
    const auto& layer = params.layers[l];
    Matrix<T> z = layer.weight * x;
    z.colwise() += layer.bias;
    if (l < last && params.hidden == Activation::Relu) z = z.cwiseMax(T(0));
    if (cache) {
      cache->inputs[l] = std::move(x);
    }
    x = std::move(z);
  }
  return x;
}

template <typename T>
Matrix<T> backward(const MlpParams<T>& params, const MlpCache<T>& cache, const Matrix<T>& grad_out,
                   MlpParams<T>* grads) {
  Matrix<T> g = grad_out;
  for (std::size_t l = params.layers.size(); l-- > 0;) {
    const auto& layer = params.layers[l];
    const Matrix<T>& in = cache.inputs[l];
    if (grads) {
      grads->layers[l].weight.noalias() += g * in.transpose();
      grads->layers[l].bias += g.rowwise().sum();
    }
    Matrix<T> gin = layer.weight.transpose() * g;
    if (l > 0 && params.hidden == Activation::Relu) {
      gin = (in.array() > T(0)).select(gin, T(0));
    }
    g = std::move(gin);
  }
  return g;
}

template <typename T>
void polyak_update(MlpParams<T>& target, const MlpParams<T>& online, T tau) {
  if (!target.same_shape(online)) throw std::invalid_argument("polyak_update shape mismatch");
  for (std::size_t l = 0; l < target.layers.size(); ++l) {
    auto& t = target.layers[l];
    const auto& o = online.layers[l];
    t.weight = (T(1) - tau) * t.weight + tau * o.weight;
    t.bias = (T(1) - tau) * t.bias + tau * o.bias;
  }
}

#define SEAC_INSTANTIATE_MLP(T)                                                                   \
  template struct MlpParams<T>;                                                                   \
  template MlpParams<T> make_mlp<T>(std::span<const int>, std::mt19937_64&, Activation);          \
  template Matrix<T> forward<T>(const MlpParams<T>&, const Matrix<T>&, MlpCache<T>*);             \
  template Matrix<T> backward<T>(const MlpParams<T>&, const MlpCache<T>&, const Matrix<T>&,       \
                                 MlpParams<T>*);                                                  \
  template void polyak_update<T>(MlpParams<T>&, const MlpParams<T>&, T);

SEAC_INSTANTIATE_MLP(float)
SEAC_INSTANTIATE_MLP(double)

}  // namespace seac::nn
