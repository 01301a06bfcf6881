#include "seac/agent/policy.h"

#include <algorithm>
#include <stdexcept>

namespace seac {

std::vector<nn::ActionDim> action_dims(const SacConfig& sac, const EnvConfig& env) {
  std::vector<nn::ActionDim> dims;
  if (sac.mode == Algo::Seac) {
    const auto kind = sac.time_activation == TimeActivation::TanhAffine ? nn::SquashKind::TanhAffine
                                                                        : nn::SquashKind::Relu6Affine;
    dims.push_back({kind, env.duration_min, env.duration_max});
  }
  dims.push_back({nn::SquashKind::TanhAffine, -env.force_bound, env.force_bound});
  dims.push_back({nn::SquashKind::TanhAffine, -env.force_bound, env.force_bound});
  return dims;
}

template <typename T>
PolicyBatch<T> evaluate_policy(const nn::MlpParams<T>& actor, std::span<const nn::ActionDim> dims,
                               const nn::Matrix<T>& obs, const nn::Matrix<T>& noise) {
  const auto d = static_cast<Eigen::Index>(dims.size());
  if (actor.output_dim() != 2 * d) throw std::invalid_argument("actor output must be 2 x action dim");
  const Eigen::Index batch = obs.cols();
  if (noise.rows() != d || noise.cols() != batch) throw std::invalid_argument("noise shape mismatch");

  PolicyBatch<T> pb;
  const nn::Matrix<T> out = nn::forward(actor, obs, &pb.cache);
  pb.canonical.resize(d, batch);
  pb.action.resize(d, batch);
  pb.log_std.resize(d, batch);
  pb.log_prob = nn::Vector<T>::Zero(batch);
  pb.dlogp_dmean.resize(d, batch);
  pb.dlogp_dlogstd.resize(d, batch);
  pb.dcanon_dmean.resize(d, batch);
  pb.dcanon_dlogstd.resize(d, batch);
  pb.std_active.resize(d, batch);

  const T lo = static_cast<T>(nn::kLogStdMin);
  const T hi = static_cast<T>(nn::kLogStdMax);
  for (Eigen::Index b = 0; b < batch; ++b) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const T raw = out(d + i, b);
      const T ls = std::clamp(raw, lo, hi);
      const auto s = nn::sample_dim<T>(dims[static_cast<std::size_t>(i)], out(i, b), ls, noise(i, b));
      pb.canonical(i, b) = s.canonical;
      pb.action(i, b) = s.action;
      pb.log_std(i, b) = ls;
      pb.log_prob(b) += s.log_prob;
      pb.dlogp_dmean(i, b) = s.dlogp_dmean;
      pb.dlogp_dlogstd(i, b) = s.dlogp_dlogstd;
      pb.dcanon_dmean(i, b) = s.dcanon_dmean;
      pb.dcanon_dlogstd(i, b) = s.dcanon_dlogstd;
      pb.std_active(i, b) = (raw > lo && raw < hi) ? T(1) : T(0);
    }
  }
  return pb;
}

template <typename T>
void backward_policy(const nn::MlpParams<T>& actor, const PolicyBatch<T>& pb,
                     const nn::Matrix<T>& grad_canonical, const nn::Vector<T>& grad_log_prob,
                     nn::MlpParams<T>& grads) {
  const Eigen::Index d = pb.canonical.rows();
  nn::Matrix<T> g_out(2 * d, pb.canonical.cols());
  const auto glp = grad_log_prob.transpose().replicate(d, 1);
  g_out.topRows(d) = grad_canonical.cwiseProduct(pb.dcanon_dmean) + glp.cwiseProduct(pb.dlogp_dmean);
  g_out.bottomRows(d) = (grad_canonical.cwiseProduct(pb.dcanon_dlogstd) + glp.cwiseProduct(pb.dlogp_dlogstd))
                            .cwiseProduct(pb.std_active);
  nn::backward(actor, pb.cache, g_out, &grads);
}

template <typename T>
nn::Vector<T> canonical_from_action(const ElasticAction& a, std::span<const nn::ActionDim> dims) {
  const double phys[3] = {a.duration, a.force.x, a.force.y};
  const std::size_t offset = dims.size() == 3 ? 0 : 1;
  nn::Vector<T> c(static_cast<Eigen::Index>(dims.size()));
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const auto& dim = dims[i];
    c(static_cast<Eigen::Index>(i)) =
        static_cast<T>(2.0 * (phys[i + offset] - dim.low) / (dim.high - dim.low) - 1.0);
  }
  return c;
}

template <typename T>
Policy<T>::Policy(nn::MlpParams<T> actor, const SacConfig& sac, const EnvConfig& env)
    : actor_(std::move(actor)), dims_(action_dims(sac, env)), mode_(sac.mode),
      fixed_duration_(sac.fixed_duration) {
  if (actor_.input_dim() != kObservationDim || actor_.output_dim() != 2 * action_dim()) {
    throw std::invalid_argument("actor shape does not match the " + to_string(sac.mode) + " action layout");
  }
}

template <typename T>
ElasticAction Policy<T>::act(const Observation& obs, bool stochastic, std::mt19937_64& rng) const {
  std::vector<T> noise(dims_.size(), T(0));
  if (stochastic) {
    std::normal_distribution<double> n01(0.0, 1.0);
    for (auto& e : noise) e = static_cast<T>(n01(rng));
  }
  return act_with_noise(obs, noise);
}

template <typename T>
ElasticAction Policy<T>::act_with_noise(const Observation& obs, std::span<const T> noise) const {
  nn::Matrix<T> x(kObservationDim, 1);
  for (int i = 0; i < kObservationDim; ++i) x(i, 0) = static_cast<T>(obs[static_cast<std::size_t>(i)]);
  nn::Matrix<T> eps(action_dim(), 1);
  for (int i = 0; i < action_dim(); ++i) eps(i, 0) = noise[static_cast<std::size_t>(i)];
  const PolicyBatch<T> pb = evaluate_policy(actor_, dims_, x, eps);

  ElasticAction a;
  int k = 0;
  if (mode_ == Algo::Seac) {
    a.duration = std::clamp(static_cast<double>(pb.action(k++, 0)), dims_[0].low, dims_[0].high);
  } else {
    a.duration = fixed_duration_;
  }
  const double fb = dims_[static_cast<std::size_t>(k)].high;
  a.force.x = std::clamp(static_cast<double>(pb.action(k++, 0)), -fb, fb);
  a.force.y = std::clamp(static_cast<double>(pb.action(k, 0)), -fb, fb);
  return a;
}

#define SEAC_INSTANTIATE_POLICY(T)                                                                  \
  template struct PolicyBatch<T>;                                                                   \
  template PolicyBatch<T> evaluate_policy<T>(const nn::MlpParams<T>&, std::span<const nn::ActionDim>, \
                                             const nn::Matrix<T>&, const nn::Matrix<T>&);           \
  template void backward_policy<T>(const nn::MlpParams<T>&, const PolicyBatch<T>&,                  \
                                   const nn::Matrix<T>&, const nn::Vector<T>&, nn::MlpParams<T>&);  \
  template nn::Vector<T> canonical_from_action<T>(const ElasticAction&,                             \
                                                  std::span<const nn::ActionDim>);                  \
  template class Policy<T>;

SEAC_INSTANTIATE_POLICY(float)
SEAC_INSTANTIATE_POLICY(double)

}  // namespace seac
