#pragma once

#include <random>
#include <span>
#include <vector>

#include "seac/agent/sac_config.h"
#include "seac/env/env_config.h"
#include "seac/env/kinematics.h"
#include "seac/env/point_mass_env.h"
#include "seac/nn/mlp.h"
#include "seac/nn/squashed_gaussian.h"

namespace seac {

/// Output transforms of the actor: [duration, fx, fy] in elastic mode,
/// [fx, fy] in fixed-rate mode.
std::vector<nn::ActionDim> action_dims(const SacConfig& sac, const EnvConfig& env);

/// Batched reparameterized policy evaluation with everything backward needs.
/// Actor output rows: [0, d) means, [d, 2d) raw log standard deviations.
template <typename T>
struct PolicyBatch {
  nn::Matrix<T> canonical;  // d x B, in [-1, 1]
  nn::Matrix<T> action;     // d x B, physical units
  nn::Vector<T> log_prob;   // B, density of `canonical`
  nn::Matrix<T> log_std;    // d x B, clamped
  nn::Matrix<T> dlogp_dmean;
  nn::Matrix<T> dlogp_dlogstd;
  nn::Matrix<T> dcanon_dmean;
  nn::Matrix<T> dcanon_dlogstd;
  nn::Matrix<T> std_active;  // 1 where the raw log_std lies inside the clamp
  nn::MlpCache<T> cache;
};

template <typename T>
PolicyBatch<T> evaluate_policy(const nn::MlpParams<T>& actor, std::span<const nn::ActionDim> dims,
                               const nn::Matrix<T>& obs, const nn::Matrix<T>& noise);

/// Accumulates into `grads` the actor gradient of a loss whose partials are
/// dL/dcanonical (d x B) and dL/dlog_prob (B).
template <typename T>
void backward_policy(const nn::MlpParams<T>& actor, const PolicyBatch<T>& pb,
                     const nn::Matrix<T>& grad_canonical, const nn::Vector<T>& grad_log_prob,
                     nn::MlpParams<T>& grads);

/// Physical action (duration, fx, fy) -> canonical policy coordinates.
template <typename T>
nn::Vector<T> canonical_from_action(const ElasticAction& a, std::span<const nn::ActionDim> dims);

/// Actor network plus the transforms that turn its outputs into elastic actions.
template <typename T>
class Policy {
 public:
  Policy() = default;
  Policy(nn::MlpParams<T> actor, const SacConfig& sac, const EnvConfig& env);

  /// Stochastic mode samples standard normal noise from `rng`; deterministic
  /// mode uses zero noise. Fixed-rate mode always returns fixed_duration.
  ElasticAction act(const Observation& obs, bool stochastic, std::mt19937_64& rng) const;
  ElasticAction act_with_noise(const Observation& obs, std::span<const T> noise) const;

  const nn::MlpParams<T>& actor() const { return actor_; }
  nn::MlpParams<T>& actor() { return actor_; }
  std::span<const nn::ActionDim> dims() const { return dims_; }
  int action_dim() const { return static_cast<int>(dims_.size()); }
  Algo mode() const { return mode_; }

 private:
  nn::MlpParams<T> actor_;
  std::vector<nn::ActionDim> dims_;
  Algo mode_ = Algo::Seac;
  double fixed_duration_ = 0.2;
};

}  // namespace seac
