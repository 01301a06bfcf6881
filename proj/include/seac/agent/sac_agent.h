#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>

#include "seac/agent/policy.h"
#include "seac/agent/replay_buffer.h"
#include "seac/agent/sac_config.h"
#include "seac/nn/adam.h"
#include "seac/nn/checkpoint.h"
#include "seac/nn/mlp.h"

namespace seac {

// Loss building blocks. Each optionally accumulates parameter gradients so the
// same code path serves training and the finite-difference checks.

/// Stacks observations over canonical actions: (11 + d) x B critic input.
template <typename T>
nn::Matrix<T> critic_input(const nn::Matrix<T>& obs, const nn::Matrix<T>& canonical);

/// Replay actions (3 x B, physical) -> canonical policy coordinates (d x B).
template <typename T>
nn::Matrix<T> canonical_actions(const nn::Matrix<T>& physical, std::span<const nn::ActionDim> dims);

/// mean((Q(input) - y)^2).
template <typename T>
T critic_loss(const nn::MlpParams<T>& critic, const nn::Matrix<T>& input, const nn::Vector<T>& y,
              nn::MlpParams<T>* grads);

template <typename T>
struct ActorLoss {
  T loss{};
  nn::Vector<T> log_prob;
};

/// mean(alpha * log pi(a|s) - min(Q1, Q2)(s, a)) with a reparameterized by `noise`.
template <typename T>
ActorLoss<T> actor_loss(const nn::MlpParams<T>& actor, std::span<const nn::ActionDim> dims,
                        const nn::MlpParams<T>& q1, const nn::MlpParams<T>& q2,
                        const nn::Matrix<T>& obs, const nn::Matrix<T>& noise, T alpha,
                        nn::MlpParams<T>* grads);

/// y = r + gamma * (1 - terminal) * (min(Q1', Q2')(s', a') - alpha * log pi(a'|s')).
template <typename T>
nn::Vector<T> critic_target(const Batch<T>& batch, std::span<const nn::ActionDim> dims,
                            const nn::MlpParams<T>& actor, const nn::MlpParams<T>& q1_target,
                            const nn::MlpParams<T>& q2_target, const nn::Matrix<T>& next_noise,
                            T alpha, T gamma);

/// -log_alpha * mean(log_prob + eta); writes d/dlog_alpha into `grad` when non-null.
template <typename T>
double temperature_loss(double log_alpha, const nn::Vector<T>& log_prob, double eta, double* grad);

struct UpdateStats {
  double critic1_loss = 0.0;
  double critic2_loss = 0.0;
  double actor_loss = 0.0;
  double alpha = 0.0;
  double mean_log_prob = 0.0;
};

/// Twin-critic soft actor-critic whose action optionally includes the step duration.
template <typename T>
class SacAgent {
 public:
  SacAgent(const SacConfig& sac, const EnvConfig& env, std::uint64_t init_seed);

  ElasticAction select_action(const Observation& obs, bool stochastic, std::mt19937_64& rng) const {
    return policy_.act(obs, stochastic, rng);
  }

  nn::Vector<T> compute_targets(const Batch<T>& batch, const nn::Matrix<T>& next_noise) const;
  /// One Adam step per critic towards `y`; returns both losses.
  std::pair<T, T> update_critics(const Batch<T>& batch, const nn::Vector<T>& y);
  ActorLoss<T> update_actor(const Batch<T>& batch, const nn::Matrix<T>& noise);
  /// No-op unless auto_alpha is enabled. Returns the new alpha.
  double update_temperature(const nn::Vector<T>& log_prob);
  void update_targets();

  /// Full gradient update on one minibatch; noise comes from `rng`.
  UpdateStats update(const Batch<T>& batch, std::mt19937_64& rng);

  double alpha() const;
  double log_alpha() const { return log_alpha_; }
  std::int64_t update_count() const { return updates_; }
  const SacConfig& config() const { return sac_; }
  const Policy<T>& policy() const { return policy_; }
  Policy<T>& policy() { return policy_; }
  std::span<const nn::ActionDim> dims() const { return policy_.dims(); }

  const nn::MlpParams<T>& critic(int i) const { return i == 0 ? q1_ : q2_; }
  nn::MlpParams<T>& critic(int i) { return i == 0 ? q1_ : q2_; }
  const nn::MlpParams<T>& target_critic(int i) const { return i == 0 ? q1_target_ : q2_target_; }
  nn::MlpParams<T>& target_critic(int i) { return i == 0 ? q1_target_ : q2_target_; }

  /// Policy-only checkpoint, loadable by evaluation.
  nn::Checkpoint policy_checkpoint(const EnvConfig& env) const;
  /// Everything needed to resume training (networks, targets, optimizer moments).
  nn::Checkpoint full_checkpoint(const EnvConfig& env) const;
  void restore(const nn::Checkpoint& ckpt);

 private:
  SacConfig sac_;
  Policy<T> policy_;
  nn::MlpParams<T> q1_, q2_, q1_target_, q2_target_;
  nn::AdamState<T> actor_opt_, q1_opt_, q2_opt_;
  nn::ScalarAdam alpha_opt_;
  double log_alpha_;
  std::int64_t updates_ = 0;
};

/// Reads the policy stored by policy_checkpoint()/full_checkpoint(), checking that
/// it matches the algorithm and action layout implied by the configs.
Policy<float> load_policy(const nn::Checkpoint& ckpt, const SacConfig& sac, const EnvConfig& env);

}  // namespace seac
