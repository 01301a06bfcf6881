#include "seac/agent/sac_agent.h"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace seac {
namespace {

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const nn::Checkpoint& ckpt, const std::string& key) {
  const std::string s = ckpt.tag(key);
  if (s.empty()) throw std::runtime_error("checkpoint is missing tag '" + key + "'");
  return std::stod(s);
}

template <typename T>
nn::Matrix<T> gaussian_noise(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  nn::Matrix<T> m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = static_cast<T>(n01(rng));
  }
  return m;
}

std::vector<int> layer_sizes(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

template <typename T>
nn::Matrix<T> critic_input(const nn::Matrix<T>& obs, const nn::Matrix<T>& canonical) {
  nn::Matrix<T> in(obs.rows() + canonical.rows(), obs.cols());
  in.topRows(obs.rows()) = obs;
  in.bottomRows(canonical.rows()) = canonical;
  return in;
}

template <typename T>
nn::Matrix<T> canonical_actions(const nn::Matrix<T>& physical, std::span<const nn::ActionDim> dims) {
  const auto d = static_cast<Eigen::Index>(dims.size());
  const Eigen::Index offset = physical.rows() - d;
  nn::Matrix<T> c(d, physical.cols());
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto& dim = dims[static_cast<std::size_t>(i)];
    const T scale = static_cast<T>(2.0 / (dim.high - dim.low));
    c.row(i) = (physical.row(offset + i).array() - static_cast<T>(dim.low)) * scale - T(1);
  }
  return c;
}

template <typename T>
T critic_loss(const nn::MlpParams<T>& critic, const nn::Matrix<T>& input, const nn::Vector<T>& y,
              nn::MlpParams<T>* grads) {
  nn::MlpCache<T> cache;
  const nn::Matrix<T> q = nn::forward(critic, input, grads ? &cache : nullptr);
  const nn::Matrix<T> err = q - y.transpose();
  const T n = static_cast<T>(input.cols());
  if (grads) nn::backward<T>(critic, cache, (T(2) / n) * err, grads);
  return err.squaredNorm() / n;
}

template <typename T>
ActorLoss<T> actor_loss(const nn::MlpParams<T>& actor, std::span<const nn::ActionDim> dims,
                        const nn::MlpParams<T>& q1, const nn::MlpParams<T>& q2,
                        const nn::Matrix<T>& obs, const nn::Matrix<T>& noise, T alpha,
                        nn::MlpParams<T>* grads) {
  const PolicyBatch<T> pb = evaluate_policy(actor, dims, obs, noise);
  const nn::Matrix<T> in = critic_input(obs, pb.canonical);
  nn::MlpCache<T> c1, c2;
  const nn::Matrix<T> v1 = nn::forward(q1, in, grads ? &c1 : nullptr);
  const nn::Matrix<T> v2 = nn::forward(q2, in, grads ? &c2 : nullptr);
  const nn::Matrix<T> qmin = v1.cwiseMin(v2);
  const T n = static_cast<T>(obs.cols());

  ActorLoss<T> out;
  out.log_prob = pb.log_prob;
  out.loss = (alpha * pb.log_prob.sum() - qmin.sum()) / n;

  if (grads) {
    const nn::Matrix<T> pick1 = (v1.array() <= v2.array()).template cast<T>();
    const nn::Matrix<T> g1 = pick1 * (T(-1) / n);
    const nn::Matrix<T> g2 = (nn::Matrix<T>::Ones(1, obs.cols()) - pick1) * (T(-1) / n);
    const nn::Matrix<T> gin = nn::backward<T>(q1, c1, g1, nullptr) + nn::backward<T>(q2, c2, g2, nullptr);
    const nn::Matrix<T> grad_canon = gin.bottomRows(pb.canonical.rows());
    const nn::Vector<T> grad_logp = nn::Vector<T>::Constant(obs.cols(), alpha / n);
    backward_policy(actor, pb, grad_canon, grad_logp, *grads);
  }
  return out;
}

template <typename T>
nn::Vector<T> critic_target(const Batch<T>& batch, std::span<const nn::ActionDim> dims,
                            const nn::MlpParams<T>& actor, const nn::MlpParams<T>& q1_target,
                            const nn::MlpParams<T>& q2_target, const nn::Matrix<T>& next_noise,
                            T alpha, T gamma) {
  const PolicyBatch<T> pb = evaluate_policy(actor, dims, batch.next_state, next_noise);
  const nn::Matrix<T> in = critic_input(batch.next_state, pb.canonical);
  const nn::Matrix<T> qmin = nn::forward(q1_target, in).cwiseMin(nn::forward(q2_target, in));
  const nn::Vector<T> soft = qmin.transpose() - alpha * pb.log_prob;
  const nn::Vector<T> live = nn::Vector<T>::Ones(batch.reward.size()) - batch.terminal;
  return batch.reward + gamma * live.cwiseProduct(soft);
}

template <typename T>
double temperature_loss(double log_alpha, const nn::Vector<T>& log_prob, double eta, double* grad) {
  const double mean = static_cast<double>(log_prob.sum()) / static_cast<double>(log_prob.size()) + eta;
  if (grad) *grad = -mean;
  return -log_alpha * mean;
}

template <typename T>
SacAgent<T>::SacAgent(const SacConfig& sac, const EnvConfig& env, std::uint64_t init_seed)
    : sac_(sac), log_alpha_(std::log(sac.alpha_init)) {
  sac_.validate();
  std::mt19937_64 rng(init_seed);
  const auto dims = action_dims(sac_, env);
  const int d = static_cast<int>(dims.size());
  const auto actor_sizes = layer_sizes(kObservationDim, sac_.hidden_sizes, 2 * d);
  const auto critic_sizes = layer_sizes(kObservationDim + d, sac_.hidden_sizes, 1);
  policy_ = Policy<T>(nn::make_mlp<T>(actor_sizes, rng), sac_, env);
  q1_ = nn::make_mlp<T>(critic_sizes, rng);
  q2_ = nn::make_mlp<T>(critic_sizes, rng);
  q1_target_ = q1_;
  q2_target_ = q2_;
  actor_opt_ = nn::AdamState<T>(policy_.actor(), {sac_.actor_lr});
  q1_opt_ = nn::AdamState<T>(q1_, {sac_.critic_lr});
  q2_opt_ = nn::AdamState<T>(q2_, {sac_.critic_lr});
  alpha_opt_.config.lr = sac_.actor_lr;
}

template <typename T>
double SacAgent<T>::alpha() const {
  return std::exp(log_alpha_);
}

template <typename T>
nn::Vector<T> SacAgent<T>::compute_targets(const Batch<T>& batch, const nn::Matrix<T>& next_noise) const {
  return critic_target(batch, dims(), policy_.actor(), q1_target_, q2_target_, next_noise,
                       static_cast<T>(alpha()), static_cast<T>(sac_.gamma));
}

template <typename T>
std::pair<T, T> SacAgent<T>::update_critics(const Batch<T>& batch, const nn::Vector<T>& y) {
  const nn::Matrix<T> in = critic_input(batch.state, canonical_actions(batch.action, dims()));
  nn::MlpParams<T> g1 = q1_.zeros_like();
  nn::MlpParams<T> g2 = q2_.zeros_like();
  const T l1 = critic_loss(q1_, in, y, &g1);
  const T l2 = critic_loss(q2_, in, y, &g2);
  nn::adam_step(q1_opt_, q1_, g1);
  nn::adam_step(q2_opt_, q2_, g2);
  return {l1, l2};
}

template <typename T>
ActorLoss<T> SacAgent<T>::update_actor(const Batch<T>& batch, const nn::Matrix<T>& noise) {
  nn::MlpParams<T> g = policy_.actor().zeros_like();
  ActorLoss<T> out = actor_loss(policy_.actor(), dims(), q1_, q2_, batch.state, noise,
                                static_cast<T>(alpha()), &g);
  nn::adam_step(actor_opt_, policy_.actor(), g);
  return out;
}

template <typename T>
double SacAgent<T>::update_temperature(const nn::Vector<T>& log_prob) {
  if (sac_.auto_alpha) {
    double grad = 0.0;
    temperature_loss(log_alpha_, log_prob, sac_.target_entropy, &grad);
    alpha_opt_.apply(log_alpha_, grad);
  }
  return alpha();
}

template <typename T>
void SacAgent<T>::update_targets() {
  const T tau = static_cast<T>(sac_.polyak_tau);
  nn::polyak_update(q1_target_, q1_, tau);
  nn::polyak_update(q2_target_, q2_, tau);
}

template <typename T>
UpdateStats SacAgent<T>::update(const Batch<T>& batch, std::mt19937_64& rng) {
  const auto d = static_cast<Eigen::Index>(dims().size());
  const Eigen::Index n = batch.reward.size();
  const nn::Matrix<T> next_noise = gaussian_noise<T>(d, n, rng);
  const nn::Matrix<T> noise = gaussian_noise<T>(d, n, rng);

  UpdateStats stats;
  const nn::Vector<T> y = compute_targets(batch, next_noise);
  const auto [l1, l2] = update_critics(batch, y);
  const ActorLoss<T> al = update_actor(batch, noise);
  stats.critic1_loss = l1;
  stats.critic2_loss = l2;
  stats.actor_loss = al.loss;
  stats.mean_log_prob = static_cast<double>(al.log_prob.mean());
  stats.alpha = update_temperature(al.log_prob);
  update_targets();
  ++updates_;
  return stats;
}

template <typename T>
nn::Checkpoint SacAgent<T>::policy_checkpoint(const EnvConfig& env) const {
  nn::Checkpoint ckpt;
  ckpt.set_tag("algo", to_string(sac_.mode));
  ckpt.set_tag("time_activation", to_string(sac_.time_activation));
  ckpt.set_tag("duration_min", exact(env.duration_min));
  ckpt.set_tag("duration_max", exact(env.duration_max));
  ckpt.set_tag("force_bound", exact(env.force_bound));
  ckpt.set_tag("fixed_duration", exact(sac_.fixed_duration));
  ckpt.networks.push_back({"actor", policy_.actor().template cast<float>()});
  return ckpt;
}

template <typename T>
nn::Checkpoint SacAgent<T>::full_checkpoint(const EnvConfig& env) const {
  nn::Checkpoint ckpt = policy_checkpoint(env);
  ckpt.set_tag("log_alpha", exact(log_alpha_));
  ckpt.set_tag("updates", std::to_string(updates_));
  ckpt.set_tag("alpha_adam_m", exact(alpha_opt_.m));
  ckpt.set_tag("alpha_adam_v", exact(alpha_opt_.v));
  ckpt.set_tag("alpha_adam_step", std::to_string(alpha_opt_.step));
  auto add = [&](const std::string& name, const nn::MlpParams<T>& p) {
    ckpt.networks.push_back({name, p.template cast<float>()});
  };
  auto add_opt = [&](const std::string& name, const nn::AdamState<T>& opt) {
    add(name + ".adam_m", opt.m);
    add(name + ".adam_v", opt.v);
    ckpt.set_tag(name + ".adam_step", std::to_string(opt.step));
  };
  add("critic1", q1_);
  add("critic2", q2_);
  add("critic1_target", q1_target_);
  add("critic2_target", q2_target_);
  add_opt("actor", actor_opt_);
  add_opt("critic1", q1_opt_);
  add_opt("critic2", q2_opt_);
  return ckpt;
}

template <typename T>
void SacAgent<T>::restore(const nn::Checkpoint& ckpt) {
  if (ckpt.tag("algo") != to_string(sac_.mode)) {
    throw std::runtime_error("checkpoint algo '" + ckpt.tag("algo") + "' does not match config '" +
                             to_string(sac_.mode) + "'");
  }
  auto load = [&](const std::string& name, nn::MlpParams<T>& into) {
    nn::MlpParams<T> p = ckpt.network(name).template cast<T>();
    if (!p.same_shape(into)) throw std::runtime_error("checkpoint network '" + name + "' has the wrong shape");
    into = std::move(p);
  };
  auto load_opt = [&](const std::string& name, nn::AdamState<T>& opt) {
    load(name + ".adam_m", opt.m);
    load(name + ".adam_v", opt.v);
    opt.step = std::stoll(ckpt.tag(name + ".adam_step"));
  };
  load("actor", policy_.actor());
  load("critic1", q1_);
  load("critic2", q2_);
  load("critic1_target", q1_target_);
  load("critic2_target", q2_target_);
  load_opt("actor", actor_opt_);
  load_opt("critic1", q1_opt_);
  load_opt("critic2", q2_opt_);
  log_alpha_ = parse_double(ckpt, "log_alpha");
  updates_ = std::stoll(ckpt.tag("updates"));
  alpha_opt_.m = parse_double(ckpt, "alpha_adam_m");
  alpha_opt_.v = parse_double(ckpt, "alpha_adam_v");
  alpha_opt_.step = std::stoll(ckpt.tag("alpha_adam_step"));
}

Policy<float> load_policy(const nn::Checkpoint& ckpt, const SacConfig& sac, const EnvConfig& env) {
  const std::string algo = ckpt.tag("algo");
  if (algo != to_string(sac.mode)) {
    throw std::runtime_error("checkpoint algo '" + algo + "' does not match requested '" + to_string(sac.mode) + "'");
  }
  SacConfig effective = sac;
  effective.time_activation = parse_time_activation(ckpt.tag("time_activation"));
  effective.fixed_duration = parse_double(ckpt, "fixed_duration");
  if (parse_double(ckpt, "duration_min") != env.duration_min ||
      parse_double(ckpt, "duration_max") != env.duration_max ||
      parse_double(ckpt, "force_bound") != env.force_bound) {
    throw std::runtime_error("checkpoint action bounds do not match the environment config");
  }
  return Policy<float>(ckpt.network("actor"), effective, env);
}

#define SEAC_INSTANTIATE_SAC(T)                                                                    \
  template nn::Matrix<T> critic_input<T>(const nn::Matrix<T>&, const nn::Matrix<T>&);              \
  template nn::Matrix<T> canonical_actions<T>(const nn::Matrix<T>&, std::span<const nn::ActionDim>); \
  template T critic_loss<T>(const nn::MlpParams<T>&, const nn::Matrix<T>&, const nn::Vector<T>&,   \
                            nn::MlpParams<T>*);                                                    \
  template ActorLoss<T> actor_loss<T>(const nn::MlpParams<T>&, std::span<const nn::ActionDim>,     \
                                      const nn::MlpParams<T>&, const nn::MlpParams<T>&,            \
                                      const nn::Matrix<T>&, const nn::Matrix<T>&, T,               \
                                      nn::MlpParams<T>*);                                          \
  template nn::Vector<T> critic_target<T>(const Batch<T>&, std::span<const nn::ActionDim>,         \
                                          const nn::MlpParams<T>&, const nn::MlpParams<T>&,        \
                                          const nn::MlpParams<T>&, const nn::Matrix<T>&, T, T);    \
  template double temperature_loss<T>(double, const nn::Vector<T>&, double, double*);              \
  template class SacAgent<T>;

SEAC_INSTANTIATE_SAC(float)
SEAC_INSTANTIATE_SAC(double)

}  // namespace seac
