#include "seac/nn/squashed_gaussian.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace seac::nn {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

// log Phi(z) and phi(z) / Phi(z), stable in the far lower tail.
double log_ndtr(double z) {
  if (z > -30.0) return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
  return -0.5 * z * z - std::log(-z) - kHalfLog2Pi;
}

double mills_ratio_inverse(double z) {
  if (z > -30.0) {
    const double pdf = std::exp(-0.5 * z * z - kHalfLog2Pi);
    return pdf / (0.5 * std::erfc(-z / std::numbers::sqrt2));
  }
  return -z;
}

}  // namespace

template <typename T>
T clamp_log_std(T raw) {
  return std::clamp(raw, static_cast<T>(kLogStdMin), static_cast<T>(kLogStdMax));
}

template <typename T>
DimSample<T> sample_dim(const ActionDim& dim, T mean, T log_std, T noise) {
  const T sigma = std::exp(log_std);
  const T u = mean + sigma * noise;
  const T half_range = static_cast<T>(0.5 * (dim.high - dim.low));
  const T log_half_range = std::log(half_range);
  const T gauss = static_cast<T>(-0.5) * noise * noise - log_std - static_cast<T>(kHalfLog2Pi);

  DimSample<T> s;
  if (dim.kind == SquashKind::TanhAffine) {
    const T t = std::tanh(u);
    const T one_minus_t2 = T(1) - t * t;
    const T stab = one_minus_t2 + static_cast<T>(kTanhStabilizer);
    // d/du of -log(1 - tanh^2 u + c)
    const T dcorr_du = T(2) * t * one_minus_t2 / stab;
    s.canonical = t;
    s.log_prob = gauss - std::log(stab);
    s.log_prob_physical = s.log_prob - log_half_range;
    s.dlogp_dmean = dcorr_du;
    s.dlogp_dlogstd = T(-1) + dcorr_du * sigma * noise;
    s.dcanon_dmean = one_minus_t2;
    s.dcanon_dlogstd = one_minus_t2 * sigma * noise;
  } else {
    const T six(6);
    if (u <= T(0) || u >= six) {
      // Point mass on the bound: probability of the clipped tail.
      const bool lower = u <= T(0);
      const double z = lower ? -static_cast<double>(mean) / static_cast<double>(sigma)
                             : (static_cast<double>(mean) - 6.0) / static_cast<double>(sigma);
      const double r = mills_ratio_inverse(z);
      s.canonical = lower ? T(-1) : T(1);
      s.log_prob = static_cast<T>(log_ndtr(z));
      s.log_prob_physical = s.log_prob;
      s.dlogp_dmean = static_cast<T>((lower ? -r : r) / static_cast<double>(sigma));
      s.dlogp_dlogstd = static_cast<T>(-z * r);
      s.dcanon_dmean = T(0);
      s.dcanon_dlogstd = T(0);
    } else {
      const T slope = T(1) / T(3);
      s.canonical = u * slope - T(1);
      s.log_prob = gauss - std::log(slope);
      s.log_prob_physical = s.log_prob - log_half_range;
      s.dlogp_dmean = T(0);
      s.dlogp_dlogstd = T(-1);
      s.dcanon_dmean = slope;
      s.dcanon_dlogstd = slope * sigma * noise;
    }
  }
  const T a = static_cast<T>(dim.low) + half_range * (s.canonical + T(1));
  s.action = std::clamp(a, static_cast<T>(dim.low), static_cast<T>(dim.high));
  return s;
}

template <typename T>
SquashedSample<T> sample_squashed(const PolicyHead<T>& head, std::span<const T> noise,
                                  std::span<const ActionDim> dims) {
  if (head.mean.size() != dims.size() || head.log_std.size() != dims.size() ||
      noise.size() != dims.size()) {
    throw std::invalid_argument("sample_squashed dimension mismatch");
  }
  SquashedSample<T> out;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const auto d = sample_dim<T>(dims[i], head.mean[i], clamp_log_std(head.log_std[i]), noise[i]);
    out.action.push_back(d.action);
    out.canonical.push_back(d.canonical);
    out.log_prob += d.log_prob_physical;
    out.log_prob_canonical += d.log_prob;
  }
  return out;
}

template float clamp_log_std<float>(float);
template double clamp_log_std<double>(double);
template DimSample<float> sample_dim<float>(const ActionDim&, float, float, float);
template DimSample<double> sample_dim<double>(const ActionDim&, double, double, double);
template SquashedSample<float> sample_squashed<float>(const PolicyHead<float>&, std::span<const float>,
                                                      std::span<const ActionDim>);
template SquashedSample<double> sample_squashed<double>(const PolicyHead<double>&,
                                                        std::span<const double>,
                                                        std::span<const ActionDim>);

}  // namespace seac::nn
