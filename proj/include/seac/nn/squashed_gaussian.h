#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace seac::nn {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;
/// Added inside log(1 - tanh^2(u)) so the correction stays finite at saturation.
inline constexpr double kTanhStabilizer = 1e-6;

enum class SquashKind : std::uint32_t {
  /// low + (high - low) * (tanh(u) + 1) / 2
  TanhAffine = 0,
  /// low + (high - low) * relu6(u) / 6; mass outside (0, 6) is lumped on the bounds.
  Relu6Affine = 1,
};

/// Output transform of one action dimension onto [low, high].
struct ActionDim {
  SquashKind kind = SquashKind::TanhAffine;
  double low = -1.0;
  double high = 1.0;
};

/// One sampled dimension with the partial derivatives the actor update needs.
/// "canonical" is the transformed value rescaled to [-1, 1]; `log_prob` is its
/// log-density and `log_prob_physical` the density of `action` on [low, high].
template <typename T>
struct DimSample {
  T action{};
  T canonical{};
  T log_prob{};
  T log_prob_physical{};
  T dlogp_dmean{};
  T dlogp_dlogstd{};
  T dcanon_dmean{};
  T dcanon_dlogstd{};
};

/// Reparameterized draw u = mean + exp(log_std) * noise pushed through `dim`.
/// `log_std` must already be clamped.
template <typename T>
DimSample<T> sample_dim(const ActionDim& dim, T mean, T log_std, T noise);

template <typename T>
T clamp_log_std(T raw);

template <typename T>
struct PolicyHead {
  std::vector<T> mean;
  std::vector<T> log_std;  // clamped to [kLogStdMin, kLogStdMax]
};

template <typename T>
struct SquashedSample {
  std::vector<T> action;
  std::vector<T> canonical;
  T log_prob{};            // density of `action` in physical units
  T log_prob_canonical{};  // density of `canonical` on [-1, 1]^d
};

template <typename T>
SquashedSample<T> sample_squashed(const PolicyHead<T>& head, std::span<const T> noise,
                                  std::span<const ActionDim> dims);

}  // namespace seac::nn
