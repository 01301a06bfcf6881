#pragma once

#include <functional>
#include <span>

namespace seac::nn {

/// Loss evaluated at `params`; writes the analytic gradient into `grad`
/// (same length as params) and returns the loss value.
using LossWithGrad = std::function<double(std::span<const double> params, std::span<double> grad)>;

/// Worst per-coordinate relative error |a - n| / max(|a|, |n|, floor) between
/// the analytic gradient a and the central difference n with step h.
double grad_check(const LossWithGrad& loss, std::span<const double> params, double h = 1e-5,
                  double floor = 1e-6);

}  // namespace seac::nn
