#include "seac/nn/grad_check.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace seac::nn {

double grad_check(const LossWithGrad& loss, std::span<const double> params, double h, double floor) {
  std::vector<double> x(params.begin(), params.end());
  std::vector<double> analytic(x.size());
  std::vector<double> scratch(x.size());
  loss(x, analytic);

  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double up = loss(x, scratch);
    x[i] = saved - h;
    const double down = loss(x, scratch);
    x[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), floor});
    worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
  }
  return worst;
}

}  // namespace seac::nn
