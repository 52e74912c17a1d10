#include "mnt/limiters.hpp"

#include <algorithm>
#include <stdexcept>

namespace mnt {

void LimiterConfig::validate() const {
  if (mode != LimiterMode::off && !(c > 0.0))
    throw std::invalid_argument("limiter: c must be > 0");
}

namespace {

void rescale(double mean, std::span<double> values, double theta) {
  if (theta >= 1.0) return;
  const double base = (1.0 - theta) * mean;
  for (double& v : values) v = base + theta * v;
}

} // namespace

LimiterOutcome positivity_limit(double mean, std::span<double> values) {
  if (!(mean > 0.0))
    throw std::domain_error("positivity_limit: nonpositive cell mean");
  double theta = 1.0;
  for (double v : values)
    if (v < 0.0) theta = std::min(theta, mean / (mean - v));
  rescale(mean, values, theta);
  return {theta, false};
}

LimiterOutcome max_principle_limit(double mean, std::span<double> values,
                                   double bound_hi, double bound_lo) {
  if (mean > bound_hi || mean < bound_lo) {
    rescale(mean, values, 0.0);
    return {0.0, true};
  }
  double theta = 1.0;
  for (double v : values) {
    if (v > bound_hi)
      theta = std::min(theta, (bound_hi - mean) / (v - mean));
    else if (v < bound_lo)
      theta = std::min(theta, (bound_lo - mean) / (v - mean));
  }
  theta = theta > 0.0 ? theta : 0.0;
  rescale(mean, values, theta);
  return {theta, false};
}

LocalBounds local_bounds(std::span<const double> window_means, double c,
                         double dx) {
  const auto [lo_it, hi_it] =
      std::minmax_element(window_means.begin(), window_means.end());
  const double relax = 0.5 * c * dx;
  return {(1.0 + relax) * *hi_it, (1.0 - relax) * *lo_it};
}

} // namespace mnt
