#pragma once

#include <span>

namespace mnt {

enum class LimiterMode { off, positivity, max_principle };

struct LimiterConfig {
  LimiterMode mode = LimiterMode::max_principle;
  double c = 1.0;  // bound on |d_x psi / psi|

  /// c is capped at 2/dx so the lower bound stays nonnegative.
  double effective_c(double dx) const { return c < 2.0 / dx ? c : 2.0 / dx; }

  void validate() const;
};

struct LimiterOutcome {
  double theta = 1.0;
  bool mean_out_of_bounds = false;  // flattened to the mean
};

/// Linear scaling toward the (positive) cell mean so every value becomes
/// nonnegative: theta_i = mean/(mean - v_i) where v_i < 0, theta = min_i.
/// Values are rescaled in place; the mean is preserved.
/// Throws std::domain_error if mean <= 0.
LimiterOutcome positivity_limit(double mean, std::span<double> values);

/// Linear scaling enforcing bound_lo <= v_i <= bound_hi.  If the mean
/// itself violates the bounds, theta = 0 (flatten to the mean) and the
/// outcome is flagged.
LimiterOutcome max_principle_limit(double mean, std::span<double> values,
                                   double bound_hi, double bound_lo);

struct LocalBounds {
  double hi = 0.0;
  double lo = 0.0;
};

/// Relaxed local maximum-principle bounds from the window of cell means
/// over the influence set (all angular nodes of cells j-k .. j+k):
/// hi = (1 + c dx/2) max, lo = (1 - c dx/2) min.
LocalBounds local_bounds(std::span<const double> window_means, double c,
                         double dx);

} // namespace mnt
