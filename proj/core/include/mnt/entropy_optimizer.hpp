#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "mnt/moments.hpp"
#include "mnt/quadrature.hpp"

namespace mnt {

struct OptimizerConfig {
  double tau = 1e-9;  // gradient tolerance
  double eps = 0.01;  // tolerance on 1 - G/psi_bar (ratio bound)
  std::vector<double> r_sequence = {1e-8, 1e-6, 1e-4};
  int iters_per_level = 50; // Newton iterations before advancing the loop
  int max_line_search = 40;
  double chi = 1e-4; // Armijo slope fraction

  void validate() const;
};

enum class NewtonStatus { converged, not_converged, solver_failure };

struct OptimizerResult {
  MultiplierVector alpha_bar; // zeroth-moment-matched multipliers
  double r_used = 0.0;        // regularization level that converged (0 = none)
  int iterations = 0;         // total Newton iterations spent
  double scale = 1.0;         // u_0 factor removed by normalization
};

/// Thrown when the optimizer fails even at the largest regularization
/// level; under the scheme's time-step restriction this indicates a
/// non-realizable input, i.e. a bug upstream.
class RealizabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Newton solver for the dual of the entropy minimization problem,
///   min_alpha <exp(m^T alpha)> - u^T alpha,
/// whose optimum defines the Maxwell-Boltzmann ansatz matching u.
/// One instance holds scratch buffers; use one per worker thread.
class EntropyOptimizer {
 public:
  EntropyOptimizer(const AngularQuadrature& q, OptimizerConfig cfg);

  const OptimizerConfig& config() const { return cfg_; }
  const AngularQuadrature& quadrature() const { return *q_; }

  /// Multipliers of the normalized isotropic density: (-ln 2, 0, ..., 0).
  static MultiplierVector isotropic_multipliers(int moment_order);

  /// g = <m exp(m^T alpha)> - u and H = <m m^T exp(m^T alpha)> (row-major).
  /// Returns false when an ansatz exponent exceeds the overflow guard, in
  /// which case outputs are unspecified.
  bool dual_gradient_hessian(std::span<const double> alpha,
                             std::span<const double> u, std::span<double> g,
                             std::span<double> h);

  /// <exp(m^T alpha)>; quiet NaN on overflow.
  double zeroth_moment(std::span<const double> alpha);

  /// alpha with its zeroth component shifted by -log u_0(alpha), so the
  /// ansatz zeroth moment is exactly one.
  MultiplierVector shift_zeroth(std::span<const double> alpha);

  /// Damped Newton iteration from alpha (updated in place) for a
  /// normalized target u (u[0] == 1).  Stops at the first iterate whose
  /// gradient norm is below tau' = tau / (1 + |u| + tau) and whose Newton
  /// direction certifies the ratio bound 1 - eps < exp(-|d|_1 - |log u0|).
  NewtonStatus newton_solve(std::span<const double> u, MultiplierVector& alpha,
                            int max_iters, int& iters_used);

  /// Full policy: normalize u, attempt r = 0 from alpha_init, retry r = 0
  /// from the isotropic multipliers, then walk the regularization sequence
  /// on v(u, r).  Throws RealizabilityError if the last level fails.
  OptimizerResult solve(std::span<const double> u,
                        const MultiplierVector& alpha_init);

  /// Largest ansatz exponent accepted before signalling overflow.
  static constexpr double exponent_guard = 700.0;

 private:
  // Power sums s_p = sum_q w_q mu_q^p exp(m^T alpha), p = 0..2N.
  // Returns false on overflow.
  bool power_sums(std::span<const double> alpha);
  // Dual objective <exp(m^T alpha)> - u^T alpha, +inf on overflow.
  double objective(std::span<const double> alpha, std::span<const double> u);

  const AngularQuadrature* q_;
  OptimizerConfig cfg_;
  int nvar_;
  std::vector<double> sums_;      // 2N + 1 power sums
  std::vector<double> g_, h_, d_; // gradient, Hessian, Newton direction
  std::vector<double> trial_;
};

} // namespace mnt
