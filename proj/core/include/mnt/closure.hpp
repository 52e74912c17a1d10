#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mnt/moments.hpp"
#include "mnt/quadrature.hpp"

namespace mnt {

/// Kinetic density values at the angular quadrature nodes.
using AngularValues = std::vector<double>;

/// psi_q = exp(sum_i alpha_i mu_q^i).  Throws std::overflow_error when an
/// exponent exceeds the optimizer's overflow guard.
AngularValues eval_ansatz(std::span<const double> alpha,
                          const AngularQuadrature& q);

/// Flux moments f_i = <mu mu^i psi> of node values psi.
MomentVector flux_moments(std::span<const double> psi,
                          const AngularQuadrature& q);

/// Scattering kernel T(mu, mu') sampled at node pairs and renormalized so
/// that the quadrature integral over the first argument is one at every
/// node; this makes the zeroth collision moment vanish exactly.
class CollisionKernel {
 public:
  /// T = 1/2 (isotropic scattering).  Uses a closed-form gain term.
  static CollisionKernel isotropic(const AngularQuadrature& q);

  /// Arbitrary strictly positive kernel; values are renormalized.
  static CollisionKernel from_function(
      const AngularQuadrature& q,
      const std::function<double(double, double)>& t);

  /// Gain term psi_C(mu_q) = sum_q' w_q' T(mu_q, mu_q') psi_q' >= 0.
  void gain(std::span<const double> psi, std::span<double> psi_c) const;

  bool is_isotropic() const { return isotropic_; }
  const AngularQuadrature& quadrature() const { return *q_; }

 private:
  explicit CollisionKernel(const AngularQuadrature& q) : q_(&q) {}

  const AngularQuadrature* q_;
  bool isotropic_ = false;
  double inv_weight_sum_ = 0.0;  // isotropic fast path: psi_c = <psi>/sum w
  std::vector<double> values_;   // values_[q_to * nQ + q_from], normalized
};

/// Moments of C(psi) = psi_C - psi; the zeroth component vanishes to
/// machine precision by the kernel normalization.
MomentVector collision_moments(std::span<const double> psi,
                               const CollisionKernel& kernel,
                               const AngularQuadrature& q);

/// The gain term as node values (the ansatz part of the collision
/// operator, nonnegative for nonnegative psi).
AngularValues collision_ansatz_part(std::span<const double> psi,
                                    const CollisionKernel& kernel);

/// Coefficients beta of the polynomial ansatz m^T beta whose quadrature
/// moments equal u (the linear closure).
std::vector<double> pn_multipliers(std::span<const double> u,
                                   const AngularQuadrature& q);

/// Flux of the linear polynomial closure; linear in u.
MomentVector pn_closure_flux(std::span<const double> u,
                             const AngularQuadrature& q);

} // namespace mnt
