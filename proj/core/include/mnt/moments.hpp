#pragma once

#include <span>
#include <vector>

#include "mnt/quadrature.hpp"

namespace mnt {

/// Monomial moments u_i = <mu^i psi>, i = 0..N, of a kinetic density.
using MomentVector = std::vector<double>;

/// Lagrange multipliers of the entropy ansatz exp(m^T alpha).
using MultiplierVector = std::vector<double>;

/// Moments of the normalized isotropic density psi = 1/2:
/// component k is 1/(k+1) for even k and 0 for odd k.
MomentVector isotropic_moments(int moment_order);

/// u_i = sum_q w_q mu_q^i f_q for nonnegative node values f.
/// Throws std::invalid_argument on a negative entry or length mismatch.
MomentVector moments_of_density(const AngularQuadrature& q,
                                std::span<const double> f);

/// Strict realizability with respect to the truncated moment problem on
/// [-1, 1], tested by positive definiteness (attempted Cholesky) of the
/// Hankel matrices: for N = 2n+1 the matrices (u_{i+j} + u_{i+j+1}) and
/// (u_{i+j} - u_{i+j+1}), i,j = 0..n; for N = 2n the matrices
/// (u_{i+j}), i,j = 0..n, and (u_{i+j} - u_{i+j+2}), i,j = 0..n-1.
bool is_realizable(std::span<const double> u);

/// Convex blend toward the isotropic cone interior:
/// v(u, r) = (1 - r) u + r u_0 u_iso.  The zeroth component is unchanged.
MomentVector regularize(std::span<const double> u, double r);

struct NormalizedMoments {
  MomentVector scaled; // scaled[0] == 1
  double scale = 1.0;  // original u_0
};

/// Scale so the zeroth component is one.  Throws std::domain_error if
/// u_0 <= 0.
NormalizedMoments normalize(std::span<const double> u);

} // namespace mnt
