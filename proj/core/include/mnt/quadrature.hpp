#pragma once

#include <span>
#include <vector>

namespace mnt {

/// Gauss-Lobatto rule on an interval [lo, hi].  Nodes include both
/// endpoints and are sorted ascending; an n-node rule integrates
/// polynomials of degree <= 2n-3 exactly.
struct LobattoRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double lo = -1.0;
  double hi = 1.0;

  int size() const { return static_cast<int>(nodes.size()); }

  /// Weighted sum of values given at the nodes.
  double integrate(std::span<const double> values_at_nodes) const;
};

/// Nodes are the roots of (1 - t^2) P'_{n-1}(t), mapped affinely from
/// [-1, 1] to [lo, hi].  Throws std::invalid_argument for n < 2 or lo >= hi.
LobattoRule build_lobatto(int n, double lo, double hi);

/// Paired half-range Gauss-Lobatto rules for the angle variable
/// mu in [-1, 1]: nQ/2 nodes on [-1, 0] and nQ/2 nodes on [0, 1].
/// mu = 0 appears in both half rules, each with its own weight; every
/// half-range integral is the plain sub-sum over its own rule, and the
/// full-range integral is the sum of the two.
struct AngularQuadrature {
  LobattoRule negative_half;  // on [-1, 0]
  LobattoRule positive_half;  // on [0, 1]

  int n_total = 0;      // nQ = negative_half.size() + positive_half.size()
  int moment_order = 0; // N

  // Concatenated node/weight arrays, negative half first.
  std::vector<double> mu;
  std::vector<double> w;

  // basis[i * n_total + q] = mu_q^i for i = 0..N.
  std::vector<double> basis;

  int n_neg() const { return negative_half.size(); }

  double integrate(std::span<const double> f) const;
  double integrate_neg(std::span<const double> f) const;
  double integrate_pos(std::span<const double> f) const;

  /// <mu^i f> by quadrature.
  double moment(std::span<const double> f, int i) const;
};

AngularQuadrature build_angular(int n_q, int moment_order);

/// Spatial rule on the reference cell [-1/2, 1/2] with
/// nqs = ceil((k + k_s + 1) / 2) nodes, k the reconstruction order and
/// k_s the polynomial degree bound of the interaction coefficients.
struct SpatialQuadrature {
  LobattoRule rule;
  int n_nodes = 0;
};

SpatialQuadrature build_spatial(int order_k, int coeff_order_ks);

} // namespace mnt
