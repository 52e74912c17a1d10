#pragma once

#include <span>
#include <vector>

#include "mnt/quadrature.hpp"

namespace mnt {

struct WenoConfig {
  int k = 3;              // reconstruction order; polynomial degree k-1
  double epsilon = 1e-6;  // smoothness-indicator floor
  double power_p = 2.0;   // nonlinear weight exponent

  void validate() const;
};

enum class BoundaryKind { dirichlet, periodic };

/// Fill the k ghost layers of a mean array laid out as
/// [k ghosts | J physical | k ghosts].  Dirichlet ghosts are constant at
/// the boundary kinetic value; periodic ghosts wrap the physical cells.
void fill_ghosts(std::span<double> means, int n_cells, int k,
                 BoundaryKind kind, double left_value, double right_value);

/// Order-k WENO reconstruction on a uniform mesh, formulated on the
/// reference cell xi in [-1/2, 1/2].  Polynomials are stored as k monomial
/// coefficients in xi.  The k candidate stencils are the standard
/// substencils containing the center cell; nonlinear weights use the
/// Jiang-Shu smoothness indicators with the classical optimal linear
/// weights for the targeted cell edge.
class WenoReconstructor {
 public:
  WenoReconstructor(const WenoConfig& cfg, const LobattoRule& spatial_rule);

  int order() const { return k_; }
  int window_size() const { return 2 * k_ - 1; }  // means j-k+1 .. j+k-1
  int n_nodes() const { return static_cast<int>(node_eval_.size()) / k_; }

  /// Degree-(k-1) polynomial whose averages over the cells
  /// j-left_shift .. j-left_shift+k-1 match `means`; coefficients are in
  /// the coordinates of cell j.
  void candidate_polynomial(std::span<const double> means, int left_shift,
                            std::span<double> coeffs) const;

  /// Weighted polynomials targeting the right and left edge of the center
  /// cell.  coeffs_* receive k coefficients each.
  void reconstruct_edges(std::span<const double> window,
                         std::span<double> coeffs_right_target,
                         std::span<double> coeffs_left_target) const;

  /// The in-cell reconstruction: the right-target polynomial for mu > 0,
  /// the left-target polynomial for mu < 0, and their average at mu = 0.
  void reconstruct_in_cell(std::span<const double> window, int mu_sign,
                           std::span<double> coeffs) const;

  double eval(std::span<const double> coeffs, double xi) const;

  /// Values at the spatial quadrature nodes; with Lobatto nodes the first
  /// and last entries are the cell-edge values used for upwinding.
  void eval_at_nodes(std::span<const double> coeffs,
                     std::span<double> values) const;

  /// Optimal linear weight of substencil r for the given edge (tests).
  double linear_weight(int r, bool right_edge) const {
    return right_edge ? d_right_[r] : d_left_[r];
  }

  /// Smoothness indicator of substencil r for a window of means.
  double smoothness(std::span<const double> window, int r) const;

 private:
  void weighted_poly(std::span<const double> window,
                     const std::vector<double>& d,
                     std::span<double> coeffs) const;

  int k_;
  double eps_;
  double power_p_;
  std::vector<double> coeff_map_;  // k blocks of k x k: means -> coefficients
  std::vector<double> beta_form_;  // k blocks of k x k quadratic forms
  std::vector<double> d_right_, d_left_;
  std::vector<double> node_eval_;  // n_nodes x k
};

} // namespace mnt
