#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "mnt/moments.hpp"
#include "mnt/quadrature.hpp"
#include "mnt/solver.hpp"

namespace mnt {

/// Smooth reference solution in entropy-ansatz form,
///   phi(t,x,mu) = exp(alpha0 + alpha1 mu),
///   alpha0 = -K - sin(x-t) - a,  alpha1 = K + sin(x-t),
/// on (-pi, pi) with periodic boundaries; the absorption coefficient is
/// sigma_a = 4 (1 - cos(x-t)) and the source is the transport operator
/// applied to phi (nonnegative for any K > 1).  The offset a normalizes
/// the maximum of <phi> to one.
struct ManufacturedSpec {
  double peak = 4.0; // K
  double offset = 0.0;
  double t_final = 0.0;

  explicit ManufacturedSpec(double k_peak = 4.0);

  double alpha0(double t, double x) const;
  double alpha1(double t, double x) const;
  double phi(double t, double x, double mu) const;
  double sigma_a(double t, double x) const;
  /// S = d_t phi + mu d_x phi + sigma_a phi = phi (cos(x-t)(1-mu)^2 + sigma_a).
  double source(double t, double x, double mu) const;
  /// Zeroth moment <phi> in closed form.
  double w0(double t, double x) const;
  /// Moments by angular quadrature.
  MomentVector moments(double t, double x, const AngularQuadrature& q) const;
};

struct PlaneSourceSpec {
  double psi_floor = 0.5e-8;
  double x_left = -1.2, x_right = 1.2;
  double t_final = 1.0;
  double sigma_s = 1.0;
};

struct SourceBeamSpec {
  double x_left = 0.0, x_right = 3.0;
  double t_final = 2.5;
  double gamma = 1e5;
  double psi_floor = 0.5e-10;
};

/// The convergence-study setup: manufactured absorption/source, sigma_s=0.
TransportProblem manufactured_problem(const ManufacturedSpec& spec,
                                      int recon_order);

/// Same initial data with sigma_a = S = 0 and constant scattering
/// (mass-conservation runs).
TransportProblem manufactured_scattering_problem(const ManufacturedSpec& spec,
                                                 double sigma_s);

TransportProblem plane_source_problem(const PlaneSourceSpec& spec);

/// Spatially constant coefficients with an isotropic constant source.
std::shared_ptr<const MaterialModel> constant_materials(double sigma_a,
                                                        double sigma_s,
                                                        double source = 0.0);

/// The inflow normalization beta = 1/<exp(-gamma (mu-1)^2)> uses the
/// quadrature the solver will run with, so pass its node count.
TransportProblem source_beam_problem(const SourceBeamSpec& spec,
                                     int n_angular);

/// Isotropic unit mass split onto the two center cells (even cell count),
/// on top of a floor density.  Fills psi_means[cell * nQ + q].
void delta_initialize(const Mesh& mesh, const AngularQuadrature& q,
                      double psi_floor, std::vector<double>& psi_means);

struct ErrorNorms {
  double e1 = 0.0;
  double einf = 0.0;
};

/// L1/Linf errors of the zeroth reconstructed moment against an exact
/// profile, using a 100-point Gauss-Lobatto rule per cell.
ErrorNorms error_norms(const Solver& solver, const Reconstruction& recon,
                       const std::function<double(double)>& w0_exact);

/// nu with E_coarse/E_fine = (dx_coarse/dx_fine)^nu; NaN when undefined.
double observed_order(double e_coarse, double e_fine, double dx_coarse,
                      double dx_fine);

struct PnReferenceResult {
  Mesh mesh;
  std::vector<double> w0; // cell means of the zeroth moment
};

/// First-order (in space and time) reference solution of the linear
/// closure with the kinetic upwind flux.  The state is kept in the
/// Legendre basis so that high closure orders remain well conditioned.
PnReferenceResult pn_reference(const TransportProblem& problem, int n_pn,
                               int n_cells, int n_angular = 0,
                               double t_final_override = -1.0);

} // namespace mnt
