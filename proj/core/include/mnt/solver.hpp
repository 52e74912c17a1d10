#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mnt/closure.hpp"
#include "mnt/entropy_optimizer.hpp"
#include "mnt/limiters.hpp"
#include "mnt/moments.hpp"
#include "mnt/quadrature.hpp"
#include "mnt/time_integration.hpp"
#include "mnt/weno.hpp"

namespace mnt {

struct Mesh {
  double x_left = 0.0;
  double x_right = 1.0;
  int n_cells = 1;
  double dx = 1.0;

  static Mesh uniform(double xl, double xr, int n);

  double center(int j) const { return x_left + (j + 0.5) * dx; }
  double left_edge(int j) const { return x_left + j * dx; }
  /// Cell index containing x (clamped to the domain).
  int locate(double x) const;
};

/// Per-stage material data at the spatial quadrature nodes.
struct MaterialWorkspace {
  int n_cells = 0, n_nodes = 0, n_angular = 0;
  std::vector<double> sigma_a; // [cell][node]
  std::vector<double> sigma_s; // [cell][node]
  std::vector<double> source;  // [cell][node][angular]

  void resize(int cells, int nodes, int angular);
  double sa(int j, int i) const { return sigma_a[j * n_nodes + i]; }
  double ss(int j, int i) const { return sigma_s[j * n_nodes + i]; }
  double src(int j, int i, int q) const {
    return source[(j * n_nodes + i) * n_angular + q];
  }
};

/// Problem-side provider of sigma_a, sigma_s and the source, already
/// projected onto per-cell polynomials of degree <= ks-1 and evaluated at
/// the spatial quadrature nodes.
class MaterialModel {
 public:
  virtual ~MaterialModel() = default;
  virtual int coeff_order() const = 0; // k_S
  virtual bool time_dependent() const = 0;
  virtual void evaluate(double t, const Mesh& mesh, const SpatialQuadrature& sq,
                        const AngularQuadrature& aq,
                        MaterialWorkspace& out) const = 0;
};

struct TransportProblem {
  double x_left = 0.0, x_right = 1.0;
  double t_final = 1.0;
  BoundaryKind boundary = BoundaryKind::periodic;
  /// Cell-mean kinetic density per (cell, angular node): fills [cell][q].
  std::function<void(const Mesh&, const AngularQuadrature&,
                     const SpatialQuadrature&, std::vector<double>&)>
      initialize;
  /// Inflow kinetic densities for Dirichlet boundaries.
  std::function<double(double t, double mu)> bc_left, bc_right;
  std::shared_ptr<const MaterialModel> materials;
};

enum class ClosureKind { entropy, pn };

struct SolverConfig {
  int moment_order = 3;  // N
  int recon_order = 3;   // k
  int n_cells = 40;      // J
  int n_angular = 40;    // nQ
  ClosureKind closure = ClosureKind::entropy;
  OptimizerConfig optimizer;
  double weno_epsilon = 1e-6;
  double weno_power = 2.0;
  LimiterConfig limiter;
  std::string integrator;      // empty: chosen from recon_order
  int q_init = 2;              // startup substep exponent
  std::string tableau_dir;     // empty: default search path
  double t_final_override = -1.0;
  int threads = 1;
  bool check_realizability = true;

  /// Integrator chosen for a reconstruction order when none is named.
  static std::string integrator_for_order(int k);
};

struct Diagnostics {
  long steps = 0;
  long rhs_evaluations = 0;
  double dt = 0.0;
  long optimizer_calls = 0;
  long newton_iterations = 0;
  long regularized_cells = 0;
  double min_theta = 1.0;
  long limiter_activations = 0;
  long mean_out_of_bounds = 0;
  double max_inner_euler_step = 0.0;
  double wall_seconds = 0.0;
};

struct SolverState {
  double t = 0.0;
  std::vector<double> moments; // [cell][component], flattened
  Diagnostics diag;
};

class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-cell, per-angular-node limited polynomial reconstruction.
/// Coefficients are monomials in the reference coordinate of each cell;
/// extended cells (one ghost on each side) carry the boundary-side edge
/// values for the upwind fluxes.
struct Reconstruction {
  int k = 1, n_angular = 0, n_ext = 0; // n_ext = J + 2
  std::vector<double> coeffs;          // [ext_cell][q][k]
  std::vector<double> psi_mean;        // [q][J + 2k] ghost-extended means
  double min_theta = 1.0;

  const double* cell_coeffs(int ext_cell, int q) const {
    return coeffs.data() + (static_cast<std::size_t>(ext_cell) * n_angular + q) *
                               static_cast<std::size_t>(k);
  }
};

class Solver {
 public:
  Solver(TransportProblem problem, SolverConfig config);

  const Mesh& mesh() const { return mesh_; }
  const AngularQuadrature& angular() const { return angular_; }
  const SpatialQuadrature& spatial() const { return spatial_; }
  const SolverConfig& config() const { return cfg_; }
  const IntegratorTableau& tableau() const { return tableau_; }

  /// Realizability-preserving time step: rho * (1 - eps) *
  /// min(1/sigma_t_max, dx w_Q / (1 + dx w_Q sigma_t_max)), with
  /// sigma_t_max sampled over the spatial nodes (and over time for
  /// time-dependent coefficients).
  double compute_dt() const;

  /// Initial cell-mean moments from the problem's kinetic density.
  SolverState initial_state() const;

  /// Semi-discrete right-hand side.  May replace cell moments by their
  /// regularized version (the replacement is part of the scheme).
  void rhs(double t, std::vector<double>& moments, std::vector<double>& out);

  /// Advance to t_final; returns the final state with diagnostics.
  SolverState run();

  /// Reconstruction of a given moment state (optimize + WENO + limit),
  /// e.g. for output sampling; identical to the one used inside rhs.
  Reconstruction reconstruct(double t, std::vector<double>& moments);

  /// Moments of the reconstruction at arbitrary points.
  /// Returns [point][component].
  std::vector<MomentVector> sample_solution(const Reconstruction& recon,
                                            std::span<const double> points) const;

  /// Zeroth moment of the reconstruction at one in-cell coordinate.
  MomentVector sample_cell(const Reconstruction& recon, int cell,
                           double xi) const;

  const Diagnostics& diagnostics() const { return diag_; }

 private:
  void ensure_realizable(const std::vector<double>& moments, double t) const;
  void ansatz_pass(double t, std::vector<double>& moments);
  void weno_pass(double t);

  TransportProblem problem_;
  SolverConfig cfg_;
  Mesh mesh_;
  AngularQuadrature angular_;
  SpatialQuadrature spatial_;
  WenoReconstructor weno_;
  CollisionKernel kernel_;
  IntegratorTableau tableau_;
  std::optional<IntegratorTableau> predictor_;
  std::optional<IntegratorTableau> inner_two_step_;

  std::vector<EntropyOptimizer> optimizers_; // one per thread
  std::vector<MultiplierVector> warm_multipliers_;

  // Workspaces reused across rhs calls.
  MaterialWorkspace materials_;
  double materials_time_ = 0.0;
  bool materials_ready_ = false;
  Reconstruction recon_;
  std::vector<double> cell_minmax_lo_, cell_minmax_hi_; // over q, extended
  std::vector<double> flux_;         // [interface][component]
  std::vector<double> iso_moments_quad_; // <m 1> under the quadrature
  double weight_sum_ = 2.0, inv_weight_sum_ = 0.5;

  Diagnostics diag_;
};

} // namespace mnt
