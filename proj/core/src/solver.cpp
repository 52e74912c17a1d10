#include "mnt/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <limits>

#include "mnt/linalg.hpp"
#include "mnt/parallel.hpp"

#include <thread>

namespace mnt {

Mesh Mesh::uniform(double xl, double xr, int n) {
  if (!(xl < xr) || n < 1) throw std::invalid_argument("Mesh: bad domain");
  Mesh m;
  m.x_left = xl;
  m.x_right = xr;
  m.n_cells = n;
  m.dx = (xr - xl) / n;
  return m;
}

int Mesh::locate(double x) const {
  if (x < x_left - 1e-12 * dx || x > x_right + 1e-12 * dx)
    throw std::invalid_argument("Mesh::locate: point outside the domain");
  int j = static_cast<int>(std::floor((x - x_left) / dx));
  return std::clamp(j, 0, n_cells - 1);
}

void MaterialWorkspace::resize(int cells, int nodes, int angular) {
  n_cells = cells;
  n_nodes = nodes;
  n_angular = angular;
  sigma_a.assign(static_cast<std::size_t>(cells) * nodes, 0.0);
  sigma_s.assign(static_cast<std::size_t>(cells) * nodes, 0.0);
  source.assign(static_cast<std::size_t>(cells) * nodes * angular, 0.0);
}

std::string SolverConfig::integrator_for_order(int k) {
  switch (k) {
    case 1: return "SSPRK(1,1,1)";
    case 2: return "SSPRK(1,2,20)";
    case 3: return "SSPRK(1,3,16)";
    case 4: return "SSPRK(1,4,10)";
    case 5: return "TSRK(2,5,8)";
    case 6: return "TSRK(2,6,12)";
    case 7: return "MSRK(5,7,12)";
    default:
      throw std::invalid_argument("no integrator for reconstruction order " +
                                  std::to_string(k));
  }
}

namespace {

WenoConfig make_weno_config(const SolverConfig& cfg) {
  WenoConfig w;
  w.k = cfg.recon_order;
  w.epsilon = cfg.weno_epsilon;
  w.power_p = cfg.weno_power;
  return w;
}

} // namespace

Solver::Solver(TransportProblem problem, SolverConfig config)
    : problem_(std::move(problem)),
      cfg_(std::move(config)),
      mesh_(Mesh::uniform(problem_.x_left, problem_.x_right, cfg_.n_cells)),
      angular_(build_angular(cfg_.n_angular, cfg_.moment_order)),
      spatial_(build_spatial(cfg_.recon_order,
                             problem_.materials ? problem_.materials->coeff_order()
                                                : 1)),
      weno_(make_weno_config(cfg_), spatial_.rule),
      kernel_(CollisionKernel::isotropic(angular_)) {
  if (!problem_.materials)
    throw std::invalid_argument("Solver: problem lacks a material model");
  if (!problem_.initialize)
    throw std::invalid_argument("Solver: problem lacks an initial condition");
  if (problem_.boundary == BoundaryKind::dirichlet &&
      (!problem_.bc_left || !problem_.bc_right))
    throw std::invalid_argument("Solver: Dirichlet problem lacks inflow data");
  if (cfg_.closure == ClosureKind::pn && cfg_.limiter.mode != LimiterMode::off)
    cfg_.limiter.mode = LimiterMode::off; // no positive ansatz to preserve

  const std::string name = cfg_.integrator.empty()
                               ? SolverConfig::integrator_for_order(cfg_.recon_order)
                               : cfg_.integrator;
  tableau_ = load_tableau(name, cfg_.tableau_dir);
  if (tableau_.steps > 1)
    predictor_ = load_tableau("SSPRK(1,4,10)", cfg_.tableau_dir);
  if (tableau_.steps > 2)
    inner_two_step_ = load_tableau("TSRK(2,7,12)", cfg_.tableau_dir);

  if (cfg_.threads <= 0)
    cfg_.threads = std::max(1u, std::thread::hardware_concurrency());
  optimizers_.reserve(cfg_.threads);
  for (int t = 0; t < cfg_.threads; ++t)
    optimizers_.emplace_back(angular_, cfg_.optimizer);

  warm_multipliers_.assign(
      mesh_.n_cells, EntropyOptimizer::isotropic_multipliers(cfg_.moment_order));

  const int nq = angular_.n_total;
  const int k = cfg_.recon_order;
  recon_.k = k;
  recon_.n_angular = nq;
  recon_.n_ext = mesh_.n_cells + 2;
  recon_.coeffs.assign(
      static_cast<std::size_t>(recon_.n_ext) * nq * k, 0.0);
  recon_.psi_mean.assign(static_cast<std::size_t>(nq) * (mesh_.n_cells + 2 * k),
                         0.0);
  cell_minmax_lo_.assign(mesh_.n_cells + 2 * k, 0.0);
  cell_minmax_hi_.assign(mesh_.n_cells + 2 * k, 0.0);
  flux_.assign(static_cast<std::size_t>(mesh_.n_cells + 1) *
                   (cfg_.moment_order + 1),
               0.0);
  materials_.resize(mesh_.n_cells, spatial_.n_nodes, nq);

  iso_moments_quad_.assign(cfg_.moment_order + 1, 0.0);
  for (int q = 0; q < nq; ++q) {
    double t = angular_.w[q];
    for (int c = 0; c <= cfg_.moment_order; ++c) {
      iso_moments_quad_[c] += t;
      t *= angular_.mu[q];
    }
  }
  weight_sum_ = 0.0;
  for (double w : angular_.w) weight_sum_ += w;
  inv_weight_sum_ = 1.0 / weight_sum_;
  cfg_.limiter.validate();
  cfg_.optimizer.validate();
}

double Solver::compute_dt() const {
  const double t_final = cfg_.t_final_override >= 0.0 ? cfg_.t_final_override
                                                      : problem_.t_final;
  MaterialWorkspace w;
  w.resize(mesh_.n_cells, spatial_.n_nodes, angular_.n_total);
  double sig_t_max = 0.0;
  const int n_time_samples = problem_.materials->time_dependent() ? 100 : 1;
  for (int s = 0; s < n_time_samples; ++s) {
    const double t = t_final * (n_time_samples == 1 ? 0.0 : double(s) / (n_time_samples - 1));
    problem_.materials->evaluate(t, mesh_, spatial_, angular_, w);
    for (int j = 0; j < mesh_.n_cells; ++j)
      for (int i = 0; i < spatial_.n_nodes; ++i) {
        const double st = w.sa(j, i) + w.ss(j, i);
        if (st < 0.0) throw std::invalid_argument("compute_dt: negative sigma_t");
        sig_t_max = std::max(sig_t_max, st);
      }
  }
  const double w_q = spatial_.rule.weights.back();
  const double dxw = mesh_.dx * w_q;
  const double bound2 = dxw / (1.0 + dxw * sig_t_max);
  const double bound1 = sig_t_max > 0.0 ? 1.0 / sig_t_max
                                        : std::numeric_limits<double>::infinity();
  const double dt_fe = (1.0 - cfg_.optimizer.eps) * std::min(bound1, bound2);
  return tableau_.rho * dt_fe;
}

SolverState Solver::initial_state() const {
  const int nq = angular_.n_total;
  const int nv = cfg_.moment_order + 1;
  std::vector<double> psi(static_cast<std::size_t>(mesh_.n_cells) * nq);
  problem_.initialize(mesh_, angular_, spatial_, psi);

  SolverState s;
  s.t = 0.0;
  s.moments.assign(static_cast<std::size_t>(mesh_.n_cells) * nv, 0.0);
  for (int j = 0; j < mesh_.n_cells; ++j) {
    double* u = s.moments.data() + static_cast<std::size_t>(j) * nv;
    for (int q = 0; q < nq; ++q) {
      double t = angular_.w[q] * psi[static_cast<std::size_t>(j) * nq + q];
      for (int i = 0; i < nv; ++i) {
        u[i] += t;
        t *= angular_.mu[q];
      }
    }
  }
  return s;
}

void Solver::ensure_realizable(const std::vector<double>& moments,
                               double t) const {
  const int nv = cfg_.moment_order + 1;
  for (int j = 0; j < mesh_.n_cells; ++j) {
    const std::span<const double> u(moments.data() + static_cast<std::size_t>(j) * nv,
                                    nv);
    if (!is_realizable(u))
      throw InvariantViolation("cell " + std::to_string(j) +
                               " lost realizability at t = " + std::to_string(t));
  }
}

void Solver::ansatz_pass(double t, std::vector<double>& moments) {
  const int nq = angular_.n_total;
  const int nv = cfg_.moment_order + 1;
  const int k = cfg_.recon_order;
  const int stride = mesh_.n_cells + 2 * k;
  const int threads = std::max(1, cfg_.threads);

  if (cfg_.closure == ClosureKind::pn) {
    parallel_for(mesh_.n_cells, threads, [&](int j, int) {
      const std::span<const double> u(
          moments.data() + static_cast<std::size_t>(j) * nv, nv);
      const std::vector<double> beta = pn_multipliers(u, angular_);
      for (int q = 0; q < nq; ++q) {
        const double mu = angular_.mu[q];
        double v = beta[nv - 1];
        for (int i = nv - 2; i >= 0; --i) v = v * mu + beta[i];
        recon_.psi_mean[static_cast<std::size_t>(q) * stride + k + j] = v;
      }
    });
    return;
  }

  std::vector<long> iters(threads, 0), regs(threads, 0), calls(threads, 0);
  parallel_for(mesh_.n_cells, threads, [&](int j, int tid) {
    EntropyOptimizer& opt = optimizers_[tid];
    double* u = moments.data() + static_cast<std::size_t>(j) * nv;
    OptimizerResult res;
    try {
      res = opt.solve(std::span<const double>(u, nv), warm_multipliers_[j]);
    } catch (const RealizabilityError& e) {
      char buf[64];
      std::string detail = std::string(e.what()) + " (t = " + std::to_string(t) +
                           ", cell " + std::to_string(j) + ", moments";
      for (int i = 0; i < nv; ++i) {
        std::snprintf(buf, sizeof buf, " %.17g", u[i]);
        detail += buf;
      }
      throw RealizabilityError(detail + ")");
    }
    ++calls[tid];
    iters[tid] += res.iterations;
    if (res.r_used > 0.0) {
      // The scheme continues from the regularized moments.
      ++regs[tid];
      const NormalizedMoments nm = normalize(std::span<const double>(u, nv));
      const MomentVector v = regularize(nm.scaled, res.r_used);
      for (int i = 0; i < nv; ++i) u[i] = nm.scale * v[i];
    }
    warm_multipliers_[j] = res.alpha_bar;
    for (int q = 0; q < nq; ++q) {
      const double mu = angular_.mu[q];
      double e = res.alpha_bar[nv - 1];
      for (int i = nv - 2; i >= 0; --i) e = e * mu + res.alpha_bar[i];
      recon_.psi_mean[static_cast<std::size_t>(q) * stride + k + j] =
          res.scale * std::exp(e);
    }
  });
  for (int tid = 0; tid < threads; ++tid) {
    diag_.newton_iterations += iters[tid];
    diag_.regularized_cells += regs[tid];
    diag_.optimizer_calls += calls[tid];
  }
}

void Solver::weno_pass(double t) {
  const int nq = angular_.n_total;
  const int k = cfg_.recon_order;
  const int stride = mesh_.n_cells + 2 * k;
  const int threads = std::max(1, cfg_.threads);

  // Ghost means.
  for (int q = 0; q < nq; ++q) {
    std::span<double> row(recon_.psi_mean.data() + static_cast<std::size_t>(q) * stride,
                          stride);
    const double bl = problem_.boundary == BoundaryKind::dirichlet
                          ? problem_.bc_left(t, angular_.mu[q])
                          : 0.0;
    const double br = problem_.boundary == BoundaryKind::dirichlet
                          ? problem_.bc_right(t, angular_.mu[q])
                          : 0.0;
    fill_ghosts(row, mesh_.n_cells, k, problem_.boundary, bl, br);
  }

  // Window extrema over angle, shared by the maximum-principle bounds.
  const bool need_bounds = cfg_.limiter.mode == LimiterMode::max_principle;
  if (need_bounds) {
    for (int e = 0; e < stride; ++e) {
      double lo = recon_.psi_mean[e], hi = lo;
      for (int q = 1; q < nq; ++q) {
        const double v = recon_.psi_mean[static_cast<std::size_t>(q) * stride + e];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      cell_minmax_lo_[e] = lo;
      cell_minmax_hi_[e] = hi;
    }
  }

  const double c_eff = cfg_.limiter.effective_c(mesh_.dx);
  const int nqs = spatial_.n_nodes;
  std::vector<double> min_theta(threads, 1.0);
  std::vector<long> activations(threads, 0), oob(threads, 0);

  parallel_for(recon_.n_ext, threads, [&](int e, int tid) {
    // Extended cell e sits at mean index k - 1 + e.
    const int mean_idx = k - 1 + e;
    const bool physical = (e >= 1 && e <= mesh_.n_cells);
    double values[16];
    double bound_lo = 0.0, bound_hi = 0.0;
    if (need_bounds && physical) {
      double lo = cell_minmax_lo_[mean_idx - k], hi = cell_minmax_hi_[mean_idx - k];
      for (int w = mean_idx - k + 1; w <= mean_idx + k; ++w) {
        lo = std::min(lo, cell_minmax_lo_[w]);
        hi = std::max(hi, cell_minmax_hi_[w]);
      }
      const double relax = 0.5 * c_eff * mesh_.dx;
      bound_hi = (1.0 + relax) * hi;
      bound_lo = (1.0 - relax) * lo;
    }
    for (int q = 0; q < nq; ++q) {
      const double* row =
          recon_.psi_mean.data() + static_cast<std::size_t>(q) * stride;
      const std::span<const double> window(row + mean_idx - (k - 1), 2 * k - 1);
      double* coeffs = recon_.coeffs.data() +
                       (static_cast<std::size_t>(e) * nq + q) * k;
      const double mu = angular_.mu[q];
      weno_.reconstruct_in_cell(window, (mu > 0.0) - (mu < 0.0),
                                std::span<double>(coeffs, k));
      if (cfg_.limiter.mode == LimiterMode::off) continue;

      weno_.eval_at_nodes(std::span<const double>(coeffs, k),
                          std::span<double>(values, nqs));
      const double mean = row[mean_idx];
      LimiterOutcome out;
      if (!physical && !(mean > 0.0)) {
        // Boundary data may underflow to zero at the far angular nodes;
        // the only mean-preserving nonnegative reconstruction is flat.
        if (mean < 0.0)
          throw InvariantViolation("negative ghost-cell mean");
        for (int c = 0; c < k; ++c) coeffs[c] = 0.0;
        continue;
      }
      if (!physical || cfg_.limiter.mode == LimiterMode::positivity) {
        out = positivity_limit(mean, std::span<double>(values, nqs));
      } else {
        out = max_principle_limit(mean, std::span<double>(values, nqs), bound_hi,
                                  bound_lo);
      }
      if (out.theta < 1.0) {
        ++activations[tid];
        min_theta[tid] = std::min(min_theta[tid], out.theta);
        if (out.mean_out_of_bounds) ++oob[tid];
        coeffs[0] = (1.0 - out.theta) * mean + out.theta * coeffs[0];
        for (int c = 1; c < k; ++c) coeffs[c] *= out.theta;
      }
    }
  });
  double mt = 1.0;
  for (int tid = 0; tid < threads; ++tid) {
    mt = std::min(mt, min_theta[tid]);
    diag_.limiter_activations += activations[tid];
    diag_.mean_out_of_bounds += oob[tid];
  }
  recon_.min_theta = mt;
  diag_.min_theta = std::min(diag_.min_theta, mt);
}

Reconstruction Solver::reconstruct(double t, std::vector<double>& moments) {
  ansatz_pass(t, moments);
  weno_pass(t);
  return recon_;
}

void Solver::rhs(double t, std::vector<double>& moments,
                 std::vector<double>& out) {
  const int nq = angular_.n_total;
  const int nv = cfg_.moment_order + 1;
  const int k = cfg_.recon_order;
  const int nqs = spatial_.n_nodes;
  const int threads = std::max(1, cfg_.threads);
  ++diag_.rhs_evaluations;

  if (cfg_.check_realizability && cfg_.closure == ClosureKind::entropy)
    ensure_realizable(moments, t);

  if (!materials_ready_ ||
      (problem_.materials->time_dependent() && materials_time_ != t)) {
    problem_.materials->evaluate(t, mesh_, spatial_, angular_, materials_);
    materials_time_ = t;
    materials_ready_ = true;
  }

  ansatz_pass(t, moments);
  weno_pass(t);

  // Upwind fluxes.  Interface i sits between extended cells i and i+1;
  // periodic boundaries wrap onto the physical reconstructions so the
  // telescoping sum cancels exactly.
  const bool periodic = problem_.boundary == BoundaryKind::periodic;
  const int n_ifaces = mesh_.n_cells + 1;
  for (int i = 0; i < n_ifaces; ++i) {
    double* f = flux_.data() + static_cast<std::size_t>(i) * nv;
    for (int c = 0; c < nv; ++c) f[c] = 0.0;
    const int left_e = periodic ? 1 + (i - 1 + mesh_.n_cells) % mesh_.n_cells : i;
    const int right_e = periodic ? 1 + i % mesh_.n_cells : i + 1;
    for (int q = 0; q < nq; ++q) {
      const double mu = angular_.mu[q];
      if (mu == 0.0) continue;
      const double psi_edge =
          mu > 0.0
              ? weno_.eval(std::span<const double>(recon_.cell_coeffs(left_e, q), k),
                           0.5)
              : weno_.eval(std::span<const double>(recon_.cell_coeffs(right_e, q), k),
                           -0.5);
      double tcoef = angular_.w[q] * mu * psi_edge;
      for (int c = 0; c < nv; ++c) {
        f[c] += tcoef;
        tcoef *= mu;
      }
    }
  }

  // Cell-average reaction, collision and source terms via the spatial rule.
  out.assign(moments.size(), 0.0);
  parallel_for(mesh_.n_cells, threads, [&](int j, int) {
    const int e = j + 1;
    double* du = out.data() + static_cast<std::size_t>(j) * nv;
    const double* f_left = flux_.data() + static_cast<std::size_t>(j) * nv;
    const double* f_right = flux_.data() + static_cast<std::size_t>(j + 1) * nv;
    for (int c = 0; c < nv; ++c) du[c] = -(f_right[c] - f_left[c]) / mesh_.dx;

    for (int i = 0; i < nqs; ++i) {
      double nm[8], srcm[8];
      for (int c = 0; c < nv; ++c) {
        nm[c] = 0.0;
        srcm[c] = 0.0;
      }
      const double xi = spatial_.rule.nodes[i];
      for (int q = 0; q < nq; ++q) {
        const double* coeffs = recon_.cell_coeffs(e, q);
        double psi = coeffs[k - 1];
        for (int c = k - 2; c >= 0; --c) psi = psi * xi + coeffs[c];
        const double mu = angular_.mu[q];
        double tcoef = angular_.w[q] * psi;
        double scoef = angular_.w[q] * materials_.src(j, i, q);
        for (int c = 0; c < nv; ++c) {
          nm[c] += tcoef;
          srcm[c] += scoef;
          tcoef *= mu;
          scoef *= mu;
        }
      }
      const double wq = spatial_.rule.weights[i];
      const double sa = materials_.sa(j, i);
      const double ss = materials_.ss(j, i);
      // Isotropic collision gain: psi_c = <psi>/sum(w), so its moments
      // are the quadrature moments of a constant.
      const double gain = nm[0] * inv_weight_sum_;
      for (int c = 0; c < nv; ++c)
        du[c] += wq * (-(sa + ss) * nm[c] + ss * gain * iso_moments_quad_[c] + srcm[c]);
    }
  });
}

SolverState Solver::run() {
  const auto wall0 = std::chrono::steady_clock::now();
  diag_ = Diagnostics{};
  diag_.min_theta = 1.0;

  const double t_final = cfg_.t_final_override >= 0.0 ? cfg_.t_final_override
                                                      : problem_.t_final;
  SolverState state = initial_state();
  if (cfg_.check_realizability && cfg_.closure == ClosureKind::entropy)
    ensure_realizable(state.moments, 0.0);
  if (t_final <= 0.0) {
    state.diag = diag_;
    return state;
  }

  double dt = compute_dt();
  const long n_steps = std::max<long>(1, static_cast<long>(std::ceil(t_final / dt - 1e-12)));
  dt = t_final / static_cast<double>(n_steps);
  diag_.dt = dt;

  RhsFn rhs_fn = [this](double t, std::vector<double>& u, std::vector<double>& du) {
    rhs(t, u, du);
  };

  diag_.max_inner_euler_step = dt / tableau_.rho;
  StepHistory history;
  if (tableau_.steps == 1) {
    history.push(std::move(state.moments), 0.0, 1);
  } else {
    history = ssp_startup(tableau_, *predictor_,
                          inner_two_step_ ? &*inner_two_step_ : nullptr,
                          std::move(state.moments), 0.0, dt, cfg_.q_init, rhs_fn);
    const double h0 = dt / std::pow(2.0, cfg_.q_init);
    diag_.max_inner_euler_step =
        std::max(diag_.max_inner_euler_step, h0 / predictor_->rho);
    const double cap = tableau_.steps > 2 ? 0.5 * dt : dt;
    const double rho_two = tableau_.steps > 2 ? inner_two_step_->rho : tableau_.rho;
    diag_.max_inner_euler_step =
        std::max(diag_.max_inner_euler_step, cap / rho_two);
  }

  long steps_done = static_cast<long>(history.states.size()) - 1;
  diag_.steps = steps_done;
  for (long s = steps_done; s < n_steps; ++s) {
    ssp_step(tableau_, history, dt, rhs_fn);
    ++diag_.steps;
  }

  SolverState final_state;
  final_state.t = t_final;
  final_state.moments = history.newest();
  if (cfg_.check_realizability && cfg_.closure == ClosureKind::entropy)
    ensure_realizable(final_state.moments, t_final);
  diag_.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0)
          .count();
  final_state.diag = diag_;
  return final_state;
}

std::vector<MomentVector> Solver::sample_solution(
    const Reconstruction& recon, std::span<const double> points) const {
  std::vector<MomentVector> out;
  out.reserve(points.size());
  for (double x : points) {
    const int j = mesh_.locate(x);
    const double xi = (x - mesh_.center(j)) / mesh_.dx;
    out.push_back(sample_cell(recon, j, xi));
  }
  return out;
}

MomentVector Solver::sample_cell(const Reconstruction& recon, int cell,
                                 double xi) const {
  const int nv = cfg_.moment_order + 1;
  const int nq = angular_.n_total;
  const int k = recon.k;
  MomentVector u(nv, 0.0);
  for (int q = 0; q < nq; ++q) {
    const double* coeffs = recon.cell_coeffs(cell + 1, q);
    double psi = coeffs[k - 1];
    for (int c = k - 2; c >= 0; --c) psi = psi * xi + coeffs[c];
    double tcoef = angular_.w[q] * psi;
    for (int c = 0; c < nv; ++c) {
      u[c] += tcoef;
      tcoef *= angular_.mu[q];
    }
  }
  return u;
}

} // namespace mnt
