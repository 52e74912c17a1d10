#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mnt/problems.hpp"
#include "mnt/solver.hpp"

using namespace mnt;

namespace {

std::string data_dir() { return MNT_TEST_TABLEAU_DIR; }

SolverConfig base_config(int order, int k, int cells) {
  SolverConfig cfg;
  cfg.moment_order = order;
  cfg.recon_order = k;
  cfg.n_cells = cells;
  cfg.tableau_dir = data_dir();
  cfg.threads = 1;
  return cfg;
}

// Uniform isotropic state on a periodic domain with constant scattering.
TransportProblem uniform_isotropic(double sigma_s) {
  TransportProblem p;
  p.x_left = 0.0;
  p.x_right = 1.0;
  p.t_final = 0.1;
  p.boundary = BoundaryKind::periodic;
  p.materials = constant_materials(0.0, sigma_s);
  p.initialize = [](const Mesh& mesh, const AngularQuadrature& aq,
                    const SpatialQuadrature&, std::vector<double>& out) {
    out.assign(static_cast<std::size_t>(mesh.n_cells) * aq.n_total, 0.5);
  };
  return p;
}

} // namespace

TEST_CASE("dt follows the realizability bound") {
  // eps = 0.01, sigma_t = 1, dx = 0.1, w_Q = 0.05 would give
  // 0.99 min(1, 0.005/1.005); here the pieces come from the real rule.
  TransportProblem p = uniform_isotropic(1.0);
  SolverConfig cfg = base_config(1, 2, 10);
  cfg.integrator = "SSPRK(1,1,1)";
  Solver solver(p, cfg);
  const double w_q = solver.spatial().rule.weights.back();
  const double dx = solver.mesh().dx;
  const double expect =
      0.99 * std::min(1.0, dx * w_q / (1.0 + dx * w_q * 1.0));
  CHECK(solver.compute_dt() == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("dt in a vacuum uses the streaming branch") {
  TransportProblem p = uniform_isotropic(0.0);
  SolverConfig cfg = base_config(1, 2, 10);
  cfg.integrator = "SSPRK(1,1,1)";
  Solver solver(p, cfg);
  const double w_q = solver.spatial().rule.weights.back();
  CHECK(solver.compute_dt() ==
        doctest::Approx(0.99 * solver.mesh().dx * w_q).epsilon(1e-14));
}

TEST_CASE("uniform isotropic states are steady") {
  for (double sigma_s : {0.0, 1.0}) {
    TransportProblem p = uniform_isotropic(sigma_s);
    SolverConfig cfg = base_config(3, 3, 12);
    Solver solver(p, cfg);
    SolverState s = solver.initial_state();
    std::vector<double> du;
    solver.rhs(0.0, s.moments, du);
    for (double v : du) CHECK(std::abs(v) < 1e-11);
  }
}

TEST_CASE("two-cell first-order flux matches a hand-computed upwind difference") {
  TransportProblem p = uniform_isotropic(0.0);
  // Two distinct cell states.
  p.initialize = [](const Mesh& mesh, const AngularQuadrature& aq,
                    const SpatialQuadrature&, std::vector<double>& out) {
    out.assign(static_cast<std::size_t>(mesh.n_cells) * aq.n_total, 0.0);
    for (int q = 0; q < aq.n_total; ++q) {
      out[q] = std::exp(0.5 * aq.mu[q]);                 // cell 0
      out[aq.n_total + q] = std::exp(-1.0 * aq.mu[q]);   // cell 1
    }
  };
  SolverConfig cfg = base_config(1, 1, 2);
  cfg.integrator = "SSPRK(1,1,1)";
  cfg.limiter.mode = LimiterMode::off;
  Solver solver(p, cfg);
  SolverState s = solver.initial_state();
  std::vector<double> du;
  std::vector<double> moments = s.moments;
  solver.rhs(0.0, moments, du);

  // With k = 1 the edge values are the ansatz cell means; build the
  // upwind interface fluxes directly from those (independent route).
  const AngularQuadrature& aq = solver.angular();
  EntropyOptimizer opt(aq, cfg.optimizer);
  std::vector<std::vector<double>> psi(2);
  for (int j = 0; j < 2; ++j) {
    const std::span<const double> u(moments.data() + 2 * j, 2);
    const OptimizerResult res =
        opt.solve(u, EntropyOptimizer::isotropic_multipliers(1));
    psi[j].resize(aq.n_total);
    for (int q = 0; q < aq.n_total; ++q) {
      const double e = res.alpha_bar[0] + res.alpha_bar[1] * aq.mu[q];
      psi[j][q] = res.scale * std::exp(e);
    }
  }
  const double dx = solver.mesh().dx;
  for (int comp = 0; comp < 2; ++comp) {
    // Interface between cells: upwind by sign of mu; periodic wrap makes
    // both interfaces identical up to donor choice.
    double f01 = 0.0, f10 = 0.0;
    for (int q = 0; q < aq.n_total; ++q) {
      const double mu = aq.mu[q];
      const double m = comp == 0 ? 1.0 : mu;
      const double donor_mid = mu > 0 ? psi[0][q] : psi[1][q];
      const double donor_wrap = mu > 0 ? psi[1][q] : psi[0][q];
      f01 += aq.w[q] * mu * m * donor_mid;
      f10 += aq.w[q] * mu * m * donor_wrap;
    }
    const double expect0 = -(f01 - f10) / dx;
    const double expect1 = -(f10 - f01) / dx;
    CHECK(du[comp] == doctest::Approx(expect0).epsilon(1e-11).scale(1.0));
    CHECK(du[2 + comp] == doctest::Approx(expect1).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("t_final = 0 returns the initial state") {
  TransportProblem p = uniform_isotropic(1.0);
  SolverConfig cfg = base_config(2, 2, 8);
  cfg.t_final_override = 0.0;
  Solver solver(p, cfg);
  const SolverState s = solver.run();
  const SolverState init = solver.initial_state();
  CHECK(s.t == 0.0);
  for (std::size_t i = 0; i < s.moments.size(); ++i)
    CHECK(s.moments[i] == init.moments[i]);
}

TEST_CASE("mass is conserved on periodic scattering runs") {
  ManufacturedSpec spec(4.0);
  TransportProblem p = manufactured_scattering_problem(spec, 1.0);
  SolverConfig cfg = base_config(3, 3, 20);
  cfg.t_final_override = 0.05;
  Solver solver(p, cfg);
  const SolverState init = solver.initial_state();
  double mass0 = 0.0;
  for (int j = 0; j < 20; ++j) mass0 += init.moments[4 * j];
  const SolverState fin = solver.run();
  double mass1 = 0.0;
  for (int j = 0; j < 20; ++j) mass1 += fin.moments[4 * j];
  CHECK(std::abs(mass1 - mass0) / mass0 <= 1e-12);
  CHECK(fin.diag.steps > 0);
}

TEST_CASE("sampling a uniform state returns the cell-mean moments") {
  TransportProblem p = uniform_isotropic(0.0);
  SolverConfig cfg = base_config(2, 3, 12);
  Solver solver(p, cfg);
  SolverState s = solver.initial_state();
  const Reconstruction recon = solver.reconstruct(0.0, s.moments);
  const std::vector<double> pts{0.11, 0.5, 0.99};
  const auto samples = solver.sample_solution(recon, pts);
  for (const MomentVector& u : samples) {
    CHECK(u[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(u[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    CHECK(u[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(solver.sample_solution(recon, std::vector<double>{-0.5}),
                  std::invalid_argument);
}

TEST_CASE("threaded and serial right-hand sides agree") {
  ManufacturedSpec spec(4.0);
  TransportProblem p = manufactured_problem(spec, 3);
  SolverConfig cfg = base_config(3, 3, 16);
  Solver serial(p, cfg);
  cfg.threads = 2;
  Solver threaded(p, cfg);
  SolverState s = serial.initial_state();
  std::vector<double> du1, du2;
  std::vector<double> m1 = s.moments, m2 = s.moments;
  serial.rhs(0.0, m1, du1);
  threaded.rhs(0.0, m2, du2);
  for (std::size_t i = 0; i < du1.size(); ++i)
    CHECK(du1[i] == doctest::Approx(du2[i]).epsilon(1e-13).scale(1.0));
}

TEST_CASE("linear closure mode holds the isotropic steady state") {
  TransportProblem p = uniform_isotropic(1.0);
  SolverConfig cfg = base_config(3, 2, 12);
  cfg.closure = ClosureKind::pn;
  cfg.integrator = "SSPRK(1,2,20)";
  Solver solver(p, cfg);
  SolverState s = solver.initial_state();
  std::vector<double> du;
  solver.rhs(0.0, s.moments, du);
  for (double v : du) CHECK(std::abs(v) < 1e-11);

  cfg.t_final_override = 0.05;
  Solver run_solver(p, cfg);
  const SolverState fin = run_solver.run();
  for (int j = 0; j < 12; ++j)
    CHECK(fin.moments[4 * j] == doctest::Approx(1.0).epsilon(1e-10));
}
