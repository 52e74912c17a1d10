// Acceptance suite: one pass/fail line per criterion.
//
//   mnt_acceptance            runs everything
//   mnt_acceptance 2 6 7      runs a subset
//
// Criteria:
//   1  manufactured-solution convergence orders and magnitudes
//   2  optimizer property suite (gradient bound, shift, Hessian check)
//   3  realizability preservation on both benchmark runs
//   4  mass conservation on a periodic scattering run
//   5  limiter properties, randomized
//   6  quadrature and reconstruction exactness
//   7  time-integrator orders and effective CFL table
//   8  qualitative benchmark checks

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mnt/closure.hpp"
#include "mnt/entropy_optimizer.hpp"
#include "mnt/limiters.hpp"
#include "mnt/linalg.hpp"
#include "mnt/problems.hpp"
#include "mnt/solver.hpp"
#include "mnt/time_integration.hpp"
#include "mnt/weno.hpp"

using namespace mnt;

namespace {

int g_threads = 2;

std::string data_dir() { return MNT_TEST_TABLEAU_DIR; }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) {
    detail += (detail.empty() ? "" : "; ") + what;
  }
};

SolverConfig manufactured_config(int k, int cells, double tau) {
  SolverConfig cfg;
  cfg.moment_order = 3;
  cfg.recon_order = k;
  cfg.n_cells = cells;
  cfg.optimizer.tau = tau;
  cfg.limiter.mode = LimiterMode::max_principle;
  cfg.limiter.c = 1.0;
  cfg.tableau_dir = data_dir();
  cfg.threads = g_threads;
  cfg.q_init = k >= 6 ? 3 : 2;
  return cfg;
}

double manufactured_e1(int k, int cells, double tau) {
  const ManufacturedSpec spec(4.0);
  TransportProblem problem = manufactured_problem(spec, k);
  Solver solver(problem, manufactured_config(k, cells, tau));
  const SolverState state = solver.run();
  std::vector<double> moments = state.moments;
  const Reconstruction recon = solver.reconstruct(state.t, moments);
  const ErrorNorms err = error_norms(
      solver, recon, [&](double x) { return spec.w0(state.t, x); });
  std::printf("    k=%d J=%-4d E1 = %.3e   (%.1fs)\n", k, cells, err.e1,
              state.diag.wall_seconds);
  std::fflush(stdout);
  return err.e1;
}

Outcome criterion1() {
  Outcome out;
  const double tau = 1e-11;

  { // k = 2 over 40 -> 80 -> 160
    const double e40 = manufactured_e1(2, 40, tau);
    const double e80 = manufactured_e1(2, 80, tau);
    const double e160 = manufactured_e1(2, 160, tau);
    const double nu1 = observed_order(e40, e80, 1.0 / 40, 1.0 / 80);
    const double nu2 = observed_order(e80, e160, 1.0 / 80, 1.0 / 160);
    out.note("k=2 nu = " + std::to_string(nu1) + ", " + std::to_string(nu2));
    out.require(nu1 >= 1.6 && nu1 <= 2.6, "k=2 first order outside [1.6,2.6]");
    out.require(nu2 >= 1.6 && nu2 <= 2.6, "k=2 second order outside [1.6,2.6]");
    out.require(e40 > 3.823e-3 / 10 && e40 < 3.823e-3 * 10,
                "k=2 J=40 magnitude off by more than 10x");
  }
  { // k = 3 over 20 -> 40 -> 80
    const double e20 = manufactured_e1(3, 20, tau);
    const double e40 = manufactured_e1(3, 40, tau);
    const double e80 = manufactured_e1(3, 80, tau);
    const double nu1 = observed_order(e20, e40, 1.0 / 20, 1.0 / 40);
    const double nu2 = observed_order(e40, e80, 1.0 / 40, 1.0 / 80);
    out.note("k=3 nu = " + std::to_string(nu1) + ", " + std::to_string(nu2));
    out.require(nu1 >= 2.5 && nu1 <= 4.7, "k=3 first order outside [2.5,4.7]");
    out.require(nu2 >= 2.5 && nu2 <= 4.7, "k=3 second order outside [2.5,4.7]");
    out.require(e80 > 6.808e-6 / 10 && e80 < 6.808e-6 * 10,
                "k=3 J=80 magnitude off by more than 10x");
  }
  { // k = 5 over 20 -> 40
    const double e20 = manufactured_e1(5, 20, tau);
    const double e40 = manufactured_e1(5, 40, tau);
    const double nu = observed_order(e20, e40, 1.0 / 20, 1.0 / 40);
    out.note("k=5 nu = " + std::to_string(nu));
    out.require(nu >= 5.0, "k=5 order below 5.0");
  }
  { // optimization-error plateau for k in {5, 7}
    const double e5a = manufactured_e1(5, 160, tau);
    const double e5b = manufactured_e1(5, 320, tau);
    out.require(e5a < 1e-9 && e5b < 1e-9, "k=5 plateau errors not < 1e-9");
    out.require(e5a / e5b < 10.0 && e5b / e5a < 10.0,
                "k=5 finest grids differ by 10x or more");
    const double e7a = manufactured_e1(7, 80, tau);
    const double e7b = manufactured_e1(7, 160, tau);
    out.require(e7a < 1e-9 && e7b < 1e-9, "k=7 plateau errors not < 1e-9");
    out.require(e7a / e7b < 10.0 && e7b / e7a < 10.0,
                "k=7 finest grids differ by 10x or more");
  }
  return out;
}

MomentVector random_realizable(const AngularQuadrature& q,
                               std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.2);
  std::vector<double> f(q.n_total);
  std::vector<double> a(q.moment_order + 1);
  for (double& v : a) v = g(rng);
  for (int i = 0; i < q.n_total; ++i) {
    double e = a.back();
    for (int c = static_cast<int>(a.size()) - 2; c >= 0; --c)
      e = e * q.mu[i] + a[c];
    f[i] = std::exp(e);
  }
  return moments_of_density(q, f);
}

Outcome criterion2() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  OptimizerConfig cfg;
  cfg.tau = 1e-9;
  std::mt19937_64 rng(1969);
  double worst_g = 0.0, worst_u0 = 0.0, worst_h = 0.0;
  for (int order : {1, 2, 3}) {
    const AngularQuadrature q = build_angular(40, order);
    EntropyOptimizer opt(q, cfg);
    const int nv = order + 1;
    std::vector<double> g(nv), h(nv * nv), gp(nv), gm(nv), hs(nv * nv);
    for (int trial = 0; trial < 1000; ++trial) {
      MomentVector u = random_realizable(q, rng);
      const NormalizedMoments nm = normalize(u);
      const OptimizerResult res =
          opt.solve(u, EntropyOptimizer::isotropic_multipliers(order));
      const MomentVector target = regularize(nm.scaled, res.r_used);
      if (!opt.dual_gradient_hessian(res.alpha_bar, target, g, h)) {
        out.require(false, "overflow at a converged point");
        continue;
      }
      worst_g = std::max(worst_g, norm2(g));
      worst_u0 =
          std::max(worst_u0, std::abs(opt.zeroth_moment(res.alpha_bar) - 1.0));
      if (trial % 20 == 0) {
        const double step = 1e-6;
        for (int j = 0; j < nv; ++j) {
          MultiplierVector ap = res.alpha_bar, am = res.alpha_bar;
          ap[j] += step;
          am[j] -= step;
          opt.dual_gradient_hessian(ap, target, gp, hs);
          opt.dual_gradient_hessian(am, target, gm, hs);
          for (int i = 0; i < nv; ++i)
            worst_h = std::max(worst_h, std::abs(h[i * nv + j] -
                                                 (gp[i] - gm[i]) / (2 * step)));
        }
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  char buf[160];
  std::snprintf(
      buf, sizeof buf,
      "max |g| = %.2e (tau 1e-9), max |u0-1| = %.2e, max H dev = %.2e, %.1fs",
      worst_g, worst_u0, worst_h, secs);
  out.note(buf);
  out.require(worst_g <= 1e-9, "post-shift gradient above tau");
  out.require(worst_u0 <= 1e-13, "zeroth moment not pinned at one");
  out.require(worst_h <= 1e-6, "Hessian finite-difference deviation");
  out.require(secs < 60.0, "property suite exceeded one minute");
  return out;
}

Outcome criterion3() {
  Outcome out;
  { // plane source M3, k = 7, J = 200, c = 15
    TransportProblem problem = plane_source_problem(PlaneSourceSpec{});
    SolverConfig cfg;
    cfg.moment_order = 3;
    cfg.recon_order = 7;
    cfg.n_cells = 200;
    cfg.limiter.mode = LimiterMode::max_principle;
    cfg.limiter.c = 15.0;
    cfg.tableau_dir = data_dir();
    cfg.threads = g_threads;
    cfg.q_init = 3;
    try {
      Solver solver(problem, cfg);
      const SolverState s = solver.run();
      char buf[120];
      std::snprintf(buf, sizeof buf,
                    "plane source: %ld steps, min theta %.3f, %.0fs",
                    s.diag.steps, s.diag.min_theta, s.diag.wall_seconds);
      out.note(buf);
    } catch (const std::exception& e) {
      out.require(false, std::string("plane source aborted: ") + e.what());
    }
  }
  { // source beam M1, k = 7, J = 150, c = 1
    TransportProblem problem = source_beam_problem(SourceBeamSpec{}, 40);
    SolverConfig cfg;
    cfg.moment_order = 1;
    cfg.recon_order = 7;
    cfg.n_cells = 150;
    cfg.limiter.mode = LimiterMode::max_principle;
    cfg.limiter.c = 1.0;
    cfg.tableau_dir = data_dir();
    cfg.threads = g_threads;
    cfg.q_init = 3;
    try {
      Solver solver(problem, cfg);
      const SolverState s = solver.run();
      char buf[120];
      std::snprintf(buf, sizeof buf,
                    "source beam: %ld steps, min theta %.3f, %.0fs",
                    s.diag.steps, s.diag.min_theta, s.diag.wall_seconds);
      out.note(buf);
    } catch (const std::exception& e) {
      out.require(false, std::string("source beam aborted: ") + e.what());
    }
  }
  return out;
}

Outcome criterion4() {
  Outcome out;
  const ManufacturedSpec spec(4.0);
  TransportProblem problem = manufactured_scattering_problem(spec, 1.0);
  SolverConfig cfg = manufactured_config(3, 40, 1e-9);
  Solver solver(problem, cfg);
  const SolverState init = solver.initial_state();
  double mass0 = 0.0;
  for (int j = 0; j < 40; ++j) mass0 += init.moments[4 * j];
  const SolverState fin = solver.run();
  double mass1 = 0.0;
  for (int j = 0; j < 40; ++j) mass1 += fin.moments[4 * j];
  const double drift = std::abs(mass1 - mass0) / mass0;
  char buf[80];
  std::snprintf(buf, sizeof buf, "relative mass drift %.2e over t = pi/5",
                drift);
  out.note(buf);
  out.require(drift <= 1e-11, "mass drift above 1e-11");
  return out;
}

Outcome criterion5() {
  Outcome out;
  {
    std::vector<double> v{2.0, -1.0};
    out.require(positivity_limit(1.0, v).theta == 0.5, "pp spot theta");
    out.require(v[0] == 1.5 && v[1] == 0.0, "pp spot values");
    std::vector<double> w{2.0};
    out.require(
        std::abs(max_principle_limit(1.0, w, 1.2, 0.0).theta - 0.2) < 1e-15,
        "mp spot theta hi");
    std::vector<double> z{0.0};
    out.require(
        std::abs(max_principle_limit(1.0, z, 2.0, 0.5).theta - 0.5) < 1e-15,
        "mp spot theta lo");
  }
  const LobattoRule rule = build_lobatto(8, -0.5, 0.5);
  std::mt19937_64 rng(808);
  std::normal_distribution<double> g(0.5, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst_mean = 0.0, worst_bound = 0.0, worst_idem = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> v(rule.size());
    for (double& x : v) x = g(rng);
    double mean = 0.0;
    for (int i = 0; i < rule.size(); ++i) mean += rule.weights[i] * v[i];
    if (mean <= 0.01) {
      const double shift = 0.02 - mean;
      for (double& x : v) x += shift;
      mean += shift;
    }
    std::vector<double> w = v;
    double hi = 0.0, lo = 0.0;
    if (trial % 2 == 0) {
      positivity_limit(mean, w);
      lo = 0.0;
      hi = std::numeric_limits<double>::infinity();
    } else {
      lo = mean - (0.2 + u01(rng));
      hi = mean + (0.2 + u01(rng));
      max_principle_limit(mean, w, hi, lo);
    }
    double m2 = 0.0;
    for (int i = 0; i < rule.size(); ++i) m2 += rule.weights[i] * w[i];
    worst_mean = std::max(worst_mean, std::abs(m2 - mean));
    for (double x : w)
      worst_bound = std::max(worst_bound, std::max(lo - x, x - hi));
    std::vector<double> w2 = w;
    if (trial % 2 == 0)
      positivity_limit(mean, w2);
    else
      max_principle_limit(mean, w2, hi, lo);
    for (int i = 0; i < rule.size(); ++i)
      worst_idem = std::max(worst_idem, std::abs(w2[i] - w[i]));
  }
  char buf[140];
  std::snprintf(buf, sizeof buf,
                "mean dev %.2e, bound overshoot %.2e, idempotence dev %.2e",
                worst_mean, worst_bound, worst_idem);
  out.note(buf);
  out.require(worst_mean <= 1e-14, "mean preservation above 1e-14");
  out.require(worst_bound <= 1e-14, "bound enforcement above 1e-14");
  out.require(worst_idem <= 1e-12, "limiting not idempotent");
  return out;
}

Outcome criterion6() {
  Outcome out;
  for (int n : {2, 3, 4, 5, 6, 8, 10, 20, 100}) {
    const LobattoRule r = build_lobatto(n, -1.0, 1.0);
    std::vector<double> f(n);
    for (int p = 0; p <= 2 * n - 3; ++p) {
      for (int i = 0; i < n; ++i) f[i] = std::pow(r.nodes[i], p);
      const double exact =
          (std::pow(1.0, p + 1) - std::pow(-1.0, p + 1)) / (p + 1);
      const double err =
          std::abs(r.integrate(f) - exact) / std::max(1.0, std::abs(exact));
      if (err > 1e-12) {
        out.require(false, "monomial sweep failure at n = " + std::to_string(n));
        break;
      }
    }
  }
  std::mt19937_64 rng(9090);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k : {2, 3, 5, 7}) {
    WenoConfig wc;
    wc.k = k;
    const WenoReconstructor w(wc, build_spatial(k, k).rule);
    std::vector<double> p(k), window(2 * k - 1), coeffs(k);
    for (double& v : p) v = g(rng);
    for (int m = 0; m < 2 * k - 1; ++m) {
      double acc = 0.0;
      for (int d = 0; d < k; ++d) {
        const double hi = m - (k - 1) + 0.5, lo = m - (k - 1) - 0.5;
        acc += p[d] * (std::pow(hi, d + 1) - std::pow(lo, d + 1)) / (d + 1);
      }
      window[m] = acc;
    }
    w.reconstruct_in_cell(window, +1, coeffs);
    for (double xi : {-0.5, -0.1, 0.3, 0.5}) {
      double have = coeffs[k - 1], want = p[k - 1];
      for (int c = k - 2; c >= 0; --c) {
        have = have * xi + coeffs[c];
        want = want * xi + p[c];
      }
      out.require(std::abs(have - want) <= 1e-10,
                  "polynomial reconstruction at k = " + std::to_string(k));
    }
  }
  for (int k : {2, 3}) {
    WenoConfig wc;
    wc.k = k;
    const WenoReconstructor w(wc, build_spatial(k, k).rule);
    const double amp = 1e-2;
    std::vector<double> errs;
    for (int n : {20, 40}) {
      const double dx = 2.0 * M_PI / n;
      std::vector<double> avg(n);
      for (int j = 0; j < n; ++j)
        avg[j] = amp * (std::cos(j * dx) - std::cos((j + 1) * dx)) / dx;
      double emax = 0.0;
      std::vector<double> window(2 * k - 1), cr(k), cl(k);
      for (int j = 0; j < n; ++j) {
        for (int m = 0; m < 2 * k - 1; ++m)
          window[m] = avg[(j + m - (k - 1) + n) % n];
        w.reconstruct_edges(window, cr, cl);
        double edge = cr[k - 1];
        for (int c = k - 2; c >= 0; --c) edge = edge * 0.5 + cr[c];
        emax = std::max(emax, std::abs(edge - amp * std::sin((j + 1) * dx)));
      }
      errs.push_back(emax);
    }
    const double order = std::log2(errs[0] / errs[1]);
    char buf[64];
    std::snprintf(buf, sizeof buf, "k=%d edge order %.2f", k, order);
    out.note(buf);
    out.require(order >= 2 * k - 1 - 0.5, "edge order below 2k-1.5");
  }
  return out;
}

Outcome criterion7() {
  Outcome out;
  const struct {
    const char* name;
    double eff; // negative: not an entry of the effective-CFL table
  } rows[] = {
      {"SSPRK(1,1,1)", 1.0},   {"SSPRK(1,2,20)", 0.95},
      {"SSPRK(1,3,16)", 0.75}, {"SSPRK(1,4,10)", 0.6},
      {"TSRK(2,5,8)", 0.4474}, {"TSRK(2,6,12)", 0.3653},
      {"TSRK(2,7,12)", -1.0},  {"MSRK(5,7,12)", 0.3089},
  };
  for (const auto& row : rows) {
    IntegratorTableau tab;
    try {
      tab = load_tableau(row.name, data_dir());
    } catch (const std::exception&) {
      out.require(false, std::string(row.name) + " unavailable");
      continue;
    }
    if (row.eff > 0.0)
      out.require(std::abs(tab.effective_cfl() - row.eff) <= 0.005,
                  std::string(row.name) + " effective CFL " +
                      std::to_string(tab.effective_cfl()));
    const auto run = [&](const std::function<double(double)>& exact,
                         const RhsFn& rhs, int n) {
      const double dt = 1.0 / n;
      StepHistory h;
      for (int j = tab.steps - 1; j >= 0; --j)
        h.push({exact(-j * dt)}, -j * dt, tab.steps);
      for (int s = 0; s < n; ++s) ssp_step(tab, h, dt, rhs);
      return std::abs(h.newest()[0] - exact(1.0));
    };
    const RhsFn decay = [](double, std::vector<double>& u,
                           std::vector<double>& f) { f[0] = -u[0]; };
    const RhsFn square = [](double, std::vector<double>& u,
                            std::vector<double>& f) { f[0] = u[0] * u[0]; };
    const auto exact_decay = [](double t) { return std::exp(-t); };
    const auto exact_square = [](double t) { return 0.5 / (1.0 - 0.5 * t); };
    const double nu_lin =
        std::log2(run(exact_decay, decay, 16) / run(exact_decay, decay, 32));
    const double nu_sq = std::log2(run(exact_square, square, 16) /
                                   run(exact_square, square, 32));
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s nu=%.2f/%.2f", row.name, nu_lin, nu_sq);
    out.note(buf);
    out.require(nu_lin >= tab.order - 0.2,
                std::string(row.name) + " linear order low");
    out.require(nu_sq >= tab.order - 0.2,
                std::string(row.name) + " nonlinear order low");
  }
  return out;
}

Outcome criterion8() {
  Outcome out;
  { // Plane source even symmetry at modest resolution.
    TransportProblem problem = plane_source_problem(PlaneSourceSpec{});
    SolverConfig cfg;
    cfg.moment_order = 3;
    cfg.recon_order = 4;
    cfg.n_cells = 240;
    cfg.limiter.mode = LimiterMode::max_principle;
    cfg.limiter.c = 10.0;
    cfg.tableau_dir = data_dir();
    cfg.threads = g_threads;
    Solver solver(problem, cfg);
    SolverState s = solver.run();
    std::vector<double> moments = s.moments;
    const Reconstruction recon = solver.reconstruct(s.t, moments);
    double worst = 0.0;
    for (int j = 0; j < 120; ++j) {
      const double a = solver.sample_cell(recon, j, 0.0)[0];
      const double b = solver.sample_cell(recon, 239 - j, 0.0)[0];
      worst = std::max(worst, std::abs(a - b));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "symmetry dev %.2e", worst);
    out.note(buf);
    out.require(worst <= 1e-8, "plane-source solution not even to 1e-8");
  }
  { // M3, k=7, J=1000, c=15: oscillation content in x in [0.2, 0.3].
    TransportProblem problem = plane_source_problem(PlaneSourceSpec{});
    SolverConfig cfg;
    cfg.moment_order = 3;
    cfg.recon_order = 7;
    cfg.n_cells = 1000;
    cfg.limiter.mode = LimiterMode::max_principle;
    cfg.limiter.c = 15.0;
    cfg.tableau_dir = data_dir();
    cfg.threads = g_threads;
    cfg.q_init = 3;
    Solver solver(problem, cfg);
    SolverState s = solver.run();
    std::vector<double> moments = s.moments;
    const Reconstruction recon = solver.reconstruct(s.t, moments);
    std::vector<double> xs(201);
    for (int i = 0; i <= 200; ++i) xs[i] = 0.2 + 0.1 * i / 200.0;
    const auto samples = solver.sample_solution(recon, xs);
    double tv = 0.0, amp = 0.0;
    for (int i = 1; i <= 200; ++i)
      tv += std::abs(samples[i][0] - samples[i - 1][0]);
    const double net = std::abs(samples[200][0] - samples[0][0]);
    for (const MomentVector& u : samples) amp = std::max(amp, u[0]);
    const double wiggle = 0.5 * (tv - net);
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "J=1000 wiggle %.3e vs amplitude %.3e (%.0fs)", wiggle, amp,
                  s.diag.wall_seconds);
    out.note(buf);
    out.require(wiggle <= 0.02 * amp, "oscillation above 2% of amplitude");
  }
  { // Source beam: the final reconstruction obeys the relaxed bounds.
    TransportProblem problem = source_beam_problem(SourceBeamSpec{}, 40);
    SolverConfig cfg;
    cfg.moment_order = 1;
    cfg.recon_order = 7;
    cfg.n_cells = 150;
    cfg.limiter.mode = LimiterMode::max_principle;
    cfg.limiter.c = 1.0;
    cfg.tableau_dir = data_dir();
    cfg.threads = g_threads;
    cfg.q_init = 3;
    Solver solver(problem, cfg);
    SolverState s = solver.run();
    std::vector<double> moments = s.moments;
    const Reconstruction recon = solver.reconstruct(s.t, moments);
    const AngularQuadrature& aq = solver.angular();
    const SpatialQuadrature& sq = solver.spatial();
    const int k = cfg.recon_order;
    const int stride = cfg.n_cells + 2 * k;
    const double c_eff = cfg.limiter.effective_c(solver.mesh().dx);
    const double relax = 0.5 * c_eff * solver.mesh().dx;
    double overshoot = 0.0;
    for (int j = 0; j < cfg.n_cells; ++j) {
      double lo = 1e300, hi = -1e300;
      for (int w = j; w <= j + 2 * k; ++w)
        for (int q = 0; q < aq.n_total; ++q) {
          const double v =
              recon.psi_mean[static_cast<std::size_t>(q) * stride + w];
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      const double bound_hi = (1.0 + relax) * hi;
      const double bound_lo = (1.0 - relax) * lo;
      for (int q = 0; q < aq.n_total; ++q) {
        const double* coeffs = recon.cell_coeffs(j + 1, q);
        for (int i = 0; i < sq.n_nodes; ++i) {
          double v = coeffs[k - 1];
          for (int c = k - 2; c >= 0; --c) v = v * sq.rule.nodes[i] + coeffs[c];
          overshoot =
              std::max(overshoot, std::max(v - bound_hi, bound_lo - v) /
                                      std::max(hi, 1e-300));
        }
      }
    }
    char buf[80];
    std::snprintf(buf, sizeof buf, "beam bound overshoot %.2e (relative)",
                  overshoot);
    out.note(buf);
    out.require(overshoot <= 1e-12, "beam reconstruction violates the bounds");
  }
  return out;
}

} // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--threads") && i + 1 < argc) {
      g_threads = std::atoi(argv[++i]);
      continue;
    }
    wanted.insert(std::atoi(argv[i]));
  }
  const struct {
    int id;
    const char* what;
    Outcome (*fn)();
  } criteria[] = {
      {1, "manufactured-solution convergence", criterion1},
      {2, "optimizer property suite", criterion2},
      {3, "realizability preservation", criterion3},
      {4, "mass conservation", criterion4},
      {5, "limiter properties", criterion5},
      {6, "quadrature and reconstruction exactness", criterion6},
      {7, "time-integrator orders and effective CFL", criterion7},
      {8, "qualitative benchmark checks", criterion8},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    std::printf("criterion %d (%s) ...\n", c.id, c.what);
    std::fflush(stdout);
    Outcome out;
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %d: %s%s%s\n", out.pass ? "PASS" : "FAIL", c.id,
                c.what, out.detail.empty() ? "" : " -- ", out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
