// Command-line driver: single simulations and convergence studies for the
// entropy-closure transport solver.
//
//   mnt solve    --problem plane_source --N 3 --k 7 --J 1000 --limiter mp --c 15
//   mnt converge --grids 10,20,40 --k 3 --N 3
//
// A JSON config file (--config) provides defaults; explicit flags win.
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mnt/problems.hpp"
#include "mnt/run_config.hpp"
#include "mnt/solver.hpp"

namespace {

using namespace mnt;

std::string default_dir() {
#ifdef MNT_DEFAULT_TABLEAU_DIR
  return MNT_DEFAULT_TABLEAU_DIR;
#else
  return "data/tableaux";
#endif
}

TransportProblem build_problem(const RunConfig& cfg) {
  if (cfg.problem == "manufactured") {
    const ManufacturedSpec spec(cfg.manufactured_peak);
    return manufactured_problem(spec, cfg.recon_order);
  }
  if (cfg.problem == "plane_source") {
    return plane_source_problem(PlaneSourceSpec{});
  }
  return source_beam_problem(SourceBeamSpec{}, cfg.n_angular);
}

SolverConfig build_solver_config(const RunConfig& cfg) {
  SolverConfig sc;
  sc.moment_order = cfg.moment_order;
  sc.recon_order = cfg.recon_order;
  sc.n_cells = cfg.n_cells;
  sc.n_angular = cfg.n_angular;
  sc.closure = cfg.model == "pN" ? ClosureKind::pn : ClosureKind::entropy;
  sc.optimizer.tau = cfg.tau;
  sc.optimizer.eps = cfg.eps;
  sc.optimizer.r_sequence = cfg.r_sequence;
  sc.optimizer.iters_per_level = cfg.iters_per_level;
  sc.limiter.mode = cfg.limiter == "off"  ? LimiterMode::off
                    : cfg.limiter == "pp" ? LimiterMode::positivity
                                          : LimiterMode::max_principle;
  sc.limiter.c = cfg.limiter_c;
  sc.integrator = cfg.integrator;
  sc.q_init = cfg.resolved_q_init();
  sc.tableau_dir = cfg.tableau_dir.empty() ? default_dir() : cfg.tableau_dir;
  sc.t_final_override = cfg.t_final;
  sc.threads = cfg.threads;
  return sc;
}

void write_csv_header(std::FILE* f, int order) {
  std::fprintf(f, "x");
  for (int i = 0; i <= order; ++i) std::fprintf(f, ",u_%d", i);
  std::fprintf(f, "\n");
}

void write_sample(std::FILE* f, double x, const MomentVector& u) {
  std::fprintf(f, "%.17g", x);
  for (double v : u) std::fprintf(f, ",%.17g", v);
  std::fprintf(f, "\n");
}

nlohmann::json diagnostics_json(const Diagnostics& d) {
  nlohmann::json j;
  j["dt"] = d.dt;
  j["steps"] = d.steps;
  j["rhs_evaluations"] = d.rhs_evaluations;
  j["optimizer_calls"] = d.optimizer_calls;
  j["newton_iterations"] = d.newton_iterations;
  j["regularized_cells"] = d.regularized_cells;
  j["min_theta"] = d.min_theta;
  j["limiter_activations"] = d.limiter_activations;
  j["mean_out_of_bounds"] = d.mean_out_of_bounds;
  j["max_inner_euler_step"] = d.max_inner_euler_step;
  j["wall_seconds"] = d.wall_seconds;
  return j;
}

int cmd_solve(const RunConfig& cfg) {
  const std::string out_path =
      cfg.out_path.empty() ? "solution.csv" : cfg.out_path;

  if (cfg.model == "pN") {
    // First-order reference run of the linear closure.
    const TransportProblem problem = build_problem(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const PnReferenceResult ref =
        pn_reference(problem, cfg.moment_order, cfg.n_cells, cfg.n_angular,
                     cfg.t_final);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::FILE* f = std::fopen(out_path.c_str(), "w");
    if (!f) {
      std::fprintf(stderr, "cannot open %s\n", out_path.c_str());
      return 1;
    }
    std::fprintf(f, "x,u_0\n");
    for (int j = 0; j < ref.mesh.n_cells; ++j)
      std::fprintf(f, "%.17g,%.17g\n", ref.mesh.center(j), ref.w0[j]);
    std::fclose(f);
    nlohmann::json j;
    j["model"] = "pN";
    j["wall_seconds"] = wall;
    j["config"] = nlohmann::json::parse(serialize_config(cfg));
    std::ofstream(out_path + ".json") << j.dump(1) << "\n";
    std::printf("wrote %s (pN reference, %d cells)\n", out_path.c_str(),
                ref.mesh.n_cells);
    return 0;
  }

  const TransportProblem problem = build_problem(cfg);
  Solver solver(problem, build_solver_config(cfg));
  SolverState state = solver.run();
  Reconstruction recon = solver.reconstruct(state.t, state.moments);

  std::FILE* f = std::fopen(out_path.c_str(), "w");
  if (!f) {
    std::fprintf(stderr, "cannot open %s\n", out_path.c_str());
    return 1;
  }
  write_csv_header(f, cfg.moment_order);
  const Mesh& mesh = solver.mesh();
  for (int j = 0; j < mesh.n_cells; ++j) {
    write_sample(f, mesh.left_edge(j), solver.sample_cell(recon, j, -0.5));
    write_sample(f, mesh.center(j), solver.sample_cell(recon, j, 0.0));
    write_sample(f, mesh.left_edge(j) + mesh.dx, solver.sample_cell(recon, j, 0.5));
  }
  std::fclose(f);

  nlohmann::json j = diagnostics_json(state.diag);
  j["t_final"] = state.t;
  j["config"] = nlohmann::json::parse(serialize_config(cfg));
  std::ofstream(out_path + ".json") << j.dump(1) << "\n";
  std::printf("wrote %s (%ld steps, dt %.3e, wall %.2fs)\n", out_path.c_str(),
              state.diag.steps, state.diag.dt, state.diag.wall_seconds);
  return 0;
}

int cmd_converge(const RunConfig& cfg) {
  if (cfg.problem != "manufactured") {
    std::fprintf(stderr,
                 "converge needs the manufactured problem (exact solution)\n");
    return 1;
  }
  std::vector<int> grids = cfg.grids;
  if (grids.empty()) grids = {10, 20, 40};

  const ManufacturedSpec spec(cfg.manufactured_peak);
  const std::string out_path =
      cfg.out_path.empty() ? "convergence.csv" : cfg.out_path;
  std::FILE* f = std::fopen(out_path.c_str(), "w");
  if (!f) {
    std::fprintf(stderr, "cannot open %s\n", out_path.c_str());
    return 1;
  }
  std::fprintf(f, "J,E1,nu1,Einf,nuinf,seconds\n");

  double prev_e1 = -1.0, prev_einf = -1.0, prev_dx = 0.0;
  for (int grid : grids) {
    RunConfig run = cfg;
    run.n_cells = grid;
    const TransportProblem problem = build_problem(run);
    Solver solver(problem, build_solver_config(run));
    SolverState state = solver.run();
    Reconstruction recon = solver.reconstruct(state.t, state.moments);
    const double tf = state.t;
    const ErrorNorms err = error_norms(
        solver, recon, [&](double x) { return spec.w0(tf, x); });
    const double dx = solver.mesh().dx;
    std::ostringstream nu1, nuinf;
    if (prev_e1 > 0.0) {
      nu1 << observed_order(prev_e1, err.e1, prev_dx, dx);
      nuinf << observed_order(prev_einf, err.einf, prev_dx, dx);
    } else {
      nu1 << "---";
      nuinf << "---";
    }
    std::fprintf(f, "%d,%.17g,%s,%.17g,%s,%.17g\n", grid, err.e1,
                 nu1.str().c_str(), err.einf, nuinf.str().c_str(),
                 state.diag.wall_seconds);
    std::printf("J=%4d  E1=%.3e nu1=%s  Einf=%.3e  (%.2fs)\n", grid, err.e1,
                nu1.str().c_str(), err.einf, state.diag.wall_seconds);
    prev_e1 = err.e1;
    prev_einf = err.einf;
    prev_dx = dx;
  }
  std::fclose(f);
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  // A config file provides defaults; flags override.
  mnt::RunConfig cfg;
  for (int i = 1; i < argc - 1; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream in(argv[i + 1]);
      if (!in) {
        std::fprintf(stderr, "cannot read config %s\n", argv[i + 1]);
        return 1;
      }
      std::stringstream ss;
      ss << in.rdbuf();
      try {
        cfg = mnt::parse_config(ss.str());
      } catch (const std::exception& e) {
        std::fprintf(stderr, "bad config: %s\n", e.what());
        return 1;
      }
    }
  }

  CLI::App app{"entropy-closure slab transport solver"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--problem", cfg.problem,
                    "manufactured | plane_source | source_beam");
    sub->add_option("--model", cfg.model, "mN | pN");
    sub->add_option("--N", cfg.moment_order, "moment order");
    sub->add_option("--k", cfg.recon_order, "reconstruction order (1..7)");
    sub->add_option("--J", cfg.n_cells, "cell count");
    sub->add_option("--integrator", cfg.integrator, "integrator name");
    sub->add_option("--limiter", cfg.limiter, "off | pp | mp");
    sub->add_option("--c", cfg.limiter_c, "max-principle relaxation bound");
    sub->add_option("--tau", cfg.tau, "optimizer gradient tolerance");
    sub->add_option("--eps", cfg.eps, "optimizer ratio tolerance");
    sub->add_option("--k-r", cfg.iters_per_level,
                    "Newton iterations per regularization level");
    sub->add_option("--nq", cfg.n_angular, "angular node count");
    sub->add_option("--q-init", cfg.q_init, "startup substep exponent");
    sub->add_option("--t-final", cfg.t_final, "final time override");
    sub->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
    sub->add_option("--K", cfg.manufactured_peak, "manufactured peak parameter");
    sub->add_option("--out", cfg.out_path, "output CSV path");
    sub->add_option("--tableau-dir", cfg.tableau_dir,
                    "integrator coefficient directory");
    sub->add_option("--config", config_path, "JSON config file")
        ->configurable(false);
  };

  CLI::App* solve = app.add_subcommand("solve", "run one simulation");
  add_common(solve);
  CLI::App* converge =
      app.add_subcommand("converge", "manufactured-solution grid study");
  add_common(converge);
  converge->add_option("--grids", cfg.grids, "cell counts")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  }

  try {
    if (solve->parsed()) return cmd_solve(cfg);
    return cmd_converge(cfg);
  } catch (const mnt::RealizabilityError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  } catch (const mnt::InvariantViolation& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
