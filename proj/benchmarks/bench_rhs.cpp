#include <benchmark/benchmark.h>

#include "mnt/problems.hpp"
#include "mnt/solver.hpp"

namespace {

using namespace mnt;

void BM_rhs_manufactured(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const ManufacturedSpec spec(4.0);
  TransportProblem p = manufactured_problem(spec, k);
  SolverConfig cfg;
  cfg.moment_order = 3;
  cfg.recon_order = k;
  cfg.n_cells = 100;
  cfg.tableau_dir = MNT_BENCH_TABLEAU_DIR;
  cfg.integrator = "SSPRK(1,2,20)";
  Solver solver(p, cfg);
  SolverState s = solver.initial_state();
  std::vector<double> du;
  for (auto _ : state) {
    solver.rhs(0.0, s.moments, du);
    benchmark::DoNotOptimize(du.data());
  }
}
BENCHMARK(BM_rhs_manufactured)->Arg(2)->Arg(3)->Arg(7);

} // namespace
