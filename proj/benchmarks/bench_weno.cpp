#include <benchmark/benchmark.h>

#include <random>

#include "mnt/quadrature.hpp"
#include "mnt/weno.hpp"

namespace {

using namespace mnt;

void BM_weno_cell(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  WenoConfig cfg;
  cfg.k = k;
  const SpatialQuadrature sq = build_spatial(k, k);
  const WenoReconstructor w(cfg, sq.rule);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u01(0.5, 2.0);
  std::vector<double> window(2 * k - 1);
  for (double& v : window) v = u01(rng);
  std::vector<double> coeffs(k), values(sq.n_nodes);
  for (auto _ : state) {
    w.reconstruct_in_cell(window, +1, coeffs);
    w.eval_at_nodes(coeffs, values);
    benchmark::DoNotOptimize(values.data());
  }
}
BENCHMARK(BM_weno_cell)->Arg(2)->Arg(3)->Arg(5)->Arg(7);

} // namespace
