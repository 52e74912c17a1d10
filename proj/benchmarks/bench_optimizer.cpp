#include <benchmark/benchmark.h>

#include <random>

#include "mnt/entropy_optimizer.hpp"

namespace {

using namespace mnt;

void BM_entropy_solve(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const AngularQuadrature q = build_angular(40, order);
  EntropyOptimizer opt(q, {});
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<MomentVector> inputs;
  for (int i = 0; i < 256; ++i) {
    std::vector<double> f(q.n_total);
    std::vector<double> a(order + 1);
    for (double& v : a) v = g(rng);
    for (int n = 0; n < q.n_total; ++n) {
      double e = a.back();
      for (int c = order - 1; c >= 0; --c) e = e * q.mu[n] + a[c];
      f[n] = std::exp(e);
    }
    inputs.push_back(moments_of_density(q, f));
  }
  const MultiplierVector iso = EntropyOptimizer::isotropic_multipliers(order);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(opt.solve(inputs[i % inputs.size()], iso));
    ++i;
  }
}
BENCHMARK(BM_entropy_solve)->Arg(1)->Arg(3)->Arg(7);

void BM_warm_start(benchmark::State& state) {
  const AngularQuadrature q = build_angular(40, 3);
  EntropyOptimizer opt(q, {});
  std::vector<double> f(q.n_total);
  for (int n = 0; n < q.n_total; ++n) f[n] = std::exp(1.3 * q.mu[n]);
  const MomentVector u = moments_of_density(q, f);
  const OptimizerResult warm = opt.solve(u, EntropyOptimizer::isotropic_multipliers(3));
  for (auto _ : state) benchmark::DoNotOptimize(opt.solve(u, warm.alpha_bar));
}
BENCHMARK(BM_warm_start);

} // namespace
