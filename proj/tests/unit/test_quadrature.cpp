#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "mnt/quadrature.hpp"

using namespace mnt;

namespace {

double exact_monomial(double lo, double hi, int p) {
  return (std::pow(hi, p + 1) - std::pow(lo, p + 1)) / (p + 1);
}

// Adaptive composite Simpson refinement to ~1e-13.
double refine_integral(const std::function<double(double)>& f, double lo,
                       double hi) {
  double prev = 0.0;
  for (int n = 64;; n *= 2) {
    const double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
    s *= h / 3.0;
    if (n > 64 && std::abs(s - prev) < 1e-14 * (1.0 + std::abs(s))) return s;
    prev = s;
    REQUIRE(n < (1 << 22));
  }
}

} // namespace

TEST_CASE("two and three node rules match the closed forms") {
  const LobattoRule r2 = build_lobatto(2, -0.5, 0.5);
  CHECK(r2.nodes[0] == -0.5);
  CHECK(r2.nodes[1] == 0.5);
  CHECK(r2.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r2.weights[1] == doctest::Approx(0.5).epsilon(1e-15));

  const LobattoRule r3 = build_lobatto(3, -0.5, 0.5);
  CHECK(r3.nodes[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r3.weights[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(r3.weights[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("monomial exactness to degree 2n-3 for every order used") {
  for (int n : {2, 3, 4, 5, 6, 8, 10, 20, 40, 100}) {
    const LobattoRule r = build_lobatto(n, -1.0, 1.0);
    std::vector<double> f(n);
    for (int p = 0; p <= 2 * n - 3; ++p) {
      for (int i = 0; i < n; ++i) f[i] = std::pow(r.nodes[i], p);
      const double exact = exact_monomial(-1.0, 1.0, p);
      CHECK(r.integrate(f) ==
            doctest::Approx(exact).epsilon(1e-12).scale(std::max(1.0, std::abs(exact))));
    }
  }
}

TEST_CASE("degree-37 monomial on a 20-node half-range rule") {
  const LobattoRule r = build_lobatto(20, 0.0, 1.0);
  std::vector<double> f(20);
  for (int i = 0; i < 20; ++i) f[i] = std::pow(r.nodes[i], 37);
  CHECK(r.integrate(f) == doctest::Approx(1.0 / 38.0).epsilon(1e-13));
}

TEST_CASE("weights positive, symmetric, summing to the interval length") {
  for (int n : {2, 3, 7, 16, 41, 100}) {
    const LobattoRule r = build_lobatto(n, -1.0, 1.0);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(r.weights[i] > 0.0);
      CHECK(r.weights[i] == doctest::Approx(r.weights[n - 1 - i]).epsilon(1e-14));
      CHECK(r.nodes[i] == doctest::Approx(-r.nodes[n - 1 - i]).epsilon(1e-14));
      sum += r.weights[i];
    }
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("invalid arguments are rejected") {
  CHECK_THROWS_AS(build_lobatto(1, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_lobatto(4, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_angular(13, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_angular(2, 3), std::invalid_argument);
  const AngularQuadrature q = build_angular(8, 1);
  std::vector<double> wrong(5, 1.0);
  CHECK_THROWS_AS(q.integrate(wrong), std::invalid_argument);
}

TEST_CASE("angular quadrature splits into exact half ranges") {
  const AngularQuadrature q = build_angular(40, 3);
  CHECK(q.n_neg() == 20);
  CHECK(q.positive_half.size() == 20);

  std::vector<double> one(q.n_total, 1.0);
  CHECK(q.integrate(one) == doctest::Approx(2.0).epsilon(1e-13));
  std::vector<double> mu(q.mu);
  CHECK(q.integrate(mu) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  CHECK(q.integrate_pos(mu) == doctest::Approx(0.5).epsilon(1e-14));
  std::vector<double> mu2(q.n_total);
  for (int i = 0; i < q.n_total; ++i) mu2[i] = q.mu[i] * q.mu[i];
  CHECK(q.integrate(mu2) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(q.integrate(mu) ==
        doctest::Approx(q.integrate_pos(mu) + q.integrate_neg(mu)).epsilon(1e-15));

  // <m> = (2, 0, 2/3, 0)
  CHECK(q.moment(one, 0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(q.moment(one, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(q.moment(one, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(q.moment(one, 3) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("four-node rule integrates linear exactly on the half range") {
  const AngularQuadrature q = build_angular(4, 1);
  std::vector<double> mu(q.mu);
  CHECK(q.integrate_pos(mu) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("mu = 0 appears once in each half-range rule") {
  const AngularQuadrature q = build_angular(12, 2);
  CHECK(q.negative_half.nodes.back() == 0.0);
  CHECK(q.positive_half.nodes.front() == 0.0);
  CHECK(q.negative_half.weights.back() > 0.0);
  CHECK(q.positive_half.weights.front() > 0.0);
}

TEST_CASE("smooth integrands against a refinement oracle") {
  const AngularQuadrature q = build_angular(40, 7);
  std::vector<double> f(q.n_total);
  for (int i = 0; i < q.n_total; ++i)
    f[i] = std::pow(q.mu[i], 7) * std::exp(q.mu[i]);
  const double oracle = refine_integral(
      [](double mu) { return std::pow(mu, 7) * std::exp(mu); }, -1.0, 1.0);
  CHECK(q.moment(std::vector<double>(q.n_total, 1.0), 0) ==
        doctest::Approx(2.0).epsilon(1e-13));
  double val = 0.0;
  for (int i = 0; i < q.n_total; ++i) val += q.w[i] * f[i];
  CHECK(val == doctest::Approx(oracle).epsilon(1e-10));

  for (int i = 0; i < q.n_total; ++i) f[i] = std::exp(q.mu[i]);
  CHECK(q.integrate(f) ==
        doctest::Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("spatial rule node counts and endpoint weights") {
  for (int k : {1, 2, 3, 5, 7}) {
    for (int ks : {1, k}) {
      const SpatialQuadrature s = build_spatial(k, ks);
      CHECK(s.n_nodes == (k + ks + 2) / 2);
      CHECK(s.rule.nodes.front() == -0.5);
      CHECK(s.rule.nodes.back() == 0.5);
      CHECK(s.rule.weights.front() ==
            doctest::Approx(s.rule.weights.back()).epsilon(1e-15));
    }
  }
}
