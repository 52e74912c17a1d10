#include <doctest.h>

#include <cmath>
#include <random>

#include "mnt/moments.hpp"
#include "nnls_oracle.hpp"

using namespace mnt;

TEST_CASE("isotropic density gives the textbook moments") {
  const AngularQuadrature q = build_angular(40, 3);
  std::vector<double> f(q.n_total, 0.5);
  const MomentVector u = moments_of_density(q, f);
  CHECK(u[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(u[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(u[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(u[3] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("point mass at mu = 1 has all-ones moments") {
  const AngularQuadrature q = build_angular(40, 3);
  std::vector<double> f(q.n_total, 0.0);
  f[q.n_total - 1] = 1.0 / q.w[q.n_total - 1];
  const MomentVector u = moments_of_density(q, f);
  for (double v : u) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("forward-peaked exponential matches the closed-form flux ratio") {
  const AngularQuadrature q = build_angular(40, 1);
  std::vector<double> f(q.n_total);
  for (int i = 0; i < q.n_total; ++i) f[i] = std::exp(4.0 * q.mu[i]);
  const MomentVector u = moments_of_density(q, f);
  // <mu e^{4mu}>/<e^{4mu}> = coth(4) - 1/4
  const double expected = 1.0 / std::tanh(4.0) - 0.25;
  CHECK(u[1] / u[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("negative densities are rejected") {
  const AngularQuadrature q = build_angular(8, 1);
  std::vector<double> f(q.n_total, 1.0);
  f[3] = -1e-9;
  CHECK_THROWS_AS(moments_of_density(q, f), std::invalid_argument);
}

TEST_CASE("first-order realizability is the flux bound") {
  CHECK(is_realizable(std::vector<double>{1.0, 0.5}));
  CHECK_FALSE(is_realizable(std::vector<double>{1.0, 1.0}));
  CHECK_FALSE(is_realizable(std::vector<double>{1.0, -1.0}));
  CHECK_FALSE(is_realizable(std::vector<double>{0.0, 0.0}));
}

TEST_CASE("moments of positive densities are realizable") {
  const AngularQuadrature q = build_angular(40, 3);
  std::mt19937_64 rng(20240214);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> f(q.n_total);
    const double a0 = g(rng), a1 = 2.0 * g(rng), a2 = g(rng), a3 = g(rng);
    for (int i = 0; i < q.n_total; ++i) {
      const double mu = q.mu[i];
      f[i] = std::exp(a0 + mu * (a1 + mu * (a2 + mu * a3)));
    }
    CHECK(is_realizable(moments_of_density(q, f)));
  }
  // A vector from exp(4 mu) specifically (construction from a density).
  std::vector<double> f(q.n_total);
  for (int i = 0; i < q.n_total; ++i) f[i] = std::exp(4.0 * q.mu[i]);
  CHECK(is_realizable(moments_of_density(q, f)));
}

TEST_CASE("Hankel test agrees with a brute-force density search near the boundary") {
  const AngularQuadrature q = build_angular(40, 3);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    // Blend a random realizable vector toward the boundary point m(1).
    std::vector<double> f(q.n_total);
    const double a1 = 6.0 * u01(rng) - 3.0;
    for (int i = 0; i < q.n_total; ++i) f[i] = std::exp(a1 * q.mu[i]);
    MomentVector u = moments_of_density(q, f);
    const NormalizedMoments nm = normalize(u);
    u = nm.scaled;
    const double blend = u01(rng) * 1.4; // past 1: not realizable
    MomentVector v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      v[i] = (1.0 - blend) * u[i] + blend * 1.0; // moments of delta at mu=1
    const bool hankel = is_realizable(v);
    const double resid = mnt_test::nnls_residual(v);
    // Skip the ambiguous band around the boundary.
    if (std::abs(1.0 - blend) < 1e-2) continue;
    ++checked;
    if (hankel) CHECK(resid < 1e-8);
    if (resid > 1e-6) CHECK_FALSE(hankel);
  }
  CHECK(checked > 300);
}

TEST_CASE("regularization blends toward the isotropic cone interior") {
  const MomentVector u{2.0, 1.0, 1.0, 0.5};
  CHECK(regularize(u, 0.0) == u);

  const MomentVector full = regularize(u, 1.0);
  CHECK(full[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(full[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(full[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(full[3] == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));

  const MomentVector w{1.0, 0.9, 0.82, 0.75};
  const double r = 1e-4;
  const MomentVector v = regularize(w, r);
  const MomentVector iso = isotropic_moments(3);
  for (int i = 0; i < 4; ++i)
    CHECK(v[i] == doctest::Approx((1 - r) * w[i] + r * iso[i]).epsilon(1e-15));

  CHECK_THROWS_AS(regularize(u, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(regularize(u, 1.1), std::invalid_argument);
}

TEST_CASE("regularization keeps realizability along the whole path") {
  const AngularQuadrature q = build_angular(40, 3);
  std::mt19937_64 rng(5150);
  std::normal_distribution<double> g(0.0, 1.5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> f(q.n_total);
    const double a1 = g(rng), a3 = g(rng);
    for (int i = 0; i < q.n_total; ++i)
      f[i] = std::exp(a1 * q.mu[i] + a3 * std::pow(q.mu[i], 3));
    const MomentVector u = moments_of_density(q, f);
    for (double r : {1e-8, 1e-4, 1e-2, 0.5, 1.0})
      CHECK(is_realizable(regularize(u, r)));
  }
}

TEST_CASE("normalize scales the zeroth component to one and back") {
  const MomentVector u{2.0, 0.0, 2.0 / 3.0, 0.0};
  const NormalizedMoments nm = normalize(u);
  CHECK(nm.scale == 2.0);
  CHECK(nm.scaled[0] == 1.0);
  CHECK(nm.scaled[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  for (std::size_t i = 0; i < u.size(); ++i)
    CHECK(nm.scale * nm.scaled[i] == doctest::Approx(u[i]).epsilon(1e-15));

  const MomentVector tiny{1e-10, 0.0, 3e-11, 0.0};
  const NormalizedMoments nt = normalize(tiny);
  CHECK(nt.scale == doctest::Approx(1e-10));
  CHECK(nt.scaled[0] == 1.0);

  CHECK_THROWS_AS(normalize(std::vector<double>{-1.0, 0.0}),
                  std::domain_error);
  CHECK_THROWS_AS(normalize(std::vector<double>{0.0, 0.0}),
                  std::domain_error);
}
