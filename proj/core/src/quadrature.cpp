#include "mnt/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace mnt {

namespace {

// Legendre P_n(t) and P'_n(t) by the three-term recurrence.
void legendre(int n, double t, double& p, double& dp) {
  double p0 = 1.0, p1 = t;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  // (1 - t^2) P'_n = n (P_{n-1} - t P_n)
  if (std::abs(t) < 1.0)
    dp = n * (p0 - t * p1) / (1.0 - t * t);
  else
    dp = 0.5 * n * (n + 1.0) * (t > 0 ? 1.0 : ((n % 2 == 0) ? -1.0 : 1.0));
}

// Interior Lobatto nodes on [-1, 1]: roots of P'_{n-1}.  Newton iteration
// on P'_{n-1} with P''_{n-1} from the Legendre ODE.
std::vector<double> reference_lobatto_nodes(int n) {
  const int m = n - 1;
  std::vector<double> x(n);
  x.front() = -1.0;
  x.back() = 1.0;
  for (int i = 1; i < n - 1; ++i) {
    // Chebyshev-Lobatto initial guess, then Newton.
    double t = -std::cos(M_PI * i / m);
    for (int iter = 0; iter < 100; ++iter) {
      double p, dp;
      legendre(m, t, p, dp);
      // (1 - t^2) P''_m = 2 t P'_m - m (m + 1) P_m
      const double d2p = (2.0 * t * dp - m * (m + 1.0) * p) / (1.0 - t * t);
      const double step = dp / d2p;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    x[i] = t;
  }
  // Enforce exact mirror symmetry.
  for (int i = 0; i < n / 2; ++i) {
    const double s = 0.5 * (x[n - 1 - i] - x[i]);
    x[i] = -s;
    x[n - 1 - i] = s;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  return x;
}

} // namespace

LobattoRule build_lobatto(int n, double lo, double hi) {
  if (n < 2) throw std::invalid_argument("build_lobatto: need at least 2 nodes");
  if (!(lo < hi)) throw std::invalid_argument("build_lobatto: empty interval");

  const std::vector<double> t = reference_lobatto_nodes(n);

  LobattoRule rule;
  rule.lo = lo;
  rule.hi = hi;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const int m = n - 1;
  for (int i = 0; i < n; ++i) {
    double p, dp;
    legendre(m, t[i], p, dp);
    // w_i = 2 / (n (n-1) P_{n-1}(t_i)^2) on [-1, 1], valid at the
    // endpoints as well since P_{n-1}(+-1) = (+-1)^{n-1}.
    const double wref = 2.0 / (n * m * p * p);
    rule.nodes[i] = mid + half * t[i];
    rule.weights[i] = half * wref;
  }
  // Pin the endpoints exactly.
  rule.nodes.front() = lo;
  rule.nodes.back() = hi;
  // Mirror-symmetric weights by construction of the reference nodes.
  for (int i = 0; i < n / 2; ++i) {
    const double wavg = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
    rule.weights[i] = wavg;
    rule.weights[n - 1 - i] = wavg;
  }
  return rule;
}

double LobattoRule::integrate(std::span<const double> values_at_nodes) const {
  if (static_cast<int>(values_at_nodes.size()) != size())
    throw std::invalid_argument("LobattoRule::integrate: length mismatch");
  double sum = 0.0;
  for (int i = 0; i < size(); ++i) sum += weights[i] * values_at_nodes[i];
  return sum;
}

AngularQuadrature build_angular(int n_q, int moment_order) {
  if (n_q < 4 || n_q % 2 != 0)
    throw std::invalid_argument("build_angular: node count must be even and >= 4");
  if (moment_order < 1)
    throw std::invalid_argument("build_angular: moment order must be >= 1");

  AngularQuadrature q;
  q.n_total = n_q;
  q.moment_order = moment_order;
  q.negative_half = build_lobatto(n_q / 2, -1.0, 0.0);
  q.positive_half = build_lobatto(n_q / 2, 0.0, 1.0);

  q.mu.reserve(n_q);
  q.w.reserve(n_q);
  for (int i = 0; i < q.negative_half.size(); ++i) {
    q.mu.push_back(q.negative_half.nodes[i]);
    q.w.push_back(q.negative_half.weights[i]);
  }
  for (int i = 0; i < q.positive_half.size(); ++i) {
    q.mu.push_back(q.positive_half.nodes[i]);
    q.w.push_back(q.positive_half.weights[i]);
  }

  q.basis.resize(static_cast<std::size_t>(moment_order + 1) * n_q);
  for (int qi = 0; qi < n_q; ++qi) q.basis[qi] = 1.0;
  for (int i = 1; i <= moment_order; ++i)
    for (int qi = 0; qi < n_q; ++qi)
      q.basis[static_cast<std::size_t>(i) * n_q + qi] =
          q.basis[static_cast<std::size_t>(i - 1) * n_q + qi] * q.mu[qi];
  return q;
}

double AngularQuadrature::integrate(std::span<const double> f) const {
  if (static_cast<int>(f.size()) != n_total)
    throw std::invalid_argument("AngularQuadrature::integrate: length mismatch");
  double sum = 0.0;
  for (int i = 0; i < n_total; ++i) sum += w[i] * f[i];
  return sum;
}

double AngularQuadrature::integrate_neg(std::span<const double> f) const {
  if (static_cast<int>(f.size()) != n_total)
    throw std::invalid_argument("AngularQuadrature::integrate_neg: length mismatch");
  double sum = 0.0;
  for (int i = 0; i < n_neg(); ++i) sum += w[i] * f[i];
  return sum;
}

double AngularQuadrature::integrate_pos(std::span<const double> f) const {
  if (static_cast<int>(f.size()) != n_total)
    throw std::invalid_argument("AngularQuadrature::integrate_pos: length mismatch");
  double sum = 0.0;
  for (int i = n_neg(); i < n_total; ++i) sum += w[i] * f[i];
  return sum;
}

double AngularQuadrature::moment(std::span<const double> f, int i) const {
  if (static_cast<int>(f.size()) != n_total)
    throw std::invalid_argument("AngularQuadrature::moment: length mismatch");
  const double* b = basis.data() + static_cast<std::size_t>(i) * n_total;
  double sum = 0.0;
  for (int qi = 0; qi < n_total; ++qi) sum += w[qi] * b[qi] * f[qi];
  return sum;
}

SpatialQuadrature build_spatial(int order_k, int coeff_order_ks) {
  if (order_k < 1 || coeff_order_ks < 1)
    throw std::invalid_argument("build_spatial: orders must be >= 1");
  const int nqs = (order_k + coeff_order_ks + 1 + 1) / 2; // ceil((k + k_s + 1)/2)
  SpatialQuadrature s;
  s.n_nodes = nqs;
  s.rule = build_lobatto(nqs, -0.5, 0.5);
  return s;
}

} // namespace mnt
