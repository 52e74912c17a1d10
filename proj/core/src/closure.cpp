#include "mnt/closure.hpp"

#include <cmath>
#include <stdexcept>

#include "mnt/entropy_optimizer.hpp"
#include "mnt/linalg.hpp"

namespace mnt {

AngularValues eval_ansatz(std::span<const double> alpha,
                          const AngularQuadrature& q) {
  const int nvar = static_cast<int>(alpha.size());
  AngularValues psi(q.n_total);
  for (int qi = 0; qi < q.n_total; ++qi) {
    const double mu = q.mu[qi];
    double e = alpha[nvar - 1];
    for (int i = nvar - 2; i >= 0; --i) e = e * mu + alpha[i];
    if (e > EntropyOptimizer::exponent_guard)
      throw std::overflow_error("eval_ansatz: exponent overflow");
    psi[qi] = std::exp(e);
  }
  return psi;
}

MomentVector flux_moments(std::span<const double> psi,
                          const AngularQuadrature& q) {
  if (static_cast<int>(psi.size()) != q.n_total)
    throw std::invalid_argument("flux_moments: length mismatch");
  const int n = q.moment_order + 1;
  MomentVector f(n, 0.0);
  for (int qi = 0; qi < q.n_total; ++qi) {
    double t = q.w[qi] * q.mu[qi] * psi[qi];
    for (int i = 0; i < n; ++i) {
      f[i] += t;
      t *= q.mu[qi];
    }
  }
  return f;
}

CollisionKernel CollisionKernel::isotropic(const AngularQuadrature& q) {
  CollisionKernel k(q);
  k.isotropic_ = true;
  double wsum = 0.0;
  for (double w : q.w) wsum += w;
  k.inv_weight_sum_ = 1.0 / wsum;
  return k;
}

CollisionKernel CollisionKernel::from_function(
    const AngularQuadrature& q,
    const std::function<double(double, double)>& t) {
  CollisionKernel k(q);
  const int nq = q.n_total;
  k.values_.resize(static_cast<std::size_t>(nq) * nq);
  for (int to = 0; to < nq; ++to)
    for (int from = 0; from < nq; ++from) {
      const double v = t(q.mu[to], q.mu[from]);
      if (!(v > 0.0))
        throw std::invalid_argument("CollisionKernel: kernel must be strictly positive");
      k.values_[static_cast<std::size_t>(to) * nq + from] = v;
    }
  // Normalize the integral over the outgoing angle for each incoming node.
  for (int from = 0; from < nq; ++from) {
    double s = 0.0;
    for (int to = 0; to < nq; ++to)
      s += q.w[to] * k.values_[static_cast<std::size_t>(to) * nq + from];
    const double inv = 1.0 / s;
    for (int to = 0; to < nq; ++to)
      k.values_[static_cast<std::size_t>(to) * nq + from] *= inv;
  }
  return k;
}

void CollisionKernel::gain(std::span<const double> psi,
                           std::span<double> psi_c) const {
  const int nq = q_->n_total;
  if (isotropic_) {
    double s = 0.0;
    for (int i = 0; i < nq; ++i) s += q_->w[i] * psi[i];
    const double c = s * inv_weight_sum_;
    for (int i = 0; i < nq; ++i) psi_c[i] = c;
    return;
  }
  for (int to = 0; to < nq; ++to) {
    double s = 0.0;
    const double* row = values_.data() + static_cast<std::size_t>(to) * nq;
    for (int from = 0; from < nq; ++from) s += q_->w[from] * row[from] * psi[from];
    psi_c[to] = s;
  }
}

MomentVector collision_moments(std::span<const double> psi,
                               const CollisionKernel& kernel,
                               const AngularQuadrature& q) {
  AngularValues psi_c(q.n_total);
  kernel.gain(psi, psi_c);
  for (int i = 0; i < q.n_total; ++i) psi_c[i] -= psi[i];
  const int n = q.moment_order + 1;
  MomentVector r(n, 0.0);
  for (int qi = 0; qi < q.n_total; ++qi) {
    double t = q.w[qi] * psi_c[qi];
    for (int i = 0; i < n; ++i) {
      r[i] += t;
      t *= q.mu[qi];
    }
  }
  return r;
}

AngularValues collision_ansatz_part(std::span<const double> psi,
                                    const CollisionKernel& kernel) {
  AngularValues psi_c(psi.size());
  kernel.gain(psi, psi_c);
  return psi_c;
}

std::vector<double> pn_multipliers(std::span<const double> u,
                                   const AngularQuadrature& q) {
  const int n = static_cast<int>(u.size());
  std::vector<double> gram(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int qi = 0; qi < q.n_total; ++qi)
        s += q.w[qi] * q.basis[static_cast<std::size_t>(i) * q.n_total + qi] *
             q.basis[static_cast<std::size_t>(j) * q.n_total + qi];
      gram[i * n + j] = s;
    }
  std::vector<double> beta(u.begin(), u.end());
  if (!lu_solve(gram, n, beta))
    throw std::runtime_error("pn_multipliers: singular Gram matrix");
  return beta;
}

MomentVector pn_closure_flux(std::span<const double> u,
                             const AngularQuadrature& q) {
  const std::vector<double> beta = pn_multipliers(u, q);
  const int n = static_cast<int>(u.size());
  AngularValues psi(q.n_total);
  for (int qi = 0; qi < q.n_total; ++qi) {
    const double mu = q.mu[qi];
    double v = beta[n - 1];
    for (int i = n - 2; i >= 0; --i) v = v * mu + beta[i];
    psi[qi] = v;
  }
  return flux_moments(psi, q);
}

} // namespace mnt
