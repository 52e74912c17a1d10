#include "mnt/entropy_optimizer.hpp"

#include <cmath>
#include <limits>

#include "mnt/linalg.hpp"

namespace mnt {

void OptimizerConfig::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("optimizer: tau must be > 0");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("optimizer: eps must lie in (0, 1)");
  if (iters_per_level < 1)
    throw std::invalid_argument("optimizer: iters_per_level must be >= 1");
  double prev = 0.0;
  for (double r : r_sequence) {
    if (!(r > prev && r <= 1.0))
      throw std::invalid_argument(
          "optimizer: r_sequence must be strictly ascending in (0, 1]");
    prev = r;
  }
}

EntropyOptimizer::EntropyOptimizer(const AngularQuadrature& q,
                                   OptimizerConfig cfg)
    : q_(&q), cfg_(std::move(cfg)), nvar_(q.moment_order + 1) {
  cfg_.validate();
  sums_.resize(2 * q.moment_order + 1);
  g_.resize(nvar_);
  h_.resize(nvar_ * nvar_);
  d_.resize(nvar_);
  trial_.resize(nvar_);
}

MultiplierVector EntropyOptimizer::isotropic_multipliers(int moment_order) {
  MultiplierVector alpha(moment_order + 1, 0.0);
  alpha[0] = -std::log(2.0);
  return alpha;
}

bool EntropyOptimizer::power_sums(std::span<const double> alpha) {
  const int n_sums = static_cast<int>(sums_.size());
  for (double& s : sums_) s = 0.0;
  const int nq = q_->n_total;
  for (int qi = 0; qi < nq; ++qi) {
    const double mu = q_->mu[qi];
    double e = alpha[nvar_ - 1];
    for (int i = nvar_ - 2; i >= 0; --i) e = e * mu + alpha[i];
    if (e > exponent_guard) return false;
    double t = q_->w[qi] * std::exp(e);
    for (int p = 0; p < n_sums; ++p) {
      sums_[p] += t;
      t *= mu;
    }
  }
  return true;
}

bool EntropyOptimizer::dual_gradient_hessian(std::span<const double> alpha,
                                             std::span<const double> u,
                                             std::span<double> g,
                                             std::span<double> h) {
  if (!power_sums(alpha)) return false;
  for (int i = 0; i < nvar_; ++i) g[i] = sums_[i] - u[i];
  for (int i = 0; i < nvar_; ++i)
    for (int j = 0; j < nvar_; ++j) h[i * nvar_ + j] = sums_[i + j];
  return true;
}

double EntropyOptimizer::zeroth_moment(std::span<const double> alpha) {
  if (!power_sums(alpha)) return std::numeric_limits<double>::quiet_NaN();
  return sums_[0];
}

MultiplierVector EntropyOptimizer::shift_zeroth(std::span<const double> alpha) {
  const double u0 = zeroth_moment(alpha);
  MultiplierVector out(alpha.begin(), alpha.end());
  out[0] -= std::log(u0);
  return out;
}

double EntropyOptimizer::objective(std::span<const double> alpha,
                                   std::span<const double> u) {
  const int nq = q_->n_total;
  double s0 = 0.0;
  for (int qi = 0; qi < nq; ++qi) {
    const double mu = q_->mu[qi];
    double e = alpha[nvar_ - 1];
    for (int i = nvar_ - 2; i >= 0; --i) e = e * mu + alpha[i];
    if (e > exponent_guard) return std::numeric_limits<double>::infinity();
    s0 += q_->w[qi] * std::exp(e);
  }
  double ua = 0.0;
  for (int i = 0; i < nvar_; ++i) ua += u[i] * alpha[i];
  return s0 - ua;
}

NewtonStatus EntropyOptimizer::newton_solve(std::span<const double> u,
                                            MultiplierVector& alpha,
                                            int max_iters, int& iters_used) {
  iters_used = 0;
  const double unorm = norm2(u);
  const double tau_prime = cfg_.tau / (1.0 + unorm + cfg_.tau);

  std::vector<double> chol(nvar_ * nvar_);
  for (int iter = 0; iter <= max_iters; ++iter) {
    if (!dual_gradient_hessian(alpha, u, g_, h_)) return NewtonStatus::solver_failure;

    chol = h_;
    if (!cholesky_factor(chol, nvar_)) return NewtonStatus::solver_failure;
    for (int i = 0; i < nvar_; ++i) d_[i] = -g_[i];
    cholesky_solve(chol, nvar_, d_);

    const double gnorm = norm2(g_);
    if (gnorm < tau_prime) {
      // u_0(alpha) = s_0 = g_0 + u_0; the target is normalized so u_0 = 1.
      const double u0_alpha = g_[0] + u[0];
      const double gamma = std::exp(-norm1(d_) - std::abs(std::log(u0_alpha)));
      if (1.0 - cfg_.eps < gamma) return NewtonStatus::converged;
    }
    if (iter == max_iters) break;

    // Backtracking Armijo line search along the Newton direction.  Close
    // to the optimum the true decrease drops below the floating-point
    // resolution of the objective; the resolution slack keeps the full
    // Newton step acceptable there.
    const double f0 = objective(alpha, u);
    const double slope = dot(g_, d_);
    const double f_res =
        16.0 * std::numeric_limits<double>::epsilon() * std::abs(f0);
    double lambda = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < cfg_.max_line_search; ++ls) {
      for (int i = 0; i < nvar_; ++i) trial_[i] = alpha[i] + lambda * d_[i];
      const double f1 = objective(trial_, u);
      if (f1 <= f0 + cfg_.chi * lambda * slope + f_res) {
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) return NewtonStatus::solver_failure;
    for (int i = 0; i < nvar_; ++i) alpha[i] = trial_[i];
    ++iters_used;
  }
  return NewtonStatus::not_converged;
}

OptimizerResult EntropyOptimizer::solve(std::span<const double> u,
                                        const MultiplierVector& alpha_init) {
  const NormalizedMoments nm = normalize(u);

  OptimizerResult result;
  result.scale = nm.scale;

  MultiplierVector alpha = alpha_init;
  const MultiplierVector iso = isotropic_multipliers(q_->moment_order);

  auto attempt = [&](std::span<const double> target) {
    int iters = 0;
    const NewtonStatus st = newton_solve(target, alpha, cfg_.iters_per_level, iters);
    result.iterations += iters;
    return st;
  };

  // r = 0 from the caller's warm start.
  if (attempt(nm.scaled) == NewtonStatus::converged) {
    result.alpha_bar = shift_zeroth(alpha);
    return result;
  }

  // r = 0 again from the isotropic multipliers, the safest initial guess.
  alpha = iso;
  if (attempt(nm.scaled) == NewtonStatus::converged) {
    result.alpha_bar = shift_zeroth(alpha);
    return result;
  }

  // Walk the regularization sequence on v(u, r).
  for (std::size_t level = 0; level < cfg_.r_sequence.size(); ++level) {
    const double r = cfg_.r_sequence[level];
    const MomentVector v = regularize(nm.scaled, r);
    bool finite = true;
    for (double a : alpha)
      if (!std::isfinite(a)) finite = false;
    if (!finite) alpha = iso;
    if (attempt(v) == NewtonStatus::converged) {
      result.alpha_bar = shift_zeroth(alpha);
      result.r_used = r;
      return result;
    }
  }
  throw RealizabilityError(
      "entropy optimizer failed at the largest regularization level");
}

} // namespace mnt
