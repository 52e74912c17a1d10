#include "mnt/moments.hpp"

#include <stdexcept>

#include "mnt/linalg.hpp"

namespace mnt {

MomentVector isotropic_moments(int moment_order) {
  MomentVector u(moment_order + 1, 0.0);
  for (int k = 0; k <= moment_order; k += 2) u[k] = 1.0 / (k + 1);
  return u;
}

MomentVector moments_of_density(const AngularQuadrature& q,
                                std::span<const double> f) {
  if (static_cast<int>(f.size()) != q.n_total)
    throw std::invalid_argument("moments_of_density: length mismatch");
  for (double v : f)
    if (v < 0.0)
      throw std::invalid_argument("moments_of_density: negative density value");
  const int n = q.moment_order + 1;
  MomentVector u(n, 0.0);
  for (int qi = 0; qi < q.n_total; ++qi) {
    const double wf = q.w[qi] * f[qi];
    for (int i = 0; i < n; ++i)
      u[i] += wf * q.basis[static_cast<std::size_t>(i) * q.n_total + qi];
  }
  return u;
}

bool is_realizable(std::span<const double> u) {
  const int order = static_cast<int>(u.size()) - 1;
  if (order < 0) return false;
  if (!(u[0] > 0.0)) return false;
  if (order == 0) return true;

  std::vector<double> m;
  if (order % 2 == 1) {
    const int n = (order - 1) / 2;
    const int sz = n + 1;
    m.resize(sz * sz);
    for (int sign : {+1, -1}) {
      for (int i = 0; i < sz; ++i)
        for (int j = 0; j < sz; ++j)
          m[i * sz + j] = u[i + j] + sign * u[i + j + 1];
      if (!cholesky_factor(m, sz)) return false;
    }
  } else {
    const int n = order / 2;
    {
      const int sz = n + 1;
      m.resize(sz * sz);
      for (int i = 0; i < sz; ++i)
        for (int j = 0; j < sz; ++j) m[i * sz + j] = u[i + j];
      if (!cholesky_factor(m, sz)) return false;
    }
    {
      const int sz = n;
      m.assign(sz * sz, 0.0);
      for (int i = 0; i < sz; ++i)
        for (int j = 0; j < sz; ++j) m[i * sz + j] = u[i + j] - u[i + j + 2];
      if (!cholesky_factor(m, sz)) return false;
    }
  }
  return true;
}

MomentVector regularize(std::span<const double> u, double r) {
  if (!(r >= 0.0 && r <= 1.0))
    throw std::invalid_argument("regularize: r must lie in [0, 1]");
  const int order = static_cast<int>(u.size()) - 1;
  MomentVector v(u.begin(), u.end());
  if (r == 0.0) return v;
  const MomentVector iso = isotropic_moments(order);
  for (int k = 0; k <= order; ++k) v[k] = (1.0 - r) * u[k] + r * u[0] * iso[k];
  return v;
}

NormalizedMoments normalize(std::span<const double> u) {
  if (u.empty() || !(u[0] > 0.0))
    throw std::domain_error("normalize: nonpositive zeroth moment");
  NormalizedMoments out;
  out.scale = u[0];
  out.scaled.assign(u.begin(), u.end());
  const double inv = 1.0 / out.scale;
  for (double& v : out.scaled) v *= inv;
  out.scaled[0] = 1.0;
  return out;
}

} // namespace mnt
