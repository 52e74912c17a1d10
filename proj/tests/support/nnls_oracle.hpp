#pragma once

// Brute-force realizability oracle for the tests: a moment vector is
// numerically realizable iff some nonnegative density on a dense angular
// grid reproduces it.  Feasibility is decided by Lawson-Hanson NNLS on
// the (n_moments x n_grid) monomial matrix; a tiny residual means
// realizable.  Independent of the Hankel path under test.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace mnt_test {

inline double nnls_residual(std::span<const double> u, int n_grid = 2000) {
  const int nm = static_cast<int>(u.size());
  // Columns: m(mu_g) for grid points mu_g in [-1, 1].
  std::vector<double> a(static_cast<std::size_t>(nm) * n_grid);
  for (int g = 0; g < n_grid; ++g) {
    const double mu = -1.0 + 2.0 * (g + 0.5) / n_grid;
    double p = 1.0;
    for (int i = 0; i < nm; ++i) {
      a[static_cast<std::size_t>(i) * n_grid + g] = p;
      p *= mu;
    }
  }
  std::vector<double> x(n_grid, 0.0);
  std::vector<bool> passive(n_grid, false);
  std::vector<double> resid(u.begin(), u.end());

  auto compute_residual = [&] {
    for (int i = 0; i < nm; ++i) {
      double s = u[i];
      for (int g = 0; g < n_grid; ++g)
        if (x[g] != 0.0) s -= a[static_cast<std::size_t>(i) * n_grid + g] * x[g];
      resid[i] = s;
    }
  };

  // Lawson-Hanson main loop (small active sets; nm <= 8).
  for (int outer = 0; outer < 200; ++outer) {
    compute_residual();
    // gradient w = A^T resid
    int best = -1;
    double best_w = 1e-12;
    for (int g = 0; g < n_grid; ++g) {
      if (passive[g]) continue;
      double w = 0.0;
      for (int i = 0; i < nm; ++i)
        w += a[static_cast<std::size_t>(i) * n_grid + g] * resid[i];
      if (w > best_w) {
        best_w = w;
        best = g;
      }
    }
    if (best < 0) break;
    passive[best] = true;

    // Inner loop: least squares on the passive set with positivity repair.
    for (int inner = 0; inner < 100; ++inner) {
      std::vector<int> idx;
      for (int g = 0; g < n_grid; ++g)
        if (passive[g]) idx.push_back(g);
      const int np = static_cast<int>(idx.size());
      // Normal equations (np x np).
      std::vector<double> ata(np * np, 0.0), atb(np, 0.0), z(np);
      for (int r = 0; r < np; ++r) {
        for (int c = 0; c <= r; ++c) {
          double s = 0.0;
          for (int i = 0; i < nm; ++i)
            s += a[static_cast<std::size_t>(i) * n_grid + idx[r]] *
                 a[static_cast<std::size_t>(i) * n_grid + idx[c]];
          ata[r * np + c] = ata[c * np + r] = s;
        }
        double s = 0.0;
        for (int i = 0; i < nm; ++i)
          s += a[static_cast<std::size_t>(i) * n_grid + idx[r]] * u[i];
        atb[r] = s;
      }
      // Solve with a tiny ridge for numerical safety.
      for (int r = 0; r < np; ++r) ata[r * np + r] += 1e-14;
      // Gaussian elimination.
      z = atb;
      for (int col = 0; col < np; ++col) {
        int piv = col;
        for (int r = col + 1; r < np; ++r)
          if (std::abs(ata[r * np + col]) > std::abs(ata[piv * np + col])) piv = r;
        for (int c = 0; c < np; ++c) std::swap(ata[piv * np + c], ata[col * np + c]);
        std::swap(z[piv], z[col]);
        for (int r = col + 1; r < np; ++r) {
          const double f = ata[r * np + col] / ata[col * np + col];
          for (int c = col; c < np; ++c) ata[r * np + c] -= f * ata[col * np + c];
          z[r] -= f * z[col];
        }
      }
      for (int r = np - 1; r >= 0; --r) {
        double s = z[r];
        for (int c = r + 1; c < np; ++c) s -= ata[r * np + c] * z[c];
        z[r] = s / ata[r * np + r];
      }
      bool all_positive = true;
      for (double v : z)
        if (v <= 0.0) all_positive = false;
      if (all_positive) {
        for (int g = 0; g < n_grid; ++g) x[g] = 0.0;
        for (int r = 0; r < np; ++r) x[idx[r]] = z[r];
        break;
      }
      // Step toward z until the first coordinate hits zero; drop it.
      double alpha = 1.0;
      for (int r = 0; r < np; ++r)
        if (z[r] <= 0.0) {
          const double xr = x[idx[r]];
          if (xr - z[r] > 0.0) alpha = std::min(alpha, xr / (xr - z[r]));
        }
      for (int r = 0; r < np; ++r) {
        x[idx[r]] += alpha * (z[r] - x[idx[r]]);
        if (x[idx[r]] <= 1e-15) {
          x[idx[r]] = 0.0;
          passive[idx[r]] = false;
        }
      }
    }
    compute_residual();
    double rn = 0.0;
    for (double v : resid) rn += v * v;
    if (std::sqrt(rn) < 1e-12) break;
  }
  compute_residual();
  double rn = 0.0;
  for (double v : resid) rn += v * v;
  return std::sqrt(rn);
}

inline bool oracle_realizable(std::span<const double> u, double tol = 1e-8) {
  return nnls_residual(u) < tol;
}

} // namespace mnt_test
