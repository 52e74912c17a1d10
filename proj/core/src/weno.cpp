#include "mnt/weno.hpp"

#include <cmath>
#include <stdexcept>

namespace mnt {

void WenoConfig::validate() const {
  if (k < 1 || k > 7)
    throw std::invalid_argument("weno: order must lie in 1..7");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("weno: epsilon must be > 0");
  if (!(power_p > 0.0))
    throw std::invalid_argument("weno: power must be > 0");
}

void fill_ghosts(std::span<double> means, int n_cells, int k,
                 BoundaryKind kind, double left_value, double right_value) {
  if (static_cast<int>(means.size()) != n_cells + 2 * k)
    throw std::invalid_argument("fill_ghosts: bad array size");
  if (kind == BoundaryKind::dirichlet) {
    for (int g = 0; g < k; ++g) {
      means[g] = left_value;
      means[k + n_cells + g] = right_value;
    }
  } else {
    for (int g = 0; g < k; ++g) {
      means[g] = means[n_cells + g];            // cells J-k+1 .. J
      means[k + n_cells + g] = means[k + g];    // cells 1 .. k
    }
  }
}

namespace {

// Exact inverse of a small system in long double via Gauss-Jordan.
std::vector<long double> invert(std::vector<long double> a, int n) {
  std::vector<long double> inv(n * n, 0.0L);
  for (int i = 0; i < n; ++i) inv[i * n + i] = 1.0L;
  for (int col = 0; col < n; ++col) {
    int p = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r * n + col]) > std::fabs(a[p * n + col])) p = r;
    if (a[p * n + col] == 0.0L) throw std::runtime_error("weno: singular table");
    if (p != col)
      for (int c = 0; c < n; ++c) {
        std::swap(a[p * n + c], a[col * n + c]);
        std::swap(inv[p * n + c], inv[col * n + c]);
      }
    const long double piv = a[col * n + col];
    for (int c = 0; c < n; ++c) {
      a[col * n + c] /= piv;
      inv[col * n + c] /= piv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const long double f = a[r * n + col];
      if (f == 0.0L) continue;
      for (int c = 0; c < n; ++c) {
        a[r * n + c] -= f * a[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  return inv;
}

// Average of xi^c over the cell at integer offset o: cells are unit wide
// in reference coordinates, so this is the plain integral.
long double cell_average(int offset, int c) {
  const long double hi = offset + 0.5L;
  const long double lo = offset - 0.5L;
  return (std::pow(hi, c + 1) - std::pow(lo, c + 1)) / (c + 1);
}

// Mean-to-coefficient map for a stencil of k consecutive cells starting
// at integer offset `first`.
std::vector<long double> coeff_map_for(int first, int k) {
  std::vector<long double> a(k * k);
  for (int m = 0; m < k; ++m)
    for (int c = 0; c < k; ++c) a[m * k + c] = cell_average(first + m, c);
  return invert(std::move(a), k);
}

} // namespace

WenoReconstructor::WenoReconstructor(const WenoConfig& cfg,
                                     const LobattoRule& spatial_rule)
    : k_(cfg.k), eps_(cfg.epsilon), power_p_(cfg.power_p) {
  cfg.validate();
  const int k = k_;

  // Candidate maps C_r: substencil r covers cells j-r .. j-r+k-1.
  std::vector<std::vector<long double>> maps(k);
  for (int r = 0; r < k; ++r) maps[r] = coeff_map_for(-r, k);
  coeff_map_.resize(static_cast<std::size_t>(k) * k * k);
  for (int r = 0; r < k; ++r)
    for (int i = 0; i < k * k; ++i)
      coeff_map_[static_cast<std::size_t>(r) * k * k + i] =
          static_cast<double>(maps[r][i]);

  // Jiang-Shu quadratic form in coefficient space:
  // M_cd = sum_l (c)_l (d)_l Int xi^{c+d-2l} dxi over [-1/2, 1/2].
  std::vector<long double> m_form(k * k, 0.0L);
  for (int c = 1; c < k; ++c)
    for (int d = 1; d < k; ++d)
      for (int l = 1; l <= std::min(c, d); ++l) {
        long double fc = 1.0L, fd = 1.0L;
        for (int t = 0; t < l; ++t) {
          fc *= (c - t);
          fd *= (d - t);
        }
        const int e = c + d - 2 * l;
        if (e % 2 == 0)
          m_form[c * k + d] += fc * fd * std::pow(0.5L, e) / (e + 1);
      }
  beta_form_.resize(static_cast<std::size_t>(k) * k * k);
  for (int r = 0; r < k; ++r) {
    // B_r = C_r^T M C_r
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        long double s = 0.0L;
        for (int c = 0; c < k; ++c)
          for (int d = 0; d < k; ++d)
            s += maps[r][c * k + a] * m_form[c * k + d] * maps[r][d * k + b];
        beta_form_[(static_cast<std::size_t>(r) * k + a) * k + b] =
            static_cast<double>(s);
      }
  }

  // Optimal linear weights for each edge from the union-stencil
  // reconstruction (degree 2k-2 over cells j-k+1 .. j+k-1).
  d_right_.assign(k, 0.0);
  d_left_.assign(k, 0.0);
  if (k == 1) {
    d_right_[0] = d_left_[0] = 1.0;
  } else {
    const int kw = 2 * k - 1;
    const std::vector<long double> union_map = coeff_map_for(-(k - 1), kw);
    for (bool right : {true, false}) {
      const long double xi = right ? 0.5L : -0.5L;
      // v[w][r]: edge value of candidate r for unit mean in window slot w.
      std::vector<long double> v(static_cast<std::size_t>(kw) * k, 0.0L);
      std::vector<long double> b(kw, 0.0L);
      for (int w = 0; w < kw; ++w) {
        long double xp = 1.0L;
        for (int c = 0; c < kw; ++c) {
          b[w] += union_map[c * kw + w] * xp;
          xp *= xi;
        }
        for (int r = 0; r < k; ++r) {
          const int m = w - (k - 1 - r);  // slot within substencil r
          if (m < 0 || m >= k) continue;
          long double val = 0.0L, xq = 1.0L;
          for (int c = 0; c < k; ++c) {
            val += maps[r][c * k + m] * xq;
            xq *= xi;
          }
          v[static_cast<std::size_t>(w) * k + r] = val;
        }
      }
      // Least squares V d = b via normal equations.
      std::vector<long double> vtv(k * k, 0.0L), vtb(k, 0.0L);
      for (int r = 0; r < k; ++r) {
        for (int s = 0; s < k; ++s) {
          long double acc = 0.0L;
          for (int w = 0; w < kw; ++w)
            acc += v[static_cast<std::size_t>(w) * k + r] *
                   v[static_cast<std::size_t>(w) * k + s];
          vtv[r * k + s] = acc;
        }
        long double acc = 0.0L;
        for (int w = 0; w < kw; ++w)
          acc += v[static_cast<std::size_t>(w) * k + r] * b[w];
        vtb[r] = acc;
      }
      std::vector<long double> sys = vtv;
      std::vector<long double> d = vtb;
      // Gauss elimination (small, SPD).
      for (int col = 0; col < k; ++col) {
        const long double piv = sys[col * k + col];
        for (int row = col + 1; row < k; ++row) {
          const long double f = sys[row * k + col] / piv;
          for (int c = col; c < k; ++c) sys[row * k + c] -= f * sys[col * k + c];
          d[row] -= f * d[col];
        }
      }
      for (int row = k - 1; row >= 0; --row) {
        long double s = d[row];
        for (int c = row + 1; c < k; ++c) s -= sys[row * k + c] * d[c];
        d[row] = s / sys[row * k + row];
      }
      // The combination must reproduce the union reconstruction exactly.
      for (int w = 0; w < kw; ++w) {
        long double resid = -b[w];
        for (int r = 0; r < k; ++r)
          resid += d[r] * v[static_cast<std::size_t>(w) * k + r];
        if (std::fabs(resid) > 1e-9L)
          throw std::runtime_error("weno: optimal weights do not reproduce the union stencil");
      }
      for (int r = 0; r < k; ++r) {
        if (!(d[r] > 0.0L))
          throw std::runtime_error("weno: nonpositive optimal weight");
        (right ? d_right_ : d_left_)[r] = static_cast<double>(d[r]);
      }
    }
  }

  // Evaluation table at the spatial quadrature nodes.
  const int nn = spatial_rule.size();
  node_eval_.resize(static_cast<std::size_t>(nn) * k);
  for (int i = 0; i < nn; ++i) {
    double xp = 1.0;
    for (int c = 0; c < k; ++c) {
      node_eval_[static_cast<std::size_t>(i) * k + c] = xp;
      xp *= spatial_rule.nodes[i];
    }
  }
}

void WenoReconstructor::candidate_polynomial(std::span<const double> means,
                                             int left_shift,
                                             std::span<double> coeffs) const {
  const int k = k_;
  if (static_cast<int>(means.size()) != k || left_shift < 0 || left_shift >= k)
    throw std::invalid_argument("candidate_polynomial: bad arguments");
  const double* map = coeff_map_.data() + static_cast<std::size_t>(left_shift) * k * k;
  for (int c = 0; c < k; ++c) {
    double s = 0.0;
    for (int m = 0; m < k; ++m) s += map[c * k + m] * means[m];
    coeffs[c] = s;
  }
}

double WenoReconstructor::smoothness(std::span<const double> window,
                                     int r) const {
  const int k = k_;
  const double* slice = window.data() + (k - 1 - r);
  const double* form = beta_form_.data() + static_cast<std::size_t>(r) * k * k;
  // The indicator only sees derivatives; shifting by the center mean makes
  // that exact in floating point as well.
  const double shift = window[k - 1];
  double beta = 0.0;
  for (int a = 0; a < k; ++a) {
    double row = 0.0;
    for (int b = 0; b < k; ++b) row += form[a * k + b] * (slice[b] - shift);
    beta += (slice[a] - shift) * row;
  }
  return std::max(beta, 0.0);
}

void WenoReconstructor::weighted_poly(std::span<const double> window,
                                      const std::vector<double>& d,
                                      std::span<double> coeffs) const {
  const int k = k_;
  if (k == 1) {
    coeffs[0] = window[0];
    return;
  }
  double alpha[7];
  double asum = 0.0;
  for (int r = 0; r < k; ++r) {
    const double beta = smoothness(window, r);
    double denom = eps_ + beta;
    denom = (power_p_ == 2.0) ? denom * denom : std::pow(denom, power_p_);
    alpha[r] = d[r] / denom;
    asum += alpha[r];
  }
  const double inv = 1.0 / asum;
  for (int c = 0; c < k; ++c) coeffs[c] = 0.0;
  for (int r = 0; r < k; ++r) {
    const double omega = alpha[r] * inv;
    const double* map = coeff_map_.data() + static_cast<std::size_t>(r) * k * k;
    const double* slice = window.data() + (k - 1 - r);
    for (int m = 0; m < k; ++m) {
      const double wm = omega * slice[m];
      for (int c = 0; c < k; ++c) coeffs[c] += wm * map[c * k + m];
    }
  }
}

void WenoReconstructor::reconstruct_edges(std::span<const double> window,
                                          std::span<double> coeffs_right_target,
                                          std::span<double> coeffs_left_target) const {
  weighted_poly(window, d_right_, coeffs_right_target);
  weighted_poly(window, d_left_, coeffs_left_target);
}

void WenoReconstructor::reconstruct_in_cell(std::span<const double> window,
                                            int mu_sign,
                                            std::span<double> coeffs) const {
  if (mu_sign > 0) {
    weighted_poly(window, d_right_, coeffs);
  } else if (mu_sign < 0) {
    weighted_poly(window, d_left_, coeffs);
  } else {
    double right[7], left[7];
    weighted_poly(window, d_right_, std::span<double>(right, k_));
    weighted_poly(window, d_left_, std::span<double>(left, k_));
    for (int c = 0; c < k_; ++c) coeffs[c] = 0.5 * (right[c] + left[c]);
  }
}

double WenoReconstructor::eval(std::span<const double> coeffs, double xi) const {
  double v = coeffs[k_ - 1];
  for (int c = k_ - 2; c >= 0; --c) v = v * xi + coeffs[c];
  return v;
}

void WenoReconstructor::eval_at_nodes(std::span<const double> coeffs,
                                      std::span<double> values) const {
  const int nn = n_nodes();
  for (int i = 0; i < nn; ++i) {
    const double* row = node_eval_.data() + static_cast<std::size_t>(i) * k_;
    double v = 0.0;
    for (int c = 0; c < k_; ++c) v += row[c] * coeffs[c];
    values[i] = v;
  }
}

} // namespace mnt
