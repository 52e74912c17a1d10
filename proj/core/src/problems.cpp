#include "mnt/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mnt/linalg.hpp"

namespace mnt {

ManufacturedSpec::ManufacturedSpec(double k_peak) : peak(k_peak) {
  if (!(peak > 1.0))
    throw std::invalid_argument("ManufacturedSpec: K must exceed one");
  offset = -peak + 1.0 - std::log((peak - 1.0) / (2.0 * std::sinh(peak - 1.0)));
  t_final = M_PI / 5.0;
}

double ManufacturedSpec::alpha0(double t, double x) const {
  return -peak - std::sin(x - t) - offset;
}

double ManufacturedSpec::alpha1(double t, double x) const {
  return peak + std::sin(x - t);
}

double ManufacturedSpec::phi(double t, double x, double mu) const {
  return std::exp(alpha0(t, x) + alpha1(t, x) * mu);
}

double ManufacturedSpec::sigma_a(double t, double x) const {
  return 4.0 * (1.0 - std::cos(x - t));
}

double ManufacturedSpec::source(double t, double x, double mu) const {
  const double c = std::cos(x - t);
  const double om = 1.0 - mu;
  return phi(t, x, mu) * (c * om * om + sigma_a(t, x));
}

double ManufacturedSpec::w0(double t, double x) const {
  const double a1 = alpha1(t, x);
  // <exp(a0 + a1 mu)> = exp(a0) 2 sinh(a1)/a1
  return std::exp(alpha0(t, x)) * 2.0 * std::sinh(a1) / a1;
}

MomentVector ManufacturedSpec::moments(double t, double x,
                                       const AngularQuadrature& q) const {
  std::vector<double> f(q.n_total);
  for (int i = 0; i < q.n_total; ++i) f[i] = phi(t, x, q.mu[i]);
  return moments_of_density(q, f);
}

namespace {

// ---------------------------------------------------------------------------
// Material models
// ---------------------------------------------------------------------------

class ConstantMaterials final : public MaterialModel {
 public:
  ConstantMaterials(double sa, double ss, double src = 0.0)
      : sa_(sa), ss_(ss), src_(src) {}
  int coeff_order() const override { return 1; }
  bool time_dependent() const override { return false; }
  void evaluate(double, const Mesh&, const SpatialQuadrature& sq,
                const AngularQuadrature& aq,
                MaterialWorkspace& out) const override {
    for (double& v : out.sigma_a) v = sa_;
    for (double& v : out.sigma_s) v = ss_;
    for (double& v : out.source) v = src_;
    (void)sq;
    (void)aq;
  }

 private:
  double sa_, ss_, src_;
};

// Piecewise-constant in x; each cell uses its exact mean so the data stays
// a degree-zero polynomial per cell.
class PiecewiseMaterials final : public MaterialModel {
 public:
  struct Profile {
    std::vector<double> breaks; // ascending interior breakpoints
    std::vector<double> values; // breaks.size() + 1 plateau values
    double mean(double lo, double hi) const {
      double acc = 0.0;
      double left = lo;
      for (std::size_t s = 0; s <= breaks.size(); ++s) {
        const double right = s < breaks.size() ? breaks[s] : hi;
        if (right <= left) continue;
        const double seg_hi = std::min(hi, right);
        if (seg_hi > left) acc += (seg_hi - left) * values[s];
        left = seg_hi;
        if (left >= hi) break;
      }
      return acc / (hi - lo);
    }
  };

  PiecewiseMaterials(Profile sa, Profile ss, Profile src)
      : sa_(std::move(sa)), ss_(std::move(ss)), src_(std::move(src)) {}
  int coeff_order() const override { return 1; }
  bool time_dependent() const override { return false; }
  void evaluate(double, const Mesh& mesh, const SpatialQuadrature& sq,
                const AngularQuadrature& aq,
                MaterialWorkspace& out) const override {
    for (int j = 0; j < mesh.n_cells; ++j) {
      const double lo = mesh.left_edge(j);
      const double hi = lo + mesh.dx;
      const double sa = sa_.mean(lo, hi);
      const double ss = ss_.mean(lo, hi);
      const double s = src_.mean(lo, hi);
      for (int i = 0; i < sq.n_nodes; ++i) {
        out.sigma_a[j * sq.n_nodes + i] = sa;
        out.sigma_s[j * sq.n_nodes + i] = ss;
        for (int q = 0; q < aq.n_total; ++q)
          out.source[(j * sq.n_nodes + i) * aq.n_total + q] = s;
      }
    }
  }

 private:
  Profile sa_, ss_, src_;
};

// Time-dependent manufactured coefficients, projected per cell onto
// polynomials of degree k-1 by interpolation at k Lobatto points and
// evaluated at the spatial quadrature nodes (clamped at zero).
class ManufacturedMaterials final : public MaterialModel {
 public:
  ManufacturedMaterials(ManufacturedSpec spec, int recon_order)
      : spec_(spec), k_(recon_order) {}
  int coeff_order() const override { return k_; }
  bool time_dependent() const override { return true; }

  void evaluate(double t, const Mesh& mesh, const SpatialQuadrature& sq,
                const AngularQuadrature& aq,
                MaterialWorkspace& out) const override {
    ensure_tables(sq);
    const int nqs = sq.n_nodes;
    const int nq = aq.n_total;
    std::vector<double> anchor(k_), node(nqs);
    for (int j = 0; j < mesh.n_cells; ++j) {
      const double xc = mesh.center(j);
      for (int a = 0; a < k_; ++a)
        anchor[a] = spec_.sigma_a(t, xc + mesh.dx * anchor_xi_[a]);
      apply(anchor, node);
      for (int i = 0; i < nqs; ++i)
        out.sigma_a[j * nqs + i] = std::max(node[i], 0.0);
      for (int i = 0; i < nqs; ++i) out.sigma_s[j * nqs + i] = 0.0;
      for (int q = 0; q < nq; ++q) {
        for (int a = 0; a < k_; ++a)
          anchor[a] = spec_.source(t, xc + mesh.dx * anchor_xi_[a], aq.mu[q]);
        apply(anchor, node);
        for (int i = 0; i < nqs; ++i)
          out.source[(j * nqs + i) * nq + q] = std::max(node[i], 0.0);
      }
    }
  }

 private:
  void ensure_tables(const SpatialQuadrature& sq) const {
    if (!interp_.empty()) return;
    // Anchor points: the k-node Lobatto set (cell center for k = 1).
    if (k_ == 1)
      anchor_xi_ = {0.0};
    else
      anchor_xi_ = build_lobatto(k_, -0.5, 0.5).nodes;
    // interp_[i][a]: value at spatial node i of the cardinal polynomial of
    // anchor a (degree k-1), from a Vandermonde solve.
    const int nqs = sq.n_nodes;
    interp_.assign(static_cast<std::size_t>(nqs) * k_, 0.0);
    std::vector<double> vand(k_ * k_), rhsv(k_);
    for (int a = 0; a < k_; ++a) {
      for (int r = 0; r < k_; ++r) {
        double p = 1.0;
        for (int c = 0; c < k_; ++c) {
          vand[r * k_ + c] = p;
          p *= anchor_xi_[r];
        }
        rhsv[r] = (r == a) ? 1.0 : 0.0;
      }
      std::vector<double> m = vand, coeff = rhsv;
      if (!lu_solve(m, k_, coeff))
        throw std::runtime_error("manufactured materials: singular Vandermonde");
      for (int i = 0; i < nqs; ++i) {
        double v = coeff[k_ - 1];
        for (int c = k_ - 2; c >= 0; --c) v = v * sq.rule.nodes[i] + coeff[c];
        interp_[static_cast<std::size_t>(i) * k_ + a] = v;
      }
    }
  }

  void apply(const std::vector<double>& anchor, std::vector<double>& node) const {
    const int nqs = static_cast<int>(node.size());
    for (int i = 0; i < nqs; ++i) {
      double v = 0.0;
      for (int a = 0; a < k_; ++a)
        v += interp_[static_cast<std::size_t>(i) * k_ + a] * anchor[a];
      node[i] = v;
    }
  }

  ManufacturedSpec spec_;
  int k_;
  mutable std::vector<double> anchor_xi_;
  mutable std::vector<double> interp_;
};

// Cell-mean kinetic density of a smooth profile via the spatial rule.
void project_initial(
    const Mesh& mesh, const AngularQuadrature& aq, const SpatialQuadrature& sq,
    const std::function<double(double x, double mu)>& psi0,
    std::vector<double>& psi_means) {
  psi_means.assign(static_cast<std::size_t>(mesh.n_cells) * aq.n_total, 0.0);
  for (int j = 0; j < mesh.n_cells; ++j) {
    const double xc = mesh.center(j);
    for (int q = 0; q < aq.n_total; ++q) {
      double acc = 0.0;
      for (int i = 0; i < sq.n_nodes; ++i)
        acc += sq.rule.weights[i] * psi0(xc + mesh.dx * sq.rule.nodes[i], aq.mu[q]);
      psi_means[static_cast<std::size_t>(j) * aq.n_total + q] = acc;
    }
  }
}

} // namespace

TransportProblem manufactured_problem(const ManufacturedSpec& spec,
                                      int recon_order) {
  TransportProblem p;
  p.x_left = -M_PI;
  p.x_right = M_PI;
  p.t_final = spec.t_final;
  p.boundary = BoundaryKind::periodic;
  p.materials = std::make_shared<ManufacturedMaterials>(spec, recon_order);
  p.initialize = [spec](const Mesh& mesh, const AngularQuadrature& aq,
                        const SpatialQuadrature& sq, std::vector<double>& out) {
    project_initial(mesh, aq, sq,
                    [&spec](double x, double mu) { return spec.phi(0.0, x, mu); },
                    out);
  };
  return p;
}

TransportProblem manufactured_scattering_problem(const ManufacturedSpec& spec,
                                                 double sigma_s) {
  TransportProblem p;
  p.x_left = -M_PI;
  p.x_right = M_PI;
  p.t_final = spec.t_final;
  p.boundary = BoundaryKind::periodic;
  p.materials = std::make_shared<ConstantMaterials>(0.0, sigma_s);
  p.initialize = [spec](const Mesh& mesh, const AngularQuadrature& aq,
                        const SpatialQuadrature& sq, std::vector<double>& out) {
    project_initial(mesh, aq, sq,
                    [&spec](double x, double mu) { return spec.phi(0.0, x, mu); },
                    out);
  };
  return p;
}

void delta_initialize(const Mesh& mesh, const AngularQuadrature& q,
                      double psi_floor, std::vector<double>& psi_means) {
  if (mesh.n_cells % 2 != 0)
    throw std::invalid_argument("delta_initialize: cell count must be even");
  psi_means.assign(static_cast<std::size_t>(mesh.n_cells) * q.n_total,
                   psi_floor);
  // Unit zeroth moment split over the two cells sharing the center edge:
  // each gets an isotropic density with cell mean 1/(4 dx).
  const double add = 1.0 / (4.0 * mesh.dx);
  for (int j : {mesh.n_cells / 2 - 1, mesh.n_cells / 2})
    for (int qi = 0; qi < q.n_total; ++qi)
      psi_means[static_cast<std::size_t>(j) * q.n_total + qi] += add;
}

std::shared_ptr<const MaterialModel> constant_materials(double sigma_a,
                                                        double sigma_s,
                                                        double source) {
  return std::make_shared<ConstantMaterials>(sigma_a, sigma_s, source);
}

TransportProblem plane_source_problem(const PlaneSourceSpec& spec) {
  TransportProblem p;
  p.x_left = spec.x_left;
  p.x_right = spec.x_right;
  p.t_final = spec.t_final;
  p.boundary = BoundaryKind::dirichlet;
  p.materials = std::make_shared<ConstantMaterials>(0.0, spec.sigma_s);
  const double floor = spec.psi_floor;
  p.bc_left = [floor](double, double) { return floor; };
  p.bc_right = [floor](double, double) { return floor; };
  p.initialize = [floor](const Mesh& mesh, const AngularQuadrature& aq,
                         const SpatialQuadrature&, std::vector<double>& out) {
    delta_initialize(mesh, aq, floor, out);
  };
  return p;
}

TransportProblem source_beam_problem(const SourceBeamSpec& spec,
                                     int n_angular) {
  TransportProblem p;
  p.x_left = spec.x_left;
  p.x_right = spec.x_right;
  p.t_final = spec.t_final;
  p.boundary = BoundaryKind::dirichlet;

  PiecewiseMaterials::Profile sa{{2.0}, {1.0, 0.0}};
  PiecewiseMaterials::Profile ss{{1.0, 2.0}, {0.0, 2.0, 10.0}};
  PiecewiseMaterials::Profile src{{1.0, 1.5}, {0.0, 1.0, 0.0}};
  p.materials = std::make_shared<PiecewiseMaterials>(sa, ss, src);

  // Inflow beam normalized against the quadrature it will be integrated
  // with: <beta exp(-gamma (mu-1)^2)> = 1.
  const AngularQuadrature q = build_angular(n_angular, 1);
  const double gamma = spec.gamma;
  double mass = 0.0;
  for (int i = 0; i < q.n_total; ++i) {
    const double d = q.mu[i] - 1.0;
    mass += q.w[i] * std::exp(-gamma * d * d);
  }
  const double beta = 1.0 / mass;
  const double floor = spec.psi_floor;
  p.bc_left = [beta, gamma](double, double mu) {
    const double d = mu - 1.0;
    return beta * std::exp(-gamma * d * d);
  };
  p.bc_right = [floor](double, double) { return floor; };
  p.initialize = [floor](const Mesh& mesh, const AngularQuadrature& aq,
                         const SpatialQuadrature&, std::vector<double>& out) {
    out.assign(static_cast<std::size_t>(mesh.n_cells) * aq.n_total, floor);
  };
  return p;
}

ErrorNorms error_norms(const Solver& solver, const Reconstruction& recon,
                       const std::function<double(double)>& w0_exact) {
  const Mesh& mesh = solver.mesh();
  const LobattoRule rule = build_lobatto(100, -0.5, 0.5);
  ErrorNorms e;
  for (int j = 0; j < mesh.n_cells; ++j) {
    const double xc = mesh.center(j);
    for (int i = 0; i < rule.size(); ++i) {
      const double xi = rule.nodes[i];
      const double u0 = solver.sample_cell(recon, j, xi)[0];
      const double diff = std::abs(w0_exact(xc + mesh.dx * xi) - u0);
      e.e1 += mesh.dx * rule.weights[i] * diff;
      e.einf = std::max(e.einf, diff);
    }
  }
  return e;
}

double observed_order(double e_coarse, double e_fine, double dx_coarse,
                      double dx_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0) || !(dx_coarse > 0.0) ||
      !(dx_fine > 0.0) || dx_coarse == dx_fine)
    return std::numeric_limits<double>::quiet_NaN();
  return std::log(e_coarse / e_fine) / std::log(dx_coarse / dx_fine);
}

PnReferenceResult pn_reference(const TransportProblem& problem, int n_pn,
                               int n_cells, int n_angular,
                               double t_final_override) {
  if (n_pn < 1 || n_pn % 2 == 0)
    throw std::invalid_argument("pn_reference: closure order must be odd");
  if (n_angular <= 0) n_angular = std::max(40, 2 * ((n_pn + 7) / 2));
  if (n_angular % 2 != 0) ++n_angular;

  const Mesh mesh = Mesh::uniform(problem.x_left, problem.x_right, n_cells);
  const AngularQuadrature aq = build_angular(n_angular, 1);
  const SpatialQuadrature sq = build_spatial(1, problem.materials->coeff_order());
  const int nq = aq.n_total;
  const int nl = n_pn + 1;

  // Legendre values P_n(mu_q).
  std::vector<double> leg(static_cast<std::size_t>(nl) * nq);
  for (int q = 0; q < nq; ++q) {
    double p0 = 1.0, p1 = aq.mu[q];
    leg[q] = 1.0;
    if (nl > 1) leg[nq + q] = p1;
    for (int n = 2; n < nl; ++n) {
      const double p2 = ((2.0 * n - 1.0) * aq.mu[q] * p1 - (n - 1.0) * p0) / n;
      leg[static_cast<std::size_t>(n) * nq + q] = p2;
      p0 = p1;
      p1 = p2;
    }
  }
  // Quadrature moments of 1 against each P_n (for the isotropic gain).
  std::vector<double> leg_mass(nl, 0.0);
  double wsum = 0.0;
  for (int q = 0; q < nq; ++q) wsum += aq.w[q];
  for (int n = 0; n < nl; ++n)
    for (int q = 0; q < nq; ++q)
      leg_mass[n] += aq.w[q] * leg[static_cast<std::size_t>(n) * nq + q];

  // Initial Legendre moments from the problem's kinetic cell means.
  std::vector<double> psi0;
  problem.initialize(mesh, aq, sq, psi0);
  std::vector<double> ell(static_cast<std::size_t>(n_cells) * nl, 0.0);
  for (int j = 0; j < n_cells; ++j)
    for (int q = 0; q < nq; ++q) {
      const double wpsi = aq.w[q] * psi0[static_cast<std::size_t>(j) * nq + q];
      for (int n = 0; n < nl; ++n)
        ell[static_cast<std::size_t>(j) * nl + n] +=
            wpsi * leg[static_cast<std::size_t>(n) * nq + q];
    }

  MaterialWorkspace mats;
  mats.resize(n_cells, sq.n_nodes, nq);
  problem.materials->evaluate(0.0, mesh, sq, aq, mats);
  double sig_t_max = 0.0;
  for (int j = 0; j < n_cells; ++j)
    for (int i = 0; i < sq.n_nodes; ++i)
      sig_t_max = std::max(sig_t_max, mats.sa(j, i) + mats.ss(j, i));

  const double t_final = t_final_override >= 0.0 ? t_final_override
                                                 : problem.t_final;
  const double w_q = sq.rule.weights.back();
  const double dxw = mesh.dx * w_q;
  const double bound2 = dxw / (1.0 + dxw * sig_t_max);
  const double bound1 = sig_t_max > 0.0 ? 1.0 / sig_t_max
                                        : std::numeric_limits<double>::infinity();
  double dt = 0.99 * std::min(bound1, bound2);
  const long n_steps = std::max<long>(1, static_cast<long>(std::ceil(t_final / dt - 1e-12)));
  dt = t_final / static_cast<double>(n_steps);

  const bool periodic = problem.boundary == BoundaryKind::periodic;
  std::vector<double> psi(static_cast<std::size_t>(n_cells) * nq);
  std::vector<double> flux(static_cast<std::size_t>(n_cells + 1) * nl);
  std::vector<double> dell(ell.size());
  std::vector<double> psi_left(nq), psi_right(nq);

  for (long s = 0; s < n_steps; ++s) {
    const double t = s * dt;
    // Ansatz values psi_q = sum_n (2n+1)/2 ell_n P_n(mu_q).
    for (int j = 0; j < n_cells; ++j)
      for (int q = 0; q < nq; ++q) {
        double v = 0.0;
        for (int n = 0; n < nl; ++n)
          v += 0.5 * (2.0 * n + 1.0) * ell[static_cast<std::size_t>(j) * nl + n] *
               leg[static_cast<std::size_t>(n) * nq + q];
        psi[static_cast<std::size_t>(j) * nq + q] = v;
      }
    if (!periodic) {
      for (int q = 0; q < nq; ++q) {
        psi_left[q] = problem.bc_left(t, aq.mu[q]);
        psi_right[q] = problem.bc_right(t, aq.mu[q]);
      }
    }
    // Upwind kinetic flux of the piecewise-constant values.
    for (int i = 0; i <= n_cells; ++i) {
      double* f = flux.data() + static_cast<std::size_t>(i) * nl;
      for (int n = 0; n < nl; ++n) f[n] = 0.0;
      for (int q = 0; q < nq; ++q) {
        const double mu = aq.mu[q];
        if (mu == 0.0) continue;
        const double* donor;
        if (mu > 0.0) {
          if (i == 0)
            donor = periodic ? &psi[static_cast<std::size_t>(n_cells - 1) * nq]
                             : psi_left.data();
          else
            donor = &psi[static_cast<std::size_t>(i - 1) * nq];
        } else {
          if (i == n_cells)
            donor = periodic ? &psi[0] : psi_right.data();
          else
            donor = &psi[static_cast<std::size_t>(i) * nq];
        }
        const double t0 = aq.w[q] * mu * donor[q];
        for (int n = 0; n < nl; ++n)
          f[n] += t0 * leg[static_cast<std::size_t>(n) * nq + q];
      }
    }
    for (int j = 0; j < n_cells; ++j) {
      double* d = dell.data() + static_cast<std::size_t>(j) * nl;
      const double* fl = flux.data() + static_cast<std::size_t>(j) * nl;
      const double* fr = flux.data() + static_cast<std::size_t>(j + 1) * nl;
      // First-order cell means of the interaction coefficients.
      double sa = 0.0, ss = 0.0, s0 = 0.0;
      for (int i = 0; i < sq.n_nodes; ++i) {
        sa += sq.rule.weights[i] * mats.sa(j, i);
        ss += sq.rule.weights[i] * mats.ss(j, i);
        s0 += sq.rule.weights[i] * mats.src(j, i, 0);
      }
      const double gain =
          ell[static_cast<std::size_t>(j) * nl] / wsum; // <psi>/sum w
      for (int n = 0; n < nl; ++n) {
        const double ln = ell[static_cast<std::size_t>(j) * nl + n];
        d[n] = -(fr[n] - fl[n]) / mesh.dx - (sa + ss) * ln +
               ss * gain * leg_mass[n] + s0 * leg_mass[n];
      }
    }
    for (std::size_t i = 0; i < ell.size(); ++i) ell[i] += dt * dell[i];
  }

  PnReferenceResult out;
  out.mesh = mesh;
  out.w0.resize(n_cells);
  for (int j = 0; j < n_cells; ++j)
    out.w0[j] = ell[static_cast<std::size_t>(j) * nl];
  return out;
}

} // namespace mnt
