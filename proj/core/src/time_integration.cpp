#include "mnt/time_integration.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mnt {

namespace {

constexpr double kCoeffTol = 1e-12;

std::uint64_t fnv1a64(const std::string& payload) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : payload) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

} // namespace

void IntegratorTableau::verify_and_finalize() {
  auto fail = [&](const std::string& why) {
    throw std::runtime_error("tableau '" + name + "': " + why);
  };
  if (steps < 1 || order < 1 || stages < 1 || stage_values < 1 || !(rho > 0.0))
    fail("bad header");
  const int g = stage_values;
  if (static_cast<int>(d.size()) != g * (steps - 1)) fail("bad d block");
  if (static_cast<int>(q.size()) != g * (g - 1) / 2) fail("bad q block");
  if (static_cast<int>(b.size()) != g * (g - 1) / 2) fail("bad b block");
  if (static_cast<int>(zeta.size()) != steps - 1) fail("bad zeta block");
  if (static_cast<int>(eta.size()) != g) fail("bad eta block");
  if (static_cast<int>(fbare.size()) != g) fail("bad fbare block");

  auto nonneg = [&](double v) { return v >= -kCoeffTol; };
  for (double v : d) if (!nonneg(v)) fail("negative d coefficient");
  for (double v : q) if (!nonneg(v)) fail("negative q coefficient");
  for (double v : b) if (!nonneg(v)) fail("negative b coefficient");
  for (double v : zeta) if (!nonneg(v)) fail("negative zeta coefficient");
  for (double v : eta) if (!nonneg(v)) fail("negative eta coefficient");
  for (double v : fbare) if (!nonneg(v)) fail("negative fbare coefficient");

  for (int l = 0; l < g; ++l) {
    double s = 0.0;
    for (int j = 1; j < steps; ++j) s += dcoef(l, j);
    for (int m = 0; m < l; ++m) s += qcoef(l, m) + bcoef(l, m);
    if (s > 1.0 + kCoeffTol) fail("stage row sum exceeds one");
  }
  {
    double s = 0.0;
    for (double v : zeta) s += v;
    for (int m = 0; m < g; ++m) s += eta[m] + fbare[m];
    if (s > 1.0 + kCoeffTol) fail("final row sum exceeds one");
  }

  // Count rhs evaluations: one per stage whose Euler term is referenced.
  std::vector<bool> used(g, false);
  for (int l = 0; l < g; ++l)
    for (int m = 0; m < l; ++m)
      if (qcoef(l, m) > 0.0) used[m] = true;
  for (int m = 0; m < g; ++m)
    if (eta[m] > 0.0) used[m] = true;
  int evals = 0;
  for (bool u : used) evals += u ? 1 : 0;
  if (evals > stages) fail("more rhs evaluations than stages");

  // Stage times in units of dt.
  c.assign(g, 0.0);
  for (int l = 0; l < g; ++l) {
    double t = 0.0;
    for (int j = 1; j < steps; ++j) t += dcoef(l, j) * (-double(j));
    for (int m = 0; m < l; ++m)
      t += bcoef(l, m) * c[m] + qcoef(l, m) * (c[m] + 1.0 / rho);
    c[l] = t;
  }
}

IntegratorTableau load_tableau_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tableau file " + path);
  std::ostringstream payload;
  std::string line, checksum_line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    if (line.rfind("checksum", 0) == 0) {
      checksum_line = line;
      break;
    }
    payload << line << "\n";
    lines.push_back(line);
  }
  if (checksum_line.empty())
    throw std::runtime_error("tableau file missing checksum: " + path);
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(payload.str())));
    std::istringstream cs(checksum_line);
    std::string word, value;
    cs >> word >> value;
    if (value != buf)
      throw std::runtime_error("tableau checksum mismatch in " + path);
  }

  IntegratorTableau tab;
  std::size_t i = 0;
  auto expect_kv = [&](const char* key) -> std::string {
    if (i >= lines.size())
      throw std::runtime_error("truncated tableau file " + path);
    std::istringstream ls(lines[i++]);
    std::string k, rest;
    ls >> k;
    if (k != key)
      throw std::runtime_error("expected '" + std::string(key) + "' in " + path);
    std::getline(ls, rest);
    const std::size_t pos = rest.find_first_not_of(' ');
    return pos == std::string::npos ? std::string() : rest.substr(pos);
  };
  auto read_row = [&](int expected) {
    std::vector<double> row;
    if (i >= lines.size())
      throw std::runtime_error("truncated tableau file " + path);
    std::istringstream ls(lines[i++]);
    std::string tok;
    while (ls >> tok)
      if (tok != "-") row.push_back(std::stod(tok));
    if (static_cast<int>(row.size()) != expected)
      throw std::runtime_error("bad row length in " + path);
    return row;
  };
  auto expect_tag = [&](const char* key) {
    if (i >= lines.size() || lines[i] != key)
      throw std::runtime_error("expected block '" + std::string(key) + "' in " + path);
    ++i;
  };

  tab.name = expect_kv("method");
  tab.steps = std::stoi(expect_kv("steps"));
  tab.order = std::stoi(expect_kv("order"));
  tab.stages = std::stoi(expect_kv("stages"));
  tab.stage_values = std::stoi(expect_kv("stage_values"));
  tab.rho = std::stod(expect_kv("rho"));

  expect_tag("d");
  for (int l = 0; l < tab.stage_values; ++l) {
    auto row = read_row(tab.steps - 1);
    tab.d.insert(tab.d.end(), row.begin(), row.end());
  }
  expect_tag("q");
  for (int l = 0; l < tab.stage_values; ++l) {
    auto row = read_row(l);
    tab.q.insert(tab.q.end(), row.begin(), row.end());
  }
  expect_tag("b");
  for (int l = 0; l < tab.stage_values; ++l) {
    auto row = read_row(l);
    tab.b.insert(tab.b.end(), row.begin(), row.end());
  }
  expect_tag("zeta");
  tab.zeta = read_row(tab.steps - 1);
  expect_tag("eta");
  tab.eta = read_row(tab.stage_values);
  expect_tag("fbare");
  tab.fbare = read_row(tab.stage_values);

  tab.verify_and_finalize();
  return tab;
}

std::string default_tableau_dir() {
  if (const char* env = std::getenv("MNT_TABLEAU_DIR")) return env;
#ifdef MNT_TABLEAU_DIR
  return MNT_TABLEAU_DIR;
#else
  return "data/tableaux";
#endif
}

IntegratorTableau load_tableau(const std::string& name,
                               const std::string& dir) {
  std::string file;
  for (char ch : name) {
    if (std::isalnum(static_cast<unsigned char>(ch)))
      file += std::tolower(static_cast<unsigned char>(ch));
    else if (ch == ',' || ch == '(')
      file += '_';
  }
  const std::string base = dir.empty() ? default_tableau_dir() : dir;
  return load_tableau_file(base + "/" + file + ".txt");
}

void StepHistory::push(std::vector<double> state, double t, std::size_t keep) {
  states.push_back(std::move(state));
  times.push_back(t);
  while (states.size() > keep) {
    states.pop_front();
    times.pop_front();
  }
}

std::vector<double> euler_step(const std::vector<double>& state, double t,
                               double dt, const RhsFn& rhs) {
  if (!(dt > 0.0)) throw std::invalid_argument("euler_step: dt must be > 0");
  std::vector<double> y = state;
  std::vector<double> f(y.size());
  rhs(t, y, f);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += dt * f[i];
  return y;
}

void ssp_step(const IntegratorTableau& tab, StepHistory& history, double dt,
              const RhsFn& rhs) {
  if (static_cast<int>(history.states.size()) < tab.steps)
    throw NeedsStartupError("ssp_step: method needs " +
                            std::to_string(tab.steps) + " history values");
  const std::size_t n = history.newest().size();
  const double t_n = history.newest_time();
  const double h_euler = dt / tab.rho;
  const int g = tab.stage_values;

  // history index j: u^{n-j}
  auto hist = [&](int j) -> const std::vector<double>& {
    return history.states[history.states.size() - 1 - j];
  };

  std::vector<std::vector<double>> ys(g), fy(g);
  std::vector<bool> have_f(g, false);
  auto ensure_f = [&](int m) {
    if (have_f[m]) return;
    fy[m].assign(n, 0.0);
    rhs(t_n + tab.c[m] * dt, ys[m], fy[m]);
    have_f[m] = true;
  };

  for (int l = 0; l < g; ++l) {
    double wn = 1.0;
    for (int j = 1; j < tab.steps; ++j) wn -= tab.dcoef(l, j);
    for (int m = 0; m < l; ++m) wn -= tab.qcoef(l, m) + tab.bcoef(l, m);
    std::vector<double>& y = ys[l];
    y.assign(n, 0.0);
    const std::vector<double>& un = hist(0);
    for (std::size_t i = 0; i < n; ++i) y[i] = wn * un[i];
    for (int j = 1; j < tab.steps; ++j) {
      const double dj = tab.dcoef(l, j);
      if (dj == 0.0) continue;
      const std::vector<double>& uj = hist(j);
      for (std::size_t i = 0; i < n; ++i) y[i] += dj * uj[i];
    }
    for (int m = 0; m < l; ++m) {
      const double qc = tab.qcoef(l, m);
      const double bc = tab.bcoef(l, m);
      if (qc == 0.0 && bc == 0.0) continue;
      if (qc > 0.0) {
        ensure_f(m);
        for (std::size_t i = 0; i < n; ++i)
          y[i] += (qc + bc) * ys[m][i] + qc * h_euler * fy[m][i];
      } else {
        for (std::size_t i = 0; i < n; ++i) y[i] += bc * ys[m][i];
      }
    }
  }

  std::vector<double> out(n, 0.0);
  double wn = 1.0;
  for (double v : tab.zeta) wn -= v;
  for (int m = 0; m < g; ++m) wn -= tab.eta[m] + tab.fbare[m];
  const std::vector<double>& un = hist(0);
  for (std::size_t i = 0; i < n; ++i) out[i] = wn * un[i];
  for (int j = 1; j < tab.steps; ++j) {
    const double zj = tab.zeta[j - 1];
    if (zj == 0.0) continue;
    const std::vector<double>& uj = hist(j);
    for (std::size_t i = 0; i < n; ++i) out[i] += zj * uj[i];
  }
  for (int m = 0; m < g; ++m) {
    const double em = tab.eta[m];
    const double fm = tab.fbare[m];
    if (em == 0.0 && fm == 0.0) continue;
    if (em > 0.0) {
      ensure_f(m);
      for (std::size_t i = 0; i < n; ++i)
        out[i] += (em + fm) * ys[m][i] + em * h_euler * fy[m][i];
    } else {
      for (std::size_t i = 0; i < n; ++i) out[i] += fm * ys[m][i];
    }
  }

  history.push(std::move(out), t_n + dt, tab.steps);
}

StepHistory ssp_startup(const IntegratorTableau& main,
                        const IntegratorTableau& predictor,
                        const IntegratorTableau* inner_two_step,
                        std::vector<double> u0, double t0, double dt,
                        int q_init, const RhsFn& rhs) {
  StepHistory grid; // states at t0 + i*dt
  grid.push(u0, t0, main.steps);
  if (main.steps == 1) return grid;
  if (q_init < 1) throw std::invalid_argument("ssp_startup: q_init must be >= 1");

  const IntegratorTableau& two_step =
      (main.steps == 2) ? main
                        : (inner_two_step ? *inner_two_step
                                          : throw std::invalid_argument(
                                                "ssp_startup: multi-step method "
                                                "needs a two-step companion"));

  // Predict to t0 + dt/2^q with the one-step method, then take two-step
  // steps of doubling size: each uses the pair (u(t0), u(t0+t)) spaced by
  // the step size t, reaching 2t.  Methods with more than two steps stop
  // the doubling at dt/2 and continue with constant steps of dt/2.
  const double h0 = dt / std::pow(2.0, q_init);
  const double cap = (main.steps > 2) ? 0.5 * dt : dt;

  auto maybe_record = [&](const std::vector<double>& state, double toff) {
    const double ratio = toff / dt;
    const double nearest = std::round(ratio);
    if (nearest >= 1.0 && std::abs(ratio - nearest) < 1e-9)
      grid.push(state, t0 + toff, main.steps);
  };

  StepHistory sub;
  sub.push(u0, t0, 2);
  ssp_step(predictor, sub, h0, rhs);
  std::vector<double> current = sub.newest();
  double t = h0;
  maybe_record(current, t);

  while (t < cap * (1.0 - 1e-12)) {
    StepHistory pair;
    pair.push(u0, t0, 2);
    pair.push(current, t0 + t, 2);
    ssp_step(two_step, pair, t, rhs);
    current = pair.newest();
    t *= 2.0;
    maybe_record(current, t);
  }

  if (static_cast<int>(grid.states.size()) < main.steps) {
    // Constant phase at step cap; (u(t-cap), u(t)) slides forward.
    StepHistory slide;
    slide.push(u0, t0, 2);
    slide.push(current, t0 + t, 2);
    while (static_cast<int>(grid.states.size()) < main.steps) {
      ssp_step(two_step, slide, cap, rhs);
      t += cap;
      maybe_record(slide.newest(), t);
    }
  }
  return grid;
}

} // namespace mnt
