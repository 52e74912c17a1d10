#pragma once

#include <deque>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mnt {

/// Right-hand side of the semi-discrete system.  The integrator passes the
/// stage state by mutable reference: the moment solver may replace a
/// cell's moments by their regularized version, and later stage
/// combinations must see the replacement.
using RhsFn = std::function<void(double t, std::vector<double>& state,
                                 std::vector<double>& deriv)>;

/// Coefficients of an SSP method in the convex Shu-Osher form
///   y_l     = d[l][.] u^{n-j} + (implied) u^n
///             + sum_{m<l} ( b[l][m] y_m + q[l][m] (y_m + (dt/rho) F(y_m)) )
///   u^{n+1} = zeta[.] u^{n-j} + (implied) u^n
///             + sum_m ( fbare[m] y_m + eta[m] (y_m + (dt/rho) F(y_m)) ).
/// Every stage and the update are convex combinations of previous values
/// and forward Euler steps of size dt/rho, which is what the
/// realizability argument requires.
struct IntegratorTableau {
  std::string name;
  int steps = 1;        // m: number of solution values consumed
  int order = 1;        // design order
  int stages = 1;       // s: named stage count (rhs evaluations per step)
  int stage_values = 1; // g: rows of the stage table
  double rho = 1.0;     // radius of absolute monotonicity

  std::vector<double> d;     // stage_values x (steps-1), row-major
  std::vector<double> q;     // strictly lower triangle, packed by row
  std::vector<double> b;     // strictly lower triangle, packed by row
  std::vector<double> zeta;  // steps-1
  std::vector<double> eta;   // stage_values
  std::vector<double> fbare; // stage_values

  std::vector<double> c; // stage times in units of dt (computed on load)

  double effective_cfl() const { return rho / stages; }

  double dcoef(int l, int j) const { return d[l * (steps - 1) + (j - 1)]; }
  double qcoef(int l, int m) const { return q[l * (l - 1) / 2 + m]; }
  double bcoef(int l, int m) const { return b[l * (l - 1) / 2 + m]; }

  /// Convex-combination certificate: all coefficients nonnegative, row
  /// sums at most one, rhs evaluation count consistent with `stages`.
  /// Also fills the stage-time vector.  Throws std::runtime_error.
  void verify_and_finalize();
};

/// Parse a tableau data file and re-verify its checksum and certificate.
IntegratorTableau load_tableau_file(const std::string& path);

/// Load "SSPRK(1,2,20)" etc. from `dir` (file name derived from the
/// method name).  `dir` empty means the MNT_TABLEAU_DIR environment
/// variable, falling back to the build-time default directory.
IntegratorTableau load_tableau(const std::string& name,
                               const std::string& dir = "");

std::string default_tableau_dir();

/// Solution values at the last few uniformly spaced time levels,
/// newest last.
struct StepHistory {
  std::deque<std::vector<double>> states;
  std::deque<double> times;

  void push(std::vector<double> state, double t, std::size_t keep);
  const std::vector<double>& newest() const { return states.back(); }
  double newest_time() const { return times.back(); }
};

class NeedsStartupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// u + dt * L(u) at time t.
std::vector<double> euler_step(const std::vector<double>& state, double t,
                               double dt, const RhsFn& rhs);

/// One step of the tableau from the given history (which must hold
/// `steps` values spaced dt apart, newest last).  Appends the result to
/// the history.  Throws NeedsStartupError if the history is too short.
void ssp_step(const IntegratorTableau& tab, StepHistory& history, double dt,
              const RhsFn& rhs);

/// Startup for multi-step methods: predict with `predictor` (a one-step
/// method) using a reduced step dt/2^q_init, then take steps with
/// `inner` (the main method for two-step methods, or the two-step
/// companion for methods with more steps) doubling the step size up to
/// dt/2^(steps>2 ? 1 : 0)... capped at dt/2 when the main method has more
/// than two steps, until `steps` solution values at spacing dt exist.
StepHistory ssp_startup(const IntegratorTableau& main,
                        const IntegratorTableau& predictor,
                        const IntegratorTableau* inner_two_step,
                        std::vector<double> u0, double t0, double dt,
                        int q_init, const RhsFn& rhs);

} // namespace mnt
