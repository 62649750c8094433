#pragma once
// Shooting engine for  -u'' + V u = z u  with point interactions.
//
// The pair (u, u') is propagated with an embedded Dormand-Prince 5(4) step;
// interaction sites and potential breakpoints are mandatory step boundaries,
// and at each site the interface jump is applied algebraically at the exact
// abscissa (never smeared through the ODE):
//   delta  (w):  u+ = u-,            u'+ = u'- + w * u-
//   delta' (w):  u'+ = u'-,          u+  = u-  + w * u'-
//
// Initial data (before any overall rescaling):
//   FromLeft :  u(a) = sin(theta),  u'(a) = -cos(theta)
//   FromRight:  u(b) = -sin(gamma), u'(b) = cos(gamma)
// so the trace satisfies the boundary condition at its anchor endpoint for
// every z; eigenvalues are roots of the Wronskian of the two traces.
//
// For strongly growing solutions the pair is renormalized whenever
// max(|u|,|u'|) leaves [1e-100, 1e100]; each sample carries the cumulative
// log-scale, i.e. true values are (u, u') * exp(log_scale). All downstream
// algebra (Wronskians, Green functions, determinants) either cancels the
// scales exactly or works in the log domain.
//
// Between recorded samples the trace is evaluated by quintic Hermite
// interpolation from (u, u', u'' = (V - z) u) at both ends. The step size is
// capped at 1.2 / sigma with sigma = sqrt(1 + K + |z|), which (a) keeps the
// scaled Pruefer phase change per step below pi/2 so unwrapping is exact and
// (b) keeps the interpolation error below the step tolerance.

#include <complex>
#include <stdexcept>
#include <vector>

#include "slpi/model.hpp"

namespace slpi {

using Complex = std::complex<double>;

enum class ShootDirection { FromLeft, FromRight };

struct TraceSample {
  double x = 0.0;
  Complex u, du;
  Complex ddu_left, ddu_right;  ///< (V(x∓) - z) u(x∓); differ only at kinks/sites
  double log_scale = 0.0;       ///< true values = recorded * exp(log_scale)
};

struct JumpRecord {
  int site_index = 0;
  double x = 0.0;
  InteractionKind kind = InteractionKind::Delta;
  double coupling = 0.0;
  Complex u_minus, du_minus, ddu_minus;  ///< left limits, at `log_scale`
  Complex u_plus, du_plus;               ///< right limits, at `log_scale`
  double log_scale = 0.0;
};

/// Raised when the step controller cannot meet the tolerance; carries the
/// abscissa where integration stalled.
class ShootError : public std::runtime_error {
 public:
  ShootError(const std::string& msg, double where)
      : std::runtime_error(msg), x(where) {}
  double x;
};

struct SolutionTrace {
  Complex z;
  ShootDirection direction = ShootDirection::FromLeft;
  double phase_scale = 1.0;  ///< sigma used for the step cap on this trace
  std::vector<TraceSample> samples;  ///< ascending in x; sites hold right limits
  std::vector<JumpRecord> jumps;     ///< ascending in x

  double a() const { return samples.front().x; }
  double b() const { return samples.back().x; }

  struct Value {
    Complex u, du;
    double log_scale;  ///< true value = u * exp(log_scale)
  };
  /// Interpolated state at x; `side` picks the one-sided limit at sites.
  Value eval(double x, Side side = Side::Right) const;

  /// log of sup over samples (true scale); -inf for an identically tiny field.
  double log_sup_u() const;
  double log_sup_du() const;
  double log_sup_norm() const;  ///< sup of max(|u|,|du|)

  bool is_real(double rel_tol = 1e-12) const;
};

/// Shoot from one endpoint with the boundary-condition initial data.
/// `max_step` == 0 means the automatic cap 1.2/sqrt(1 + K + |z|).
SolutionTrace shoot(const Problem&, const CouplingVector&, Complex z,
                    ShootDirection dir, const Tolerances& tol = Tolerances::defaults(),
                    double max_step = 0.0);

/// Shoot with explicit initial data (u0, du0) at the anchor endpoint.
SolutionTrace shoot_from(const Problem&, const CouplingVector&, Complex z,
                         ShootDirection dir, Complex u0, Complex du0,
                         const Tolerances& tol = Tolerances::defaults(),
                         double max_step = 0.0);

/// Wronskian u1(x) u2'(x) - u1'(x) u2(x) at true scale (right limits at x).
Complex wronskian(const SolutionTrace& t1, const SolutionTrace& t2, double x);

/// Same, divided by the product of the two trace sup-norms: dimensionless,
/// safe against over/underflow.
Complex wronskian_normalized(const SolutionTrace& t1, const SolutionTrace& t2, double x);

/// Integral of u1*u2 over [c,d] at true scale: adaptive Simpson refined per
/// interval of the union of both sample grids.
Complex integrate_product(const SolutionTrace& t1, const SolutionTrace& t2,
                          double c, double d, double quad_rel_tol = 1e-10);

/// | [W_d(u,v) - W_c(u,v)] - (z_u - z_v) * int_c^d u v |  for traces u, v of
/// possibly different spectral parameters on the same problem/coupling.
/// Throws std::domain_error if c or d sits on an interaction site.
double lagrange_identity_residual(const SolutionTrace& u, const SolutionTrace& v,
                                  double c, double d, double quad_rel_tol = 1e-10);

/// Number of zeros of u in the open interval (lo, hi), via the scaled Pruefer
/// phase phi = atan2(sigma u, u') counted per smooth segment (exact lattice
/// crossing count), plus the site rules:
///   delta site:  one zero iff |u(p)| <= atol (u is continuous there);
///   delta' site: one zero iff u jumps across 0 (u- u+ < 0) or |u| <= atol on
///                either side; counted once.
/// atol = 1e-10 * sup|u|. Requires a real trace (real z, real data).
int pruefer_zero_count(const SolutionTrace&, double lo, double hi);

/// Continuous (unwrapped) scaled Pruefer phase at x, lifted across jumps by
/// principal difference; phi(anchor endpoint) is the principal value. Used
/// for monotone-in-E eigenvalue counting; sigma must be >= the trace's own
/// phase_scale for the lift to be exact.
double pruefer_phase_at(const SolutionTrace&, double x, double sigma);

}  // namespace slpi
