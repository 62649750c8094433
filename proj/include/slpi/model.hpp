#pragma once
// Problem description types for one-dimensional Schroedinger operators
//   tau u = -u'' + V u   on a finite interval [a,b]
// decorated with point interactions at interior sites:
//   delta  (strength w):  u continuous,  u'(p+) - u'(p-) = w * u(p)
//   delta' (strength w):  u' continuous, u(p+)  - u(p-)  = w * u'(p)
// plus separated boundary conditions parametrized by angles
//   cos(theta) u(a) + sin(theta) u'(a) = 0,
//   cos(gamma) u(b) + sin(gamma) u'(b) = 0,   theta, gamma in [0, pi).
//
// Everything here is a plain value type; validate() reports every violated
// structural invariant instead of throwing, so the CLI can print them all.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace slpi {

struct Interval {
  double a = 0.0;
  double b = 1.0;
  double length() const { return b - a; }
};

// Closed set of potential variants so a run is reproducible from its config.
struct ConstantPotential {
  double value = 0.0;
};

struct PiecewiseConstantPotential {
  std::vector<double> breakpoints;  ///< strictly increasing
  std::vector<double> values;       ///< breakpoints.size()+1 entries
};

struct TabulatedPotential {
  std::vector<double> grid;    ///< strictly increasing, must cover [a,b]
  std::vector<double> values;  ///< same length as grid; linear interpolation
};

enum class BuiltinForm { Harmonic, InverseSquareTail };

struct BuiltinPotential {
  BuiltinForm form = BuiltinForm::Harmonic;
  // Harmonic:          params = {c, x0},     V(x) = c*(x-x0)^2
  // InverseSquareTail: params = {v_inf, c},  V(x) = v_inf - c/x^2
  std::vector<double> params;
};

using PotentialSpec = std::variant<ConstantPotential, PiecewiseConstantPotential,
                                   TabulatedPotential, BuiltinPotential>;

/// One-sided limits; potentials and solution traces may jump at isolated points.
enum class Side { Left, Right };

/// V(x), taking the limit from the requested side at discontinuities.
double potential_value(const PotentialSpec&, double x, Side side = Side::Right);

/// Exact integral of V over [c,d] (closed form per variant; trapezoid on the
/// tabulated grid, which is exact for the piecewise-linear interpolant).
double potential_integral(const PotentialSpec&, double c, double d);

/// Least K with |V| <= K on the interval; throws std::domain_error when no
/// finite bound exists (inverse-square form with 0 inside the interval).
double potential_bound(const PotentialSpec&, const Interval&);

/// Points in (a,b) where V is discontinuous or has a kink; the integrator
/// never steps across these.
std::vector<double> potential_breakpoints(const PotentialSpec&, const Interval&);

enum class InteractionKind { Delta, DeltaPrime };

struct InteractionSite {
  int index = 0;  ///< stable identifier used by couplings and ensembles
  double x = 0.0;
  InteractionKind kind = InteractionKind::Delta;
};

/// Finitely many interaction sites, kept sorted by position.
struct InteractionSet {
  std::vector<InteractionSite> sites;

  static InteractionSet from_sites(std::vector<InteractionSite> s);
  /// Convenience: index sites 0..m-1 in position order.
  static InteractionSet at_positions(
      const std::vector<std::pair<double, InteractionKind>>& ps);

  const InteractionSite* find(int index) const;
  bool empty() const { return sites.empty(); }
  std::size_t size() const { return sites.size(); }
};

struct BoundaryCondition {
  double theta = 0.0;  ///< angle at a; 0 = Dirichlet
  double gamma = 0.0;  ///< angle at b; 0 = Dirichlet
};

struct Problem {
  Interval interval;
  PotentialSpec potential = ConstantPotential{};
  InteractionSet interactions;
  BoundaryCondition bc;
};

/// Coupling strengths, one per interaction site index.
struct CouplingVector {
  std::map<int, double> values;

  double at(int site_index) const;  ///< throws std::out_of_range if missing
  static CouplingVector zeros(const InteractionSet&);
  /// Assign by sorted site order; v.size() must match.
  static CouplingVector of(const InteractionSet&, const std::vector<double>& v);
};

/// Atomless scalar distributions for random couplings.
struct Distribution {
  enum class Family { Uniform, Normal, Exponential };
  Family family = Family::Uniform;
  double p1 = 0.0;  ///< uniform: lo;  normal: mu;     exponential: rate
  double p2 = 1.0;  ///< uniform: hi;  normal: sigma;  exponential: unused

  static Distribution uniform(double lo, double hi) { return {Family::Uniform, lo, hi}; }
  static Distribution normal(double mu, double sigma) { return {Family::Normal, mu, sigma}; }
  static Distribution exponential(double rate) { return {Family::Exponential, rate, 0.0}; }
};

/// Product measure over coupling vectors: independent per-site distributions
/// plus the master seed of the counter-based stream (see ensemble.hpp).
struct EnsembleSpec {
  std::map<int, Distribution> per_site;
  std::uint64_t master_seed = 0;
};

struct Violation {
  std::string field;             ///< e.g. "interval.b", "interaction[2].x"
  std::optional<int> site_index;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const Problem&);
ValidationReport validate(const Problem&, const CouplingVector&);
ValidationReport validate(const Problem&, const EnsembleSpec&);

/// Numerical tolerances used throughout; defaults() honors the
/// SLPI_TOL_PROFILE environment variable ("default" | "strict" | "fast").
struct Tolerances {
  double ode_rel = 1e-12;  ///< relative error per RK step
  double ode_abs = 1e-14;  ///< absolute error per RK step
  double eigen = 1e-9;     ///< |D| below this counts as an eigenvalue hit
  double node = 1e-7;      ///< node test |u(p)| <= node * sup|u|
  double pole = 1e-10;     ///< normalized-Wronskian pole threshold
  double quad = 1e-10;     ///< relative adaptive-quadrature target
  double band = 0.02;      ///< Bernoulli-degenerate band half-width for scans

  static Tolerances defaults();
  static Tolerances profile(const std::string& name);  ///< throws on unknown name
};

}  // namespace slpi
