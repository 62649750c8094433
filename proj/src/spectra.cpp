#include "slpi/spectra.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "slpi/rootfind.hpp"

namespace slpi {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Lattice offset of the right boundary condition in the sigma-scaled phase:
// u(b)cos(g) + u'(b)sin(g) = 0  <=>  phase(b) = k*pi - atan2(sigma sin g, cos g).
double scaled_gamma(double gamma, double sigma) {
  return std::atan2(sigma * std::sin(gamma), std::cos(gamma));
}

// Unwrapped scaled phase of the left shoot at b. All phases of one counting
// query share sigma (and the matching step cap), so they are comparable.
double phase_at_b(const Problem& prob, const CouplingVector& omega, double E, double sigma,
                  const Tolerances& tol) {
  SolutionTrace t =
      shoot(prob, omega, E, ShootDirection::FromLeft, tol, 1.2 / sigma);
  return pruefer_phase_at(t, prob.interval.b, sigma);
}

double window_sigma(const Problem& prob, double E_lo, double E_hi) {
  const double K = potential_bound(prob.potential, prob.interval);
  return std::sqrt(1.0 + K + std::max(std::abs(E_lo), std::abs(E_hi)));
}

}  // namespace

MatchingValue matching_determinant(const Problem& prob, const CouplingVector& omega, double E,
                                   const Tolerances& tol) {
  SolutionTrace ta = shoot(prob, omega, E, ShootDirection::FromLeft, tol);
  SolutionTrace tb = shoot(prob, omega, E, ShootDirection::FromRight, tol);
  // W is constant in x (also across sites); the midpoint is as good as any.
  const double xm = 0.5 * (prob.interval.a + prob.interval.b);
  MatchingValue mv;
  mv.E = E;
  mv.D = wronskian_normalized(ta, tb, xm).real();
  mv.scale_log = ta.log_sup_norm() + tb.log_sup_norm();
  return mv;
}

long eigenvalue_count(const Problem& prob, const CouplingVector& omega, double E_lo, double E_hi,
                      const Tolerances& tol) {
  if (!(E_lo < E_hi)) throw std::domain_error("eigenvalue_count: requires E_lo < E_hi");
  const double sigma = window_sigma(prob, E_lo, E_hi);
  const double gh = scaled_gamma(prob.bc.gamma, sigma);
  const double c_lo = (phase_at_b(prob, omega, E_lo, sigma, tol) + gh) / kPi;
  const double c_hi = (phase_at_b(prob, omega, E_hi, sigma, tol) + gh) / kPi;
  const long first = static_cast<long>(std::ceil(c_lo + 1e-9));
  const long last = static_cast<long>(std::floor(c_hi - 1e-9));
  return std::max(0L, last - first + 1);
}

SpectralReport find_eigenvalues(const Problem& prob, const CouplingVector& omega, double E_lo,
                                double E_hi, std::size_t max_count, const Tolerances& tol) {
  if (!(E_lo < E_hi)) throw std::domain_error("find_eigenvalues: requires E_lo < E_hi");
  {
    ValidationReport rep = validate(prob, omega);
    if (!rep.ok())
      throw std::invalid_argument("find_eigenvalues: invalid problem: " +
                                  rep.violations.front().field + ": " +
                                  rep.violations.front().message);
  }

  SpectralReport report;
  report.window_lo = E_lo;
  report.window_hi = E_hi;

  const double sigma = window_sigma(prob, E_lo, E_hi);
  const double gh = scaled_gamma(prob.bc.gamma, sigma);
  auto count_fn = [&](double E) {
    return (phase_at_b(prob, omega, E, sigma, tol) + gh) / kPi;
  };

  const double c_lo = count_fn(E_lo), c_hi = count_fn(E_hi);
  const long first = static_cast<long>(std::ceil(c_lo + 1e-9));
  const long last = static_cast<long>(std::floor(c_hi - 1e-9));

  const double scale = std::max({1.0, std::abs(E_lo), std::abs(E_hi)});
  const double xtol = 1e-12 * scale;
  double bracket_lo = E_lo;

  for (long k = first; k <= last; ++k) {
    if (report.eigenvalues.size() >= max_count) {
      report.continuation = bracket_lo;
      break;
    }
    // The fractional count c(E) is continuous and strictly increasing, so
    // c(E) - k brackets exactly one root between the previous root and E_hi.
    double root = brent_root([&](double E) { return count_fn(E) - double(k); }, bracket_lo, E_hi,
                             xtol);

    MatchingValue mv = matching_determinant(prob, omega, root, tol);
    double residual = std::abs(mv.D);
    if (residual > tol.eigen) {
      // Polish on the determinant itself: a simple root changes sign.
      const double w = 1e4 * xtol;
      double l = std::max(E_lo, root - w), r = std::min(E_hi, root + w);
      double Dl = matching_determinant(prob, omega, l, tol).D;
      double Dr = matching_determinant(prob, omega, r, tol).D;
      if ((Dl > 0) != (Dr > 0)) {
        root = brent_root(
            [&](double E) { return matching_determinant(prob, omega, E, tol).D; }, l, r,
            std::numeric_limits<double>::epsilon() * scale);
        residual = std::abs(matching_determinant(prob, omega, root, tol).D);
      }
      if (residual > tol.eigen)
        throw std::runtime_error("find_eigenvalues: refinement stalled at E=" + fmt(root) +
                                 " (|D|=" + fmt(residual) + ")");
    }

    SolutionTrace eig = shoot(prob, omega, root, ShootDirection::FromLeft, tol);
    EigenvalueInfo info;
    info.E = root;
    info.residual = residual;
    info.zero_count = pruefer_zero_count(eig, prob.interval.a, prob.interval.b);
    report.eigenvalues.push_back(info);
    bracket_lo = root + xtol;
  }
  return report;
}

DichotomyVerdict classify_dichotomy(const Problem& prob, double E, double node_tol,
                                    const Tolerances& tol) {
  if (!(node_tol > 0.0)) throw std::domain_error("classify_dichotomy: node_tol must be positive");
  const CouplingVector zero = CouplingVector::zeros(prob.interactions);

  DichotomyVerdict v;
  v.E = E;
  v.base_residual = std::abs(matching_determinant(prob, zero, E, tol).D);

  if (v.base_residual >= tol.eigen) {
    v.tag = DichotomyTag::MeasureZero;
    v.reason = "E is not an eigenvalue of the zero-coupling operator (|D|=" +
               fmt(v.base_residual) + ")";
    return v;
  }

  // E is (numerically) spectral: pin the root of D so the eigenfunction is
  // computed at the true eigenvalue, not at E's tolerance-level offset.
  const double s = std::max(1.0, std::abs(E));
  auto D = [&](double e) { return matching_determinant(prob, zero, e, tol).D; };
  double root = E;
  bool pinned = false;
  for (double w = 1e-6 * s; w <= 1.1e-2 * s; w *= 4.0) {
    const double l = E - w, r = E + w;
    const double Dl = D(l), Dr = D(r);
    if ((Dl > 0) != (Dr > 0)) {
      root = brent_root(D, l, r, 1e-13 * s);
      pinned = true;
      break;
    }
  }
  if (!pinned)
    throw std::runtime_error("classify_dichotomy: ambiguous eigenvalue near E=" + fmt(E) +
                             ": |D| is below tolerance but no sign change brackets a root");
  v.refined_E = root;

  SolutionTrace u = shoot(prob, zero, root, ShootDirection::FromLeft, tol);
  const double log_sup_u = u.log_sup_u(), log_sup_du = u.log_sup_du();

  v.tag = DichotomyTag::AllOmega;
  for (const auto& site : prob.interactions.sites) {
    auto val = u.eval(site.x, Side::Right);  // the tested field is continuous at the site
    NodeResidual nr;
    nr.site_index = site.index;
    nr.x = site.x;
    nr.kind = site.kind;
    const bool is_delta = site.kind == InteractionKind::Delta;
    const double mag = is_delta ? std::abs(val.u) : std::abs(val.du);
    const double log_sup = is_delta ? log_sup_u : log_sup_du;
    nr.residual = mag == 0.0 ? 0.0 : std::exp(std::log(mag) + val.log_scale - log_sup);
    v.node_residuals.push_back(nr);
    if (nr.residual > node_tol && v.tag == DichotomyTag::AllOmega) {
      v.tag = DichotomyTag::MeasureZero;
      v.offending_site = site.index;
      v.reason = "node condition fails at site " + std::to_string(site.index) + " (x=" +
                 fmt(site.x) + ", residual=" + fmt(nr.residual) + ")";
    }
  }
  if (v.tag == DichotomyTag::AllOmega)
    v.reason = prob.interactions.empty()
                   ? "eigenvalue of the zero-coupling operator; no interaction sites"
                   : "eigenfunction satisfies the node condition at every site";
  return v;
}

}  // namespace slpi
