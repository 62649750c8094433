#include "slpi/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace slpi {

namespace {
std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}
}  // namespace

double lyapunov_window(double K, double E) {
  if (K < 0.0) throw std::domain_error("lyapunov_window: K must be nonnegative");
  const double s = K + std::abs(E);
  if (s == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 / std::sqrt(s);
}

OscillationCertificate lyapunov_certificate(const Problem& prob, double E) {
  const double K = potential_bound(prob.potential, prob.interval);
  const double L = lyapunov_window(K, E);

  OscillationCertificate cert;
  cert.E = E;
  cert.window = L;

  const auto& sites = prob.interactions.sites;
  if (sites.size() < 2) {
    cert.tag = OscillationCertificate::Tag::Inconclusive;
    cert.reason = "needs at least two interaction sites";
    return cert;
  }
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sites.size(); ++i)
    min_gap = std::min(min_gap, sites[i].x - sites[i - 1].x);
  cert.min_gap = min_gap;

  if (min_gap <= L) {
    cert.tag = OscillationCertificate::Tag::LyapunovDisconjugate;
  } else {
    cert.tag = OscillationCertificate::Tag::Inconclusive;
    cert.reason = "smallest site gap " + fmt(min_gap) + " exceeds the window " + fmt(L);
  }
  return cert;
}

double zero_count_bound(double T, double K, double E) {
  if (T < 0.0 || K < 0.0)
    throw std::domain_error("zero_count_bound: T and K must be nonnegative");
  return T * std::sqrt(std::abs(E) + K) / 2.0 + 1.0;
}

OscillationCertificate measure_zero_by_interaction_count(const Problem& prob, double E) {
  const double K = potential_bound(prob.potential, prob.interval);
  const double bound = zero_count_bound(prob.interval.length(), K, E);

  OscillationCertificate cert;
  cert.E = E;
  cert.bound = bound;
  cert.site_count = static_cast<int>(prob.interactions.size());

  if (static_cast<double>(prob.interactions.size()) >= bound) {
    cert.tag = OscillationCertificate::Tag::ZeroCountBound;
  } else {
    cert.tag = OscillationCertificate::Tag::Inconclusive;
    cert.reason = "site count " + std::to_string(prob.interactions.size()) +
                  " is below the zero bound " + fmt(bound);
  }
  return cert;
}

namespace {

// Analytic tail of V beyond x_max: either a constant level or the
// inverse-square form v_inf - c/x^2.
struct Tail {
  bool inverse_square = false;
  double level = 0.0;  // constant value, or v_inf
  double c = 0.0;      // inverse-square strength
};

Tail tail_of(const PotentialSpec& pot) {
  if (const auto* k = std::get_if<ConstantPotential>(&pot)) return {false, k->value, 0.0};
  if (const auto* p = std::get_if<PiecewiseConstantPotential>(&pot))
    return {false, p->values.back(), 0.0};
  if (const auto* b = std::get_if<BuiltinPotential>(&pot)) {
    if (b->form == BuiltinForm::InverseSquareTail && b->params.size() == 2)
      return {true, b->params[0], b->params[1]};
    throw std::runtime_error(
        "hille_nonoscillatory: potential grows without an integrable tail (V > E eventually)");
  }
  throw std::domain_error(
      "hille_nonoscillatory: potential has no declared analytic tail (constant or inverse-square)");
}

}  // namespace

OscillationCertificate hille_nonoscillatory(const PotentialSpec& pot, double E, double a,
                                            double x_max, int tail_grid) {
  if (!(x_max > a)) throw std::domain_error("hille_nonoscillatory: requires x_max > a");
  if (tail_grid < 2) throw std::domain_error("hille_nonoscillatory: tail_grid must be >= 2");

  const Tail tail = tail_of(pot);

  // The integral int_x^inf (E - V) converges only if V -> E; with an
  // inverse-square tail the remainder is exactly c/x.
  const double level_gap = E - tail.level;
  if (std::abs(level_gap) > 1e-12 * std::max(1.0, std::abs(E))) {
    if (level_gap > 0)
      throw std::runtime_error(
          "hille_nonoscillatory: non-integrable tail (E - V does not vanish at infinity)");
    throw std::runtime_error("hille_nonoscillatory: hypothesis violated (V > E in the tail)");
  }
  if (tail.inverse_square && tail.c < 0.0)
    throw std::runtime_error("hille_nonoscillatory: hypothesis violated (V > E in the tail)");

  // Hypothesis V <= E on the truncated part, checked on a fine grid plus all
  // breakpoints (piecewise-constant pieces are flat between them).
  {
    std::vector<double> checks;
    const int n = std::max(tail_grid, 64);
    for (int i = 0; i <= n; ++i) checks.push_back(a + (x_max - a) * i / n);
    for (double x : potential_breakpoints(pot, {a, x_max})) {
      checks.push_back(x);
      checks.push_back(std::nextafter(x, a));
      checks.push_back(std::nextafter(x, x_max));
    }
    for (double x : checks)
      if (potential_value(pot, x) > E + 1e-12 * std::max(1.0, std::abs(E)))
        throw std::runtime_error("hille_nonoscillatory: hypothesis violated (V(x) > E at x=" +
                                 fmt(x) + ")");
  }

  const double tail_integral = tail.inverse_square ? tail.c / x_max : 0.0;
  // Beyond x_max: x*int_x^inf (E-V) = c exactly for the inverse-square tail.
  const double tail_sup = tail.inverse_square ? tail.c : 0.0;

  double sup = tail_sup;
  for (int i = 0; i < tail_grid; ++i) {
    const double x = a + (x_max - a) * i / (tail_grid - 1);
    const double body = E * (x_max - x) - potential_integral(pot, x, x_max);
    sup = std::max(sup, x * (body + tail_integral));
  }

  OscillationCertificate cert;
  cert.E = E;
  cert.method = "hille";
  cert.sup_value = sup;
  cert.x_max = x_max;
  cert.tail_form = tail.inverse_square ? "inverse-square" : "constant";
  if (sup < 0.25) {
    cert.tag = OscillationCertificate::Tag::Nonoscillatory;
  } else {
    cert.tag = OscillationCertificate::Tag::Inconclusive;
    cert.reason = "sup of x*int(E-V) over the scan is " + fmt(sup) + " >= 1/4";
  }
  return cert;
}

ConsistencyReport cross_check_certificate(const Problem& prob, double E,
                                          const OscillationCertificate& cert, double node_tol,
                                          const Tolerances& tol) {
  if (!cert.conclusive())
    throw std::domain_error("cross_check_certificate: certificate is inconclusive");

  ConsistencyReport rep;
  rep.verdict = classify_dichotomy(prob, E, node_tol, tol);
  rep.consistent = rep.verdict.tag != DichotomyTag::AllOmega;
  rep.detail = rep.consistent
                   ? "classifier confirms the measure-zero branch: " + rep.verdict.reason
                   : "counterexample: classifier returned AllOmega against the certificate";
  return rep;
}

}  // namespace slpi
