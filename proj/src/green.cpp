#include "slpi/green.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace slpi {

GreenValue green_diag(const Problem& prob, const CouplingVector& omega, Complex z, double x,
                      GreenForm form, const Tolerances& tol) {
  if (!(x > prob.interval.a && x < prob.interval.b))
    throw std::domain_error("green_diag: x must lie strictly inside the interval");

  if (form == GreenForm::Auto) {
    form = GreenForm::Value;
    for (const auto& s : prob.interactions.sites)
      if (s.x == x && s.kind == InteractionKind::DeltaPrime) form = GreenForm::Derivative;
  }

  SolutionTrace ta = shoot(prob, omega, z, ShootDirection::FromLeft, tol);
  SolutionTrace tb = shoot(prob, omega, z, ShootDirection::FromRight, tol);
  auto va = ta.eval(x), vb = tb.eval(x);

  GreenValue g;
  g.z = z;
  g.x = x;
  g.scale_log = va.log_scale + vb.log_scale;

  // Same-abscissa ratio: the exp(log_scale) factors cancel identically.
  const Complex w = va.u * vb.du - va.du * vb.u;
  const double off = va.log_scale + vb.log_scale - ta.log_sup_norm() - tb.log_sup_norm();
  const double w_normalized = std::abs(w) * std::exp(off);
  if (w_normalized < tol.pole) {
    g.pole = true;
    g.value = Complex(std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::quiet_NaN());
    return g;
  }
  g.value = (form == GreenForm::Value ? va.u * vb.u : va.du * vb.du) / w;
  return g;
}

KreinValue krein_transform(Complex g0, double alpha, InteractionKind kind) {
  const Complex den =
      kind == InteractionKind::Delta ? 1.0 - alpha * g0 : 1.0 + alpha * g0;
  if (std::abs(den) <= 1e-14 * (1.0 + std::abs(alpha * g0)))
    return {Complex(std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN()),
            true};
  return {g0 / den, false};
}

double krein_relation_residual(const Problem& prob, int site_index, Complex z, double alpha,
                               double beta, const Tolerances& tol) {
  if (prob.interactions.size() != 1)
    throw std::domain_error(
        "krein_relation_residual: the relation is per-site; supply a single-site problem");
  const InteractionSite* site = prob.interactions.find(site_index);
  if (!site)
    throw std::domain_error("krein_relation_residual: no site with index " +
                            std::to_string(site_index));

  const GreenForm form =
      site->kind == InteractionKind::Delta ? GreenForm::Value : GreenForm::Derivative;
  auto eval = [&](double coupling) {
    CouplingVector w;
    w.values[site_index] = coupling;
    return green_diag(prob, w, z, site->x, form, tol);
  };
  const GreenValue ga = eval(alpha), gb = eval(beta);
  if (ga.pole || gb.pole)
    throw std::runtime_error("krein_relation_residual: relation untestable at this z (pole)");

  // delta:  G_beta = G_alpha / (1 + (alpha-beta) G_alpha)
  // delta': same with the opposite sign of the coupling increment.
  const double inc = site->kind == InteractionKind::Delta ? alpha - beta : beta - alpha;
  const Complex den = 1.0 + inc * ga.value;
  if (std::abs(den) <= 1e-14 * (1.0 + std::abs(inc * ga.value)))
    throw std::runtime_error("krein_relation_residual: relation untestable at this z (pole)");
  return std::abs(gb.value - ga.value / den);
}

double atkinson_residual(const Problem& prob, const CouplingVector& omega, double lambda, double x,
                         double h, RatioForm form, const Tolerances& tol) {
  if (!(x > prob.interval.a && x <= prob.interval.b))
    throw std::domain_error("atkinson_residual: x must lie in (a,b]");
  for (const auto& s : prob.interactions.sites)
    if (s.x == x)
      throw std::domain_error("atkinson_residual: x coincides with an interaction site");
  if (!(h > 0.0)) throw std::domain_error("atkinson_residual: h must be positive");

  SolutionTrace mid = shoot(prob, omega, lambda, ShootDirection::FromLeft, tol);
  SolutionTrace lo = shoot(prob, omega, lambda - h, ShootDirection::FromLeft, tol);
  SolutionTrace hi = shoot(prob, omega, lambda + h, ShootDirection::FromLeft, tol);

  auto vm = mid.eval(x);
  const bool over_du = form == RatioForm::ValueOverDerivative;
  {
    // The denominator of the chosen ratio must be away from zero at x.
    const double den = over_du ? std::abs(vm.du) : std::abs(vm.u);
    const double sup = std::exp((over_du ? mid.log_sup_du() : mid.log_sup_u()) - vm.log_scale);
    if (!(den > 1e-8 * sup))
      throw std::domain_error("atkinson_residual: identity form inapplicable at x (denominator ~ 0)");
  }

  auto ratio = [&](const SolutionTrace& t) {
    auto v = t.eval(x);  // the log-scale cancels in the same-trace ratio
    return over_du ? (v.u / v.du).real() : (v.du / v.u).real();
  };
  const double fd = (ratio(hi) - ratio(lo)) / (2.0 * h);

  const double I = integrate_product(mid, mid, prob.interval.a, x, tol.quad).real();
  const double den_true = (over_du ? std::abs(vm.du) : std::abs(vm.u)) * std::exp(vm.log_scale);
  const double rhs = (over_du ? 1.0 : -1.0) * I / (den_true * den_true);

  return std::abs(fd - rhs);
}

}  // namespace slpi
