#pragma once
// Diagonal Green-function values, the Krein (Moebius) transformation group
// relating different coupling strengths at one site, and the Atkinson
// derivative-identity checker.
//
//   G(z,x,x)  = u_a(z,x) u_b(z,x)  / W(u_a, u_b)     (value form, delta)
//   G~(z,x,x) = u_a'(z,x) u_b'(z,x) / W(u_a, u_b)    (derivative form, delta')
//
// where u_a, u_b are the boundary-condition shoots from either endpoint. The
// renormalization logs of both traces cancel exactly in the ratio because the
// numerator and denominator are evaluated at the same abscissa.

#include <complex>

#include "slpi/model.hpp"
#include "slpi/shoot.hpp"

namespace slpi {

struct GreenValue {
  Complex z;
  double x = 0.0;
  Complex value;           ///< NaN when `pole` is set
  bool pole = false;       ///< |W| underflowed the relative pole threshold
  double scale_log = 0.0;  ///< combined trace log-scale at x (cancels in value)
};

/// Which numerator the diagonal uses.
enum class GreenForm { Auto, Value, Derivative };

/// Diagonal Green value at x. GreenForm::Auto picks Derivative when x is the
/// position of a delta' site, Value otherwise.
GreenValue green_diag(const Problem&, const CouplingVector&, Complex z, double x,
                      GreenForm form = GreenForm::Auto,
                      const Tolerances& tol = Tolerances::defaults());

struct KreinValue {
  Complex value;
  bool pole = false;
};

/// Coupling transform of a diagonal Green value at one site:
///   Delta:       g / (1 - alpha g)
///   DeltaPrime:  g / (1 + alpha g)
/// Returns a pole marker when the denominator cancels to rounding level.
KreinValue krein_transform(Complex g0, double alpha, InteractionKind kind);

/// |G_beta - G_alpha / (1 -+ (beta-alpha) G_alpha)| with both sides computed
/// by independent shoots on the single-site problem (sign per site kind).
/// Throws std::domain_error for multi-site problems and std::runtime_error
/// when either evaluation hits a pole ("relation untestable at this z").
double krein_relation_residual(const Problem&, int site_index, Complex z, double alpha,
                               double beta, const Tolerances& tol = Tolerances::defaults());

/// Which ratio the derivative identity is checked for.
enum class RatioForm { ValueOverDerivative, DerivativeOverValue };

/// Residual of the spectral-parameter derivative identity at real lambda:
///   d/dl [u/u'](l, x)  =  (1/u'(l,x)^2) * int_a^x u(l,t)^2 dt
///   d/dl [u'/u](l, x)  = -(1/u(l,x)^2)  * int_a^x u(l,t)^2 dt
/// The left side is a central finite difference with step h, so the residual
/// is O(h^2). Throws std::domain_error when x is a site or the denominator of
/// the chosen form is too small there ("identity form inapplicable at x").
double atkinson_residual(const Problem&, const CouplingVector&, double lambda, double x, double h,
                         RatioForm form = RatioForm::ValueOverDerivative,
                         const Tolerances& tol = Tolerances::defaults());

}  // namespace slpi
