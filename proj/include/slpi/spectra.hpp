#pragma once
// Eigenvalue machinery built on the matching determinant
//   D(E) = W(u_a(E), u_b(E))
// of the two boundary-condition shoots: D(E) = 0 exactly at eigenvalues, and
// the scaled Pruefer phase of u_a at b is strictly increasing in E, so lattice
// counts of that phase give the exact number of eigenvalues per window.
//
// Includes the coupling dichotomy classifier: for fixed E, the set of coupling
// vectors making E an eigenvalue is either all of coupling space (E is an
// eigenvalue of the zero-coupling operator whose eigenfunction satisfies the
// node condition at every site) or a measure-zero set.

#include <optional>
#include <string>
#include <vector>

#include "slpi/model.hpp"
#include "slpi/shoot.hpp"

namespace slpi {

struct MatchingValue {
  double E = 0.0;
  double D = 0.0;          ///< Wronskian / (N_a * N_b): dimensionless, scale-free
  double scale_log = 0.0;  ///< log(N_a * N_b): restores the raw Wronskian scale
};

/// Scale-adjusted matching determinant at real E (Wronskian is x-independent;
/// evaluated at the midpoint).
MatchingValue matching_determinant(const Problem&, const CouplingVector&, double E,
                                   const Tolerances& tol = Tolerances::defaults());

/// Exact number of eigenvalues in the open window (E_lo, E_hi), by monotone
/// phase counts at the window edges (no determinant sign scanning).
long eigenvalue_count(const Problem&, const CouplingVector&, double E_lo, double E_hi,
                      const Tolerances& tol = Tolerances::defaults());

struct EigenvalueInfo {
  double E = 0.0;
  double residual = 0.0;  ///< |D(E)| after refinement
  int zero_count = 0;     ///< interior zeros of the eigenfunction
};

struct SpectralReport {
  double window_lo = 0.0, window_hi = 0.0;
  std::vector<EigenvalueInfo> eigenvalues;  ///< sorted, simple, one per bracket
  std::optional<double> continuation;       ///< resume point when max_count was hit
};

/// All eigenvalues in (E_lo, E_hi): phase counts isolate one root per lattice
/// index, a bracketed Brent solve on the fractional count pins each root, and
/// the |D| residual is verified against the eigenvalue tolerance.
SpectralReport find_eigenvalues(const Problem&, const CouplingVector&, double E_lo, double E_hi,
                                std::size_t max_count = 64,
                                const Tolerances& tol = Tolerances::defaults());

struct NodeResidual {
  int site_index = 0;
  double x = 0.0;
  InteractionKind kind = InteractionKind::Delta;
  double residual = 0.0;  ///< |u(x)|/sup|u| (delta) or |u'(x)|/sup|u'| (delta')
};

enum class DichotomyTag { AllOmega, MeasureZero };

struct DichotomyVerdict {
  DichotomyTag tag = DichotomyTag::MeasureZero;
  double E = 0.0;
  std::optional<double> refined_E;       ///< root of D near E (when E is spectral)
  double base_residual = 0.0;            ///< |D(E)| at zero coupling
  std::vector<NodeResidual> node_residuals;
  std::optional<int> offending_site;     ///< first site failing the node test
  std::string reason;
};

/// The dichotomy decision at energy E: AllOmega iff E is an eigenvalue of the
/// zero-coupling operator AND its eigenfunction satisfies the node condition
/// (u = 0 at delta sites, u' = 0 at delta' sites) within node_tol; otherwise
/// MeasureZero with the reason/witness. Throws std::runtime_error("ambiguous
/// eigenvalue ...") when |D(E)| is below tolerance but no root can be pinned.
DichotomyVerdict classify_dichotomy(const Problem&, double E, double node_tol = 1e-7,
                                    const Tolerances& tol = Tolerances::defaults());

}  // namespace slpi
