#pragma once
// Oscillation-theory certificates. All certificates are positive-only
// sufficient conditions: Inconclusive never asserts the negation.
//
//  * Lyapunov disconjugacy window: with |V| <= K, no nontrivial solution at
//    energy E has two zeros inside an interval of length <= 2/sqrt(K+|E|).
//    Two interaction sites inside one window therefore force the measure-zero
//    branch of the coupling dichotomy (they cannot both be eigenfunction
//    nodes).
//  * Zero-count bound: any solution on an interval of length T has fewer than
//    T*sqrt(|E|+K)/2 + 1 zeros; at least that many sites again forces the
//    measure-zero branch.
//  * Hille integral criterion: on a half line with V <= E, integrable E - V,
//    and limsup_x x*int_x^inf (E-V) < 1/4, solutions at E are nonoscillatory.
//    Evaluated for potentials with an analytic tail (constant or
//    inverse-square); the certificate records the truncation and tail form.

#include <optional>
#include <string>

#include "slpi/model.hpp"
#include "slpi/spectra.hpp"

namespace slpi {

struct OscillationCertificate {
  enum class Tag { LyapunovDisconjugate, ZeroCountBound, Nonoscillatory, Inconclusive };
  Tag tag = Tag::Inconclusive;
  double E = 0.0;

  // LyapunovDisconjugate
  std::optional<double> window;      ///< 2/sqrt(K+|E|)
  std::optional<double> min_gap;     ///< smallest consecutive-site gap found
  // ZeroCountBound
  std::optional<double> bound;       ///< T*sqrt(|E|+K)/2 + 1
  std::optional<int> site_count;
  // Nonoscillatory
  std::optional<std::string> method;    ///< "hille"
  std::optional<double> sup_value;      ///< sup of x*int_x^inf (E-V), must be < 1/4
  std::optional<double> x_max;          ///< truncation point of the grid scan
  std::optional<std::string> tail_form; ///< "constant" | "inverse-square"
  // Inconclusive
  std::optional<std::string> reason;

  bool conclusive() const { return tag != Tag::Inconclusive; }
};

/// 2/sqrt(K+|E|); +infinity when K+|E| = 0. Throws std::domain_error for K<0.
double lyapunov_window(double K, double E);

/// Fires when two consecutive sites fit inside one Lyapunov window.
OscillationCertificate lyapunov_certificate(const Problem&, double E);

/// T*sqrt(|E|+K)/2 + 1. Throws std::domain_error for negative inputs.
double zero_count_bound(double T, double K, double E);

/// Fires when the site count reaches the zero-count bound for [a,b].
OscillationCertificate measure_zero_by_interaction_count(const Problem&, double E);

/// Hille criterion on [a, infinity), truncated at x_max with the potential's
/// analytic tail integrated exactly. `tail_grid` is the number of scan points.
/// Throws std::runtime_error when V > E somewhere or the tail integral
/// diverges, and std::domain_error when the potential has no analytic tail.
OscillationCertificate hille_nonoscillatory(const PotentialSpec&, double E, double a, double x_max,
                                            int tail_grid);

struct ConsistencyReport {
  bool consistent = false;
  DichotomyVerdict verdict;  ///< what the classifier said
  std::string detail;
};

/// A conclusive certificate promises the measure-zero branch; verify the
/// dichotomy classifier agrees (i.e. does not return AllOmega) at E.
/// Throws std::domain_error for Inconclusive certificates.
ConsistencyReport cross_check_certificate(const Problem&, double E, const OscillationCertificate&,
                                          double node_tol = 1e-7,
                                          const Tolerances& tol = Tolerances::defaults());

}  // namespace slpi
