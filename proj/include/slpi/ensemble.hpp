#pragma once
// Seeded sampling of coupling ensembles and the Monte-Carlo estimator for
// "E is an eigenvalue of H_omega", which exhibits the 0/1 dichotomy.
//
// Randomness is counter-based: the variate for (master_seed, sample index,
// site index) is a pure function of those keys (splitmix-style mixing into a
// uniform, then inverse-CDF transforms). Sampling order, partial evaluation,
// and thread count therefore cannot change any result, and streams are
// bit-stable across platforms.

#include <cstdint>
#include <string>
#include <vector>

#include "slpi/model.hpp"

namespace slpi {

/// Uniform variate in (0,1) for a (seed, sample, site) key triple.
double counter_uniform01(std::uint64_t master_seed, std::uint64_t sample_index,
                         std::int64_t site_index);

/// Inverse normal CDF (Wichura's PPND16), |error| < 1e-15 for p in (0,1).
double inverse_normal_cdf(double p);

/// Deterministic coupling draw for the given sample index.
CouplingVector sample_couplings(const InteractionSet&, const EnsembleSpec&,
                                std::uint64_t sample_index);

struct HistogramBin {
  double lo = 0.0, hi = 0.0;  ///< residual magnitude edges (decades)
  std::uint64_t count = 0;
};

struct MonteCarloResult {
  double E = 0.0;
  std::uint64_t n_samples = 0;  ///< completed samples; histogram sums to this
  std::uint64_t n_failed = 0;   ///< ODE failures, excluded from the fraction
  double hit_fraction = 0.0;    ///< hits / n_samples
  std::vector<HistogramBin> residual_histogram;  ///< of the scale-adjusted |D|
  std::uint64_t seed = 0;
  double eigen_tol = 0.0;
};

/// Draws n_samples coupling vectors, computes the scale-adjusted |D(E)| for
/// each, and counts hits below eigen_tol. Deterministic for fixed inputs and
/// independent of `threads` (per-sample storage, ordered reduction).
MonteCarloResult estimate_eigenvalue_probability(const Problem&, const EnsembleSpec&, double E,
                                                 std::uint64_t n_samples, double eigen_tol,
                                                 const Tolerances& tol = Tolerances::defaults(),
                                                 int threads = 1);

struct ScanFinding {
  std::size_t grid_index = 0;
  double E = 0.0;
  double hit_fraction = 0.0;
  std::string message;
};

struct ScanReport {
  std::vector<MonteCarloResult> results;  ///< one per grid point, in order
  std::vector<ScanFinding> findings;      ///< fractions outside {<=band, >=1-band}
};

/// Runs the estimator over an energy grid and flags any hit fraction outside
/// the Bernoulli-degenerate band [0, band_tol] U [1-band_tol, 1].
ScanReport dichotomy_scan(const Problem&, const EnsembleSpec&, const std::vector<double>& E_grid,
                          std::uint64_t n_samples, double eigen_tol, double band_tol = 0.02,
                          const Tolerances& tol = Tolerances::defaults(), int threads = 1);

}  // namespace slpi
