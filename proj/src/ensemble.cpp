#include "slpi/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "slpi/spectra.hpp"

namespace slpi {

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
  // splitmix64 output mixing
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a + 0x9E3779B97F4A7C15ull * (b + 0x632BE59BD9B4E019ull));
}

}  // namespace

double counter_uniform01(std::uint64_t master_seed, std::uint64_t sample_index,
                         std::int64_t site_index) {
  const std::uint64_t key =
      combine(combine(master_seed, sample_index), static_cast<std::uint64_t>(site_index));
  // 53 mantissa bits, centered in the bin: strictly inside (0,1).
  return (static_cast<double>(key >> 11) + 0.5) * 0x1.0p-53;
}

double inverse_normal_cdf(double p) {
  // Wichura (1988), algorithm AS 241, PPND16.
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("inverse_normal_cdf: p must lie in (0,1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) *
                    r +
                4.5921953931549871457e4) *
                   r +
               1.3731693765509461125e4) *
                  r +
              1.9715909503065514427e3) *
                 r +
             1.3314166789178437745e2) *
                r +
            3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) *
                    r +
                2.1213794301586595867e4) *
                   r +
               5.3941960214247511077e3) *
                  r +
              6.8718700749205790830e2) *
                 r +
             4.2313330701600911252e1) *
                r +
            1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) *
                   r +
               1.27045825245236838258e0) *
                  r +
              3.64784832476320460504e0) *
                 r +
             5.76949722146069140550e0) *
                r +
            4.63033784615654529590e0) *
               r +
           1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) *
                   r +
               1.48103976427480074590e-1) *
                  r +
              6.89767334985100004550e-1) *
                 r +
             1.67638483018380384940e0) *
                r +
            2.05319162663775882187e0) *
               r +
           1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) *
                   r +
               2.65321895265761230930e-2) *
                  r +
              2.96560571828504891230e-1) *
                 r +
             1.78482653991729133580e0) *
                r +
            5.46378491116411436990e0) *
               r +
           6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) *
                   r +
               7.86869131145613259100e-4) *
                  r +
              1.48753612908506148525e-2) *
                 r +
             1.36929880922735805310e-1) *
                r +
            5.99832206555887937690e-1) *
               r +
           1.0);
  }
  return q < 0.0 ? -val : val;
}

CouplingVector sample_couplings(const InteractionSet& sites, const EnsembleSpec& ens,
                                std::uint64_t sample_index) {
  CouplingVector w;
  for (const auto& site : sites.sites) {
    auto it = ens.per_site.find(site.index);
    if (it == ens.per_site.end())
      throw std::invalid_argument("sample_couplings: no distribution for site index " +
                                  std::to_string(site.index));
    const Distribution& d = it->second;
    const double u = counter_uniform01(ens.master_seed, sample_index, site.index);
    double value;
    switch (d.family) {
      case Distribution::Family::Uniform:
        value = d.p1 + (d.p2 - d.p1) * u;
        break;
      case Distribution::Family::Normal:
        value = d.p1 + d.p2 * inverse_normal_cdf(u);
        break;
      case Distribution::Family::Exponential:
        value = -std::log1p(-u) / d.p1;
        break;
      default:
        throw std::logic_error("sample_couplings: unknown distribution family");
    }
    w.values[site.index] = value;
  }
  return w;
}

namespace {

// Fixed decade bins for the |D| histogram: 10^-16 .. 10^4, clamped outside.
constexpr int kHistLo = -16, kHistHi = 4;

int hist_bin(double r) {
  if (r <= 0.0) return 0;
  const double lg = std::log10(r);
  const int k = static_cast<int>(std::floor(lg));
  return std::clamp(k - kHistLo, 0, kHistHi - kHistLo - 1);
}

// Deterministic parallel map: per-index output slots, ordered reduction.
template <typename F>
void parallel_for(std::uint64_t n, int threads, F&& body) {
  threads = std::max(1, threads);
  if (threads == 1 || n < 2) {
    for (std::uint64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::uint64_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::uint64_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] {
      for (std::uint64_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

MonteCarloResult estimate_eigenvalue_probability(const Problem& prob, const EnsembleSpec& ens,
                                                 double E, std::uint64_t n_samples,
                                                 double eigen_tol, const Tolerances& tol,
                                                 int threads) {
  if (n_samples < 1)
    throw std::domain_error("estimate_eigenvalue_probability: n_samples must be >= 1");
  {
    ValidationReport rep = validate(prob, ens);
    if (!rep.ok())
      throw std::invalid_argument("estimate_eigenvalue_probability: invalid input: " +
                                  rep.violations.front().field + ": " +
                                  rep.violations.front().message);
  }

  enum class Status : unsigned char { Ok, Failed };
  std::vector<double> residuals(n_samples, 0.0);
  std::vector<Status> status(n_samples, Status::Ok);

  parallel_for(n_samples, threads, [&](std::uint64_t i) {
    try {
      const CouplingVector w = sample_couplings(prob.interactions, ens, i);
      residuals[i] = std::abs(matching_determinant(prob, w, E, tol).D);
    } catch (const ShootError&) {
      status[i] = Status::Failed;
    }
  });

  MonteCarloResult res;
  res.E = E;
  res.seed = ens.master_seed;
  res.eigen_tol = eigen_tol;
  for (int k = kHistLo; k < kHistHi; ++k)
    res.residual_histogram.push_back({std::pow(10.0, k), std::pow(10.0, k + 1), 0});

  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    if (status[i] == Status::Failed) {
      ++res.n_failed;
      continue;
    }
    ++res.n_samples;
    if (residuals[i] < eigen_tol) ++hits;
    ++res.residual_histogram[hist_bin(residuals[i])].count;
  }
  res.hit_fraction = res.n_samples == 0 ? 0.0 : double(hits) / double(res.n_samples);
  return res;
}

ScanReport dichotomy_scan(const Problem& prob, const EnsembleSpec& ens,
                          const std::vector<double>& E_grid, std::uint64_t n_samples,
                          double eigen_tol, double band_tol, const Tolerances& tol, int threads) {
  ScanReport report;
  for (std::size_t i = 0; i < E_grid.size(); ++i) {
    MonteCarloResult r =
        estimate_eigenvalue_probability(prob, ens, E_grid[i], n_samples, eigen_tol, tol, threads);
    const bool degenerate = r.hit_fraction <= band_tol || r.hit_fraction >= 1.0 - band_tol;
    if (!degenerate)
      report.findings.push_back(
          {i, E_grid[i], r.hit_fraction,
           "hit fraction is outside the Bernoulli-degenerate band; the coupling dichotomy "
           "predicts fractions near 0 or 1 only"});
    report.results.push_back(std::move(r));
  }
  return report;
}

}  // namespace slpi
