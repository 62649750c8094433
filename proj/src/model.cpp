#include "slpi/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace slpi {

namespace {

bool finite(double x) { return std::isfinite(x); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

const double* harmonic_params(const BuiltinPotential& p) {
  if (p.form != BuiltinForm::Harmonic || p.params.size() != 2) return nullptr;
  return p.params.data();
}

const double* invsq_params(const BuiltinPotential& p) {
  if (p.form != BuiltinForm::InverseSquareTail || p.params.size() != 2) return nullptr;
  return p.params.data();
}

}  // namespace

double potential_value(const PotentialSpec& pot, double x, Side side) {
  if (const auto* c = std::get_if<ConstantPotential>(&pot)) return c->value;
  if (const auto* p = std::get_if<PiecewiseConstantPotential>(&pot)) {
    // Piece k covers (breakpoints[k-1], breakpoints[k]); the side decides
    // which piece owns a breakpoint itself.
    const auto& bp = p->breakpoints;
    std::size_t k = (side == Side::Right)
                        ? std::upper_bound(bp.begin(), bp.end(), x) - bp.begin()
                        : std::lower_bound(bp.begin(), bp.end(), x) - bp.begin();
    return p->values.at(k);
  }
  if (const auto* t = std::get_if<TabulatedPotential>(&pot)) {
    const auto& g = t->grid;
    if (g.empty()) throw std::domain_error("tabulated potential: empty grid");
    if (x <= g.front()) return t->values.front();
    if (x >= g.back()) return t->values.back();
    std::size_t i = std::upper_bound(g.begin(), g.end(), x) - g.begin();
    double w = (x - g[i - 1]) / (g[i] - g[i - 1]);
    return t->values[i - 1] * (1.0 - w) + t->values[i] * w;
  }
  const auto& b = std::get<BuiltinPotential>(pot);
  if (const double* q = harmonic_params(b)) {
    double d = x - q[1];
    return q[0] * d * d;
  }
  if (const double* q = invsq_params(b)) {
    if (x == 0.0) throw std::domain_error("inverse-square potential evaluated at x = 0");
    return q[0] - q[1] / (x * x);
  }
  throw std::domain_error("builtin potential: malformed parameter list");
}

double potential_integral(const PotentialSpec& pot, double c, double d) {
  if (c > d) return -potential_integral(pot, d, c);
  if (const auto* k = std::get_if<ConstantPotential>(&pot)) return k->value * (d - c);
  if (const auto* p = std::get_if<PiecewiseConstantPotential>(&pot)) {
    double acc = 0.0, lo = c;
    const auto& bp = p->breakpoints;
    for (std::size_t i = 0; i < bp.size() && lo < d; ++i) {
      if (bp[i] <= lo) continue;
      double hi = std::min(bp[i], d);
      acc += p->values[i] * (hi - lo);
      lo = hi;
    }
    if (lo < d) acc += p->values.back() * (d - lo);
    return acc;
  }
  if (const auto* t = std::get_if<TabulatedPotential>(&pot)) {
    // Exact for the linear interpolant: trapezoid on each grid cell overlap.
    const auto& g = t->grid;
    double acc = 0.0;
    auto vat = [&](double x) { return potential_value(pot, x); };
    double lo = c;
    for (std::size_t i = 1; i < g.size() && lo < d; ++i) {
      if (g[i] <= lo) continue;
      double hi = std::min(g[i], d);
      acc += 0.5 * (vat(lo) + vat(hi)) * (hi - lo);
      lo = hi;
    }
    if (lo < d) acc += vat(d) * (d - lo);  // constant extrapolation past the grid
    return acc;
  }
  const auto& b = std::get<BuiltinPotential>(pot);
  if (const double* q = harmonic_params(b)) {
    auto cube = [&](double x) { double u = x - q[1]; return u * u * u / 3.0; };
    return q[0] * (cube(d) - cube(c));
  }
  if (const double* q = invsq_params(b)) {
    if (c <= 0.0 && d >= 0.0)
      throw std::domain_error("inverse-square potential integrated across x = 0");
    // int (v_inf - k/x^2) dx = v_inf x + k/x
    return q[0] * (d - c) + q[1] * (1.0 / d - 1.0 / c);
  }
  throw std::domain_error("builtin potential: malformed parameter list");
}

double potential_bound(const PotentialSpec& pot, const Interval& iv) {
  if (const auto* c = std::get_if<ConstantPotential>(&pot)) return std::abs(c->value);
  if (const auto* p = std::get_if<PiecewiseConstantPotential>(&pot)) {
    // only pieces that intersect [a, b] contribute
    double k = 0.0;
    for (std::size_t i = 0; i < p->values.size(); ++i) {
      double lo = i == 0 ? -std::numeric_limits<double>::infinity() : p->breakpoints[i - 1];
      double hi = i == p->breakpoints.size() ? std::numeric_limits<double>::infinity()
                                             : p->breakpoints[i];
      if (hi >= iv.a && lo <= iv.b) k = std::max(k, std::abs(p->values[i]));
    }
    return k;
  }
  if (const auto* t = std::get_if<TabulatedPotential>(&pot)) {
    // The interpolant's sup is attained at a grid node (or at the clamped ends).
    double k = std::max(std::abs(potential_value(pot, iv.a)), std::abs(potential_value(pot, iv.b)));
    for (std::size_t i = 0; i < t->grid.size(); ++i)
      if (t->grid[i] >= iv.a && t->grid[i] <= iv.b) k = std::max(k, std::abs(t->values[i]));
    return k;
  }
  const auto& b = std::get<BuiltinPotential>(pot);
  if (harmonic_params(b)) {
    // |V| is maximized at an endpoint; the vertex (if inside) contributes 0.
    double va = std::abs(potential_value(pot, iv.a));
    double vb = std::abs(potential_value(pot, iv.b));
    return std::max(va, vb);
  }
  if (invsq_params(b)) {
    if (iv.a <= 0.0 && iv.b >= 0.0)
      throw std::domain_error("potential_bound: inverse-square form is unbounded across x = 0");
    // V is monotone on either side of 0, so |V| peaks at an endpoint.
    return std::max(std::abs(potential_value(pot, iv.a)), std::abs(potential_value(pot, iv.b)));
  }
  throw std::domain_error("builtin potential: malformed parameter list");
}

std::vector<double> potential_breakpoints(const PotentialSpec& pot, const Interval& iv) {
  std::vector<double> out;
  auto keep = [&](double x) {
    if (x > iv.a && x < iv.b) out.push_back(x);
  };
  if (const auto* p = std::get_if<PiecewiseConstantPotential>(&pot))
    for (double x : p->breakpoints) keep(x);
  if (const auto* t = std::get_if<TabulatedPotential>(&pot))
    for (double x : t->grid) keep(x);  // kinks of the linear interpolant
  return out;
}

InteractionSet InteractionSet::from_sites(std::vector<InteractionSite> s) {
  std::sort(s.begin(), s.end(),
            [](const InteractionSite& l, const InteractionSite& r) { return l.x < r.x; });
  return InteractionSet{std::move(s)};
}

InteractionSet InteractionSet::at_positions(
    const std::vector<std::pair<double, InteractionKind>>& ps) {
  std::vector<InteractionSite> s;
  s.reserve(ps.size());
  for (const auto& [x, k] : ps) s.push_back({0, x, k});
  std::sort(s.begin(), s.end(),
            [](const InteractionSite& l, const InteractionSite& r) { return l.x < r.x; });
  for (std::size_t i = 0; i < s.size(); ++i) s[i].index = static_cast<int>(i);
  return InteractionSet{std::move(s)};
}

const InteractionSite* InteractionSet::find(int index) const {
  for (const auto& s : sites)
    if (s.index == index) return &s;
  return nullptr;
}

double CouplingVector::at(int site_index) const {
  auto it = values.find(site_index);
  if (it == values.end())
    throw std::out_of_range("coupling vector has no entry for site index " +
                            std::to_string(site_index));
  return it->second;
}

CouplingVector CouplingVector::zeros(const InteractionSet& s) {
  CouplingVector c;
  for (const auto& site : s.sites) c.values[site.index] = 0.0;
  return c;
}

CouplingVector CouplingVector::of(const InteractionSet& s, const std::vector<double>& v) {
  if (v.size() != s.sites.size())
    throw std::invalid_argument("coupling list length " + std::to_string(v.size()) +
                                " does not match site count " + std::to_string(s.sites.size()));
  CouplingVector c;
  for (std::size_t i = 0; i < v.size(); ++i) c.values[s.sites[i].index] = v[i];
  return c;
}

ValidationReport validate(const Problem& prob) {
  ValidationReport rep;
  auto bad = [&](std::string field, std::string msg, std::optional<int> site = std::nullopt) {
    rep.violations.push_back({std::move(field), site, std::move(msg)});
  };

  const double a = prob.interval.a, b = prob.interval.b;
  if (!finite(a) || !finite(b))
    bad("interval", "endpoints must be finite, got [" + fmt(a) + ", " + fmt(b) + "]");
  else if (!(a < b))
    bad("interval", "requires a < b, got [" + fmt(a) + ", " + fmt(b) + "]");

  // Potential structure.
  if (const auto* p = std::get_if<PiecewiseConstantPotential>(&prob.potential)) {
    if (p->values.size() != p->breakpoints.size() + 1)
      bad("potential.values", "piecewise-constant needs breakpoints+1 values");
    for (std::size_t i = 1; i < p->breakpoints.size(); ++i)
      if (!(p->breakpoints[i - 1] < p->breakpoints[i]))
        bad("potential.breakpoints", "must be strictly increasing at position " + std::to_string(i));
    for (double v : p->values)
      if (!finite(v)) bad("potential.values", "nonfinite value");
    for (double x : p->breakpoints)
      if (!finite(x)) bad("potential.breakpoints", "nonfinite breakpoint");
  } else if (const auto* t = std::get_if<TabulatedPotential>(&prob.potential)) {
    if (t->grid.size() < 2) bad("potential.grid", "needs at least two grid points");
    if (t->grid.size() != t->values.size())
      bad("potential.values", "grid/value length mismatch");
    for (std::size_t i = 1; i < t->grid.size(); ++i)
      if (!(t->grid[i - 1] < t->grid[i]))
        bad("potential.grid", "must be strictly increasing at position " + std::to_string(i));
    if (!t->grid.empty() && finite(a) && finite(b) && (t->grid.front() > a || t->grid.back() < b))
      bad("potential.grid", "grid [" + fmt(t->grid.front()) + ", " + fmt(t->grid.back()) +
                                "] does not cover the interval");
    for (double v : t->values)
      if (!finite(v)) bad("potential.values", "nonfinite value");
  } else if (const auto* bi = std::get_if<BuiltinPotential>(&prob.potential)) {
    if (bi->params.size() != 2) {
      bad("potential.params", "builtin forms take exactly two parameters");
    } else {
      for (double v : bi->params)
        if (!finite(v)) bad("potential.params", "nonfinite parameter");
      if (bi->form == BuiltinForm::InverseSquareTail && a <= 0.0 && b >= 0.0)
        bad("potential", "inverse-square form is singular at x = 0 inside the interval");
    }
  } else {
    const auto& c = std::get<ConstantPotential>(prob.potential);
    if (!finite(c.value)) bad("potential.value", "nonfinite value");
  }

  // Interaction sites: interior, strictly increasing, distinct indices.
  const auto& sites = prob.interactions.sites;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto& s = sites[i];
    std::string field = "interaction[" + std::to_string(i) + "]";
    if (!finite(s.x))
      bad(field + ".x", "nonfinite position", s.index);
    else if (!(s.x > a && s.x < b))
      bad(field + ".x", "site at " + fmt(s.x) + " must lie strictly inside the interval", s.index);
    if (i > 0 && !(sites[i - 1].x < s.x))
      bad(field + ".x", "site positions must be strictly increasing (duplicate site?)", s.index);
    for (std::size_t j = 0; j < i; ++j)
      if (sites[j].index == s.index)
        bad(field + ".index", "duplicate site index " + std::to_string(s.index), s.index);
  }

  const double pi = 3.14159265358979323846;
  if (!(prob.bc.theta >= 0.0 && prob.bc.theta < pi))
    bad("boundary.theta", "angle must lie in [0, pi), got " + fmt(prob.bc.theta));
  if (!(prob.bc.gamma >= 0.0 && prob.bc.gamma < pi))
    bad("boundary.gamma", "angle must lie in [0, pi), got " + fmt(prob.bc.gamma));

  return rep;
}

ValidationReport validate(const Problem& prob, const CouplingVector& w) {
  ValidationReport rep = validate(prob);
  for (const auto& s : prob.interactions.sites) {
    auto it = w.values.find(s.index);
    if (it == w.values.end())
      rep.violations.push_back({"coupling", s.index,
                                "missing coupling for site index " + std::to_string(s.index)});
    else if (!finite(it->second))
      rep.violations.push_back({"coupling", s.index, "nonfinite coupling"});
  }
  return rep;
}

ValidationReport validate(const Problem& prob, const EnsembleSpec& ens) {
  ValidationReport rep = validate(prob);
  for (const auto& s : prob.interactions.sites) {
    auto it = ens.per_site.find(s.index);
    if (it == ens.per_site.end()) {
      rep.violations.push_back({"ensemble", s.index,
                                "missing distribution for site index " + std::to_string(s.index)});
      continue;
    }
    const Distribution& d = it->second;
    std::string field = "ensemble[" + std::to_string(s.index) + "]";
    switch (d.family) {
      case Distribution::Family::Uniform:
        if (!(d.p1 < d.p2) || !finite(d.p1) || !finite(d.p2))
          rep.violations.push_back({field, s.index, "uniform needs lo < hi (finite)"});
        break;
      case Distribution::Family::Normal:
        if (!(d.p2 > 0.0) || !finite(d.p1) || !finite(d.p2))
          rep.violations.push_back({field, s.index, "normal needs sigma > 0 (finite mu)"});
        break;
      case Distribution::Family::Exponential:
        if (!(d.p1 > 0.0) || !finite(d.p1))
          rep.violations.push_back({field, s.index, "exponential needs rate > 0"});
        break;
    }
  }
  return rep;
}

Tolerances Tolerances::profile(const std::string& name) {
  Tolerances t;  // "default"
  if (name == "default" || name.empty()) return t;
  if (name == "strict") {
    t.ode_rel = 1e-13;
    t.ode_abs = 1e-15;
    t.eigen = 1e-10;
    t.quad = 1e-12;
    return t;
  }
  if (name == "fast") {
    t.ode_rel = 1e-9;
    t.ode_abs = 1e-11;
    t.eigen = 1e-7;
    t.node = 1e-6;
    t.quad = 1e-8;
    return t;
  }
  throw std::invalid_argument("unknown tolerance profile '" + name +
                              "' (expected default|strict|fast)");
}

Tolerances Tolerances::defaults() {
  const char* env = std::getenv("SLPI_TOL_PROFILE");
  return profile(env ? env : "default");
}

}  // namespace slpi
