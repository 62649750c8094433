#include "slpi/shoot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace slpi {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRenormHi = 1e100;
constexpr double kRenormLo = 1e-100;

// Dormand-Prince 5(4) tableau (FSAL: k7 of an accepted step is k1 of the next).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Error weights b - bhat (bhat is the embedded 4th-order solution).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Pair {
  Complex u, du;
};
inline Pair operator+(Pair a, Pair b) { return {a.u + b.u, a.du + b.du}; }
inline Pair operator*(double s, Pair a) { return {s * a.u, s * a.du}; }

// One smooth segment: V restricted to [lo,hi] is continuous up to the ends,
// where the limit toward the interior is taken.
class Segment {
 public:
  Segment(const PotentialSpec& pot, Complex z, double x0, double x1)
      : pot_(pot), z_(z), lo_(std::min(x0, x1)), hi_(std::max(x0, x1)) {}

  double v(double x) const {
    return potential_value(pot_, x, x >= hi_ ? Side::Left : Side::Right);
  }
  Pair f(double x, const Pair& y) const { return {y.du, (v(x) - z_) * y.u}; }

 private:
  const PotentialSpec& pot_;
  Complex z_;
  double lo_, hi_;
};

struct StepperState {
  double x = 0.0;
  Pair y;
  double ls = 0.0;  // cumulative log-scale
  Pair k1;          // FSAL stage
  bool have_k1 = false;
  double h = 0.0;  // carried (signed) step suggestion across segments
};

// Rescale the pair into [1e-100, 1e100]; returns true if rescaled.
bool renormalize(StepperState& s) {
  double m = std::max(std::abs(s.y.u), std::abs(s.y.du));
  if (m == 0.0 || (m <= kRenormHi && m >= kRenormLo)) return false;
  s.y.u /= m;
  s.y.du /= m;
  if (s.have_k1) {  // the RHS is linear in y, so the cached stage scales too
    s.k1.u /= m;
    s.k1.du /= m;
  }
  s.ls += std::log(m);
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// trace evaluation

namespace {

struct Endpoint {
  Complex u, du, ddu;
  double ls;
};

SolutionTrace::Value hermite5(double xl, const Endpoint& L, double xr, const Endpoint& R,
                              double x) {
  const double h = xr - xl;
  const double t = (x - xl) / h;
  // Quintic two-point Hermite basis in t (values/slopes/curvatures at ends).
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double b00 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double b01 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double b02 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  const double b10 = 10 * t3 - 15 * t4 + 6 * t5;
  const double b11 = -4 * t3 + 7 * t4 - 3 * t5;
  const double b12 = 0.5 * (t3 - 2 * t4 + t5);
  const double d00 = -30 * t2 + 60 * t3 - 30 * t4;
  const double d01 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
  const double d02 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
  const double d10 = 30 * t2 - 60 * t3 + 30 * t4;
  const double d11 = -12 * t2 + 28 * t3 - 15 * t4;
  const double d12 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);

  // Bring the right endpoint to the left endpoint's scale.
  const double rescale = std::exp(R.ls - L.ls);
  const Complex ur = R.u * rescale, dur = R.du * rescale, ddur = R.ddu * rescale;

  SolutionTrace::Value out;
  out.u = L.u * b00 + (h * L.du) * b01 + (h * h * L.ddu) * b02 + ur * b10 + (h * dur) * b11 +
          (h * h * ddur) * b12;
  out.du = (L.u * d00 + (h * L.du) * d01 + (h * h * L.ddu) * d02 + ur * d10 + (h * dur) * d11 +
            (h * h * ddur) * d12) /
           h;
  out.log_scale = L.ls;
  return out;
}

}  // namespace

SolutionTrace::Value SolutionTrace::eval(double x, Side side) const {
  if (samples.size() < 2) throw std::domain_error("trace has no interior");
  const double lo = samples.front().x, hi = samples.back().x;
  const double slack = 1e-12 * (hi - lo);
  if (x < lo - slack || x > hi + slack)
    throw std::domain_error("trace evaluated outside its interval");
  x = std::min(std::max(x, lo), hi);

  // Exact sample hit: stored values are the right limits.
  auto it = std::lower_bound(samples.begin(), samples.end(), x,
                             [](const TraceSample& s, double v) { return s.x < v; });
  if (it != samples.end() && it->x == x) {
    if (side == Side::Left) {
      // A jump stored at this abscissa holds the left limits; away from
      // sites the state is continuous and the stored values serve both sides.
      for (const auto& j : jumps)
        if (j.x == x) return {j.u_minus, j.du_minus, j.log_scale};
    }
    return {it->u, it->du, it->log_scale};
  }

  // Interior of a cell (prev, next).
  if (it == samples.begin()) ++it;
  if (it == samples.end()) --it;
  const TraceSample& r = *it;
  const TraceSample& l = *std::prev(it);

  Endpoint L{l.u, l.du, l.ddu_right, l.log_scale};
  Endpoint R{r.u, r.du, r.ddu_left, r.log_scale};
  // If the right cell edge is an interaction site, its sample holds the
  // post-jump state; the cell itself ends at the pre-jump (left-limit) state.
  for (const auto& j : jumps)
    if (j.x == r.x) {
      R = Endpoint{j.u_minus, j.du_minus, j.ddu_minus, j.log_scale};
      break;
    }
  return hermite5(l.x, L, r.x, R, x);
}

namespace {
double log_sup(const std::vector<TraceSample>& samples, int what /*0=u,1=du,2=max*/) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    double m = what == 0 ? std::abs(s.u) : what == 1 ? std::abs(s.du)
                                                     : std::max(std::abs(s.u), std::abs(s.du));
    if (m > 0.0) best = std::max(best, std::log(m) + s.log_scale);
  }
  return best;
}
}  // namespace

double SolutionTrace::log_sup_u() const { return log_sup(samples, 0); }
double SolutionTrace::log_sup_du() const { return log_sup(samples, 1); }
double SolutionTrace::log_sup_norm() const { return log_sup(samples, 2); }

bool SolutionTrace::is_real(double rel_tol) const {
  for (const auto& s : samples) {
    double scale = std::max(std::abs(s.u), std::abs(s.du));
    if (scale == 0.0) continue;
    if (std::abs(s.u.imag()) > rel_tol * scale || std::abs(s.du.imag()) > rel_tol * scale)
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// shooting

namespace {

struct Recorder {
  const PotentialSpec* pot;
  Complex z;
  std::vector<TraceSample>* out;

  void operator()(double x, const Pair& y, double ls) const {
    Complex vl = (potential_value(*pot, x, Side::Left) - z) * y.u;
    Complex vr = (potential_value(*pot, x, Side::Right) - z) * y.u;
    out->push_back({x, y.u, y.du, vl, vr, ls});
  }
};

// Integrate one smooth segment from s.x to xe (either direction). Records
// samples at accepted interior step ends; the caller records segment ends.
void integrate_segment(const Segment& seg, StepperState& s, double xe, double rtol, double atol,
                       double hcap, const Recorder& rec) {
  const double dir = xe > s.x ? 1.0 : -1.0;
  const double span = std::abs(xe - s.x);
  const double hmin = 64 * std::numeric_limits<double>::epsilon() *
                      std::max({1.0, std::abs(s.x), std::abs(xe)});
  if (span <= 0.0) return;

  if (!s.have_k1) {
    s.k1 = seg.f(s.x, s.y);
    s.have_k1 = true;
  }

  // Degenerate sliver between two mandatory boundaries: one forced step.
  bool force = span <= 4 * hmin;

  double h = s.h != 0.0 ? std::abs(s.h) : std::min(span, hcap) * 1e-2;
  h = std::min({h, span, hcap});
  h = std::max(h, hmin);

  long steps = 0;
  while (true) {
    if (++steps > 2000000)
      throw ShootError("step limit exceeded (tolerance too tight?)", s.x);
    bool last = false;
    if (h >= std::abs(xe - s.x) || force) {
      h = std::abs(xe - s.x);
      last = true;
    }
    const double hs = dir * h;

    const Pair& k1 = s.k1;
    Pair y = s.y;
    Pair k2 = seg.f(s.x + c2 * hs, y + hs * (a21 * k1));
    Pair k3 = seg.f(s.x + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
    Pair k4 = seg.f(s.x + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    Pair k5 = seg.f(s.x + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Pair k6 = seg.f(s.x + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Pair y5 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double xnew = last ? xe : s.x + hs;
    Pair k7 = seg.f(xnew, y5);
    Pair ev = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double scu = atol + rtol * std::max(std::abs(y.u), std::abs(y5.u));
    const double scdu = atol + rtol * std::max(std::abs(y.du), std::abs(y5.du));
    const double err = std::max(std::abs(ev.u) / scu, std::abs(ev.du) / scdu);

    if (err <= 1.0 || force) {
      s.x = xnew;
      s.y = y5;
      s.k1 = k7;
      renormalize(s);
      const double grow = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
      h = std::min(h * grow, hcap);
      s.h = dir * h;
      if (last || force) return;
      rec(s.x, s.y, s.ls);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      if (h < hmin)
        throw ShootError("step size underflow: tolerance unreachable", s.x);
    }
  }
}

}  // namespace

SolutionTrace shoot_from(const Problem& prob, const CouplingVector& omega, Complex z,
                         ShootDirection dir, Complex u0, Complex du0, const Tolerances& tol,
                         double max_step) {
  {
    ValidationReport rep = validate(prob, omega);
    if (!rep.ok())
      throw std::invalid_argument("shoot: invalid problem: " + rep.violations.front().field +
                                  ": " + rep.violations.front().message);
  }
  if (std::abs(u0) == 0.0 && std::abs(du0) == 0.0)
    throw std::invalid_argument("shoot: initial data must be nontrivial");

  const double K = potential_bound(prob.potential, prob.interval);
  const double sigma = std::sqrt(1.0 + K + std::abs(z));
  double hcap = max_step > 0.0 ? max_step : 1.2 / sigma;

  // Mandatory boundaries: endpoints, sites, potential breakpoints.
  struct Boundary {
    double x;
    const InteractionSite* site;
  };
  std::vector<Boundary> bounds;
  bounds.push_back({prob.interval.a, nullptr});
  bounds.push_back({prob.interval.b, nullptr});
  for (const auto& s : prob.interactions.sites) bounds.push_back({s.x, &s});
  for (double x : potential_breakpoints(prob.potential, prob.interval))
    bounds.push_back({x, nullptr});
  std::sort(bounds.begin(), bounds.end(),
            [](const Boundary& l, const Boundary& r) { return l.x < r.x; });
  // Deduplicate (a site wins over a coincident breakpoint).
  std::vector<Boundary> uniq;
  for (const auto& b : bounds) {
    if (!uniq.empty() && b.x == uniq.back().x) {
      if (b.site && !uniq.back().site) uniq.back().site = b.site;
      continue;
    }
    uniq.push_back(b);
  }
  if (dir == ShootDirection::FromRight) std::reverse(uniq.begin(), uniq.end());

  SolutionTrace tr;
  tr.z = z;
  tr.direction = dir;
  tr.phase_scale = std::sqrt(1.0 + K + std::abs(z));

  StepperState st;
  st.x = uniq.front().x;
  st.y = {u0, du0};
  renormalize(st);

  Recorder rec{&prob.potential, z, &tr.samples};
  rec(st.x, st.y, st.ls);

  for (std::size_t i = 1; i < uniq.size(); ++i) {
    const Boundary& bd = uniq[i];
    Segment seg(prob.potential, z, st.x, bd.x);
    st.have_k1 = false;  // V may jump across the boundary we start from
    integrate_segment(seg, st, bd.x, tol.ode_rel, tol.ode_abs, hcap, rec);

    if (bd.site) {
      const InteractionSite& site = *bd.site;
      const double w = omega.at(site.index);
      st.have_k1 = false;  // stage cache is invalid across the interface
      Pair minus, plus;
      if (dir == ShootDirection::FromLeft) {
        minus = st.y;
        plus = site.kind == InteractionKind::Delta
                   ? Pair{minus.u, minus.du + w * minus.u}
                   : Pair{minus.u + w * minus.du, minus.du};
        st.y = plus;
      } else {
        plus = st.y;  // arriving from above: these are the right limits
        minus = site.kind == InteractionKind::Delta
                    ? Pair{plus.u, plus.du - w * plus.u}
                    : Pair{plus.u - w * plus.du, plus.du};
        st.y = minus;
      }
      // Jump record and site sample share one scale; the continuing state is
      // renormalized afterwards, which does not touch the stored records.
      JumpRecord jr;
      jr.site_index = site.index;
      jr.x = site.x;
      jr.kind = site.kind;
      jr.coupling = w;
      jr.log_scale = st.ls;
      jr.u_minus = minus.u;
      jr.du_minus = minus.du;
      jr.ddu_minus = (potential_value(prob.potential, site.x, Side::Left) - z) * minus.u;
      jr.u_plus = plus.u;
      jr.du_plus = plus.du;
      tr.jumps.push_back(jr);
      // The stored sample at a site holds the right limits (right continuity).
      Complex vl = (potential_value(prob.potential, site.x, Side::Left) - z) * plus.u;
      Complex vr = (potential_value(prob.potential, site.x, Side::Right) - z) * plus.u;
      tr.samples.push_back({site.x, plus.u, plus.du, vl, vr, st.ls});
      renormalize(st);
    } else {
      rec(st.x, st.y, st.ls);
    }
  }

  if (dir == ShootDirection::FromRight) {
    std::reverse(tr.samples.begin(), tr.samples.end());
    std::reverse(tr.jumps.begin(), tr.jumps.end());
  }
  return tr;
}

SolutionTrace shoot(const Problem& prob, const CouplingVector& omega, Complex z,
                    ShootDirection dir, const Tolerances& tol, double max_step) {
  if (dir == ShootDirection::FromLeft)
    return shoot_from(prob, omega, z, dir, std::sin(prob.bc.theta), -std::cos(prob.bc.theta), tol,
                      max_step);
  return shoot_from(prob, omega, z, dir, -std::sin(prob.bc.gamma), std::cos(prob.bc.gamma), tol,
                    max_step);
}

// ---------------------------------------------------------------------------
// Wronskian / quadrature / identities

Complex wronskian(const SolutionTrace& t1, const SolutionTrace& t2, double x) {
  auto v1 = t1.eval(x), v2 = t2.eval(x);
  return (v1.u * v2.du - v1.du * v2.u) * std::exp(v1.log_scale + v2.log_scale);
}

Complex wronskian_normalized(const SolutionTrace& t1, const SolutionTrace& t2, double x) {
  auto v1 = t1.eval(x), v2 = t2.eval(x);
  double off = v1.log_scale + v2.log_scale - t1.log_sup_norm() - t2.log_sup_norm();
  return (v1.u * v2.du - v1.du * v2.u) * std::exp(off);
}

namespace {

struct ProductIntegrand {
  const SolutionTrace* t1;
  const SolutionTrace* t2;
  double log_off;  // values are multiplied by exp(-log_off) to stay O(1)

  Complex operator()(double x, Side side = Side::Right) const {
    auto v1 = t1->eval(x, side), v2 = t2->eval(x, side);
    return v1.u * v2.u * std::exp(v1.log_scale + v2.log_scale - log_off);
  }
};

Complex simpson_rec(const ProductIntegrand& g, double l, Complex fl, double m, Complex fm,
                    double r, Complex fr, Complex S, double tol, int depth) {
  const double lm = 0.5 * (l + m), rm = 0.5 * (m + r);
  const Complex flm = g(lm), frm = g(rm);
  const Complex Sl = (m - l) / 6.0 * (fl + 4.0 * flm + fm);
  const Complex Sr = (r - m) / 6.0 * (fm + 4.0 * frm + fr);
  const Complex S2 = Sl + Sr;
  if (depth <= 0 || std::abs(S2 - S) <= 15.0 * tol) return S2 + (S2 - S) / 15.0;
  return simpson_rec(g, l, fl, lm, flm, m, fm, Sl, 0.5 * tol, depth - 1) +
         simpson_rec(g, m, fm, rm, frm, r, fr, Sr, 0.5 * tol, depth - 1);
}

}  // namespace

Complex integrate_product(const SolutionTrace& t1, const SolutionTrace& t2, double c, double d,
                          double quad_rel_tol) {
  if (c == d) return 0.0;
  double sign = 1.0;
  if (c > d) {
    std::swap(c, d);
    sign = -1.0;
  }
  const double lo = std::max(t1.a(), t2.a()), hi = std::min(t1.b(), t2.b());
  const double slack = 1e-12 * (hi - lo);
  if (c < lo - slack || d > hi + slack)
    throw std::domain_error("integrate_product: range outside the traces' common interval");
  c = std::max(c, lo);
  d = std::min(d, hi);

  // Union of both sample grids: inside each cell the integrand is one smooth
  // piece of both interpolants (degree <= 10), which Simpson refines fast.
  std::vector<double> xs;
  xs.push_back(c);
  auto add = [&](const std::vector<TraceSample>& ss) {
    for (const auto& s : ss)
      if (s.x > c && s.x < d) xs.push_back(s.x);
  };
  add(t1.samples);
  add(t2.samples);
  xs.push_back(d);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [&](double a, double b) { return b - a <= 1e-14 * (d - c); }),
           xs.end());
  if (xs.back() != d) xs.back() = d;

  double log_off = t1.log_sup_u() + t2.log_sup_u();
  if (!std::isfinite(log_off)) log_off = 0.0;

  ProductIntegrand g{&t1, &t2, log_off};

  // First pass: plain Simpson per cell to fix the refinement scale.
  struct Cell {
    double l, m, r;
    Complex fl, fm, fr, S;
  };
  std::vector<Cell> cells;
  double rough = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    Cell cl;
    cl.l = xs[i - 1];
    cl.r = xs[i];
    cl.m = 0.5 * (cl.l + cl.r);
    cl.fl = g(cl.l, Side::Right);
    cl.fr = g(cl.r, Side::Left);
    cl.fm = g(cl.m);
    cl.S = (cl.r - cl.l) / 6.0 * (cl.fl + 4.0 * cl.fm + cl.fr);
    rough += std::abs(cl.S);
    cells.push_back(cl);
  }
  const double ref = std::max(rough, 1e-30);

  Complex total = 0.0;
  for (const auto& cl : cells) {
    double tol = quad_rel_tol * ref * (cl.r - cl.l) / (d - c);
    total += simpson_rec(g, cl.l, cl.fl, cl.m, cl.fm, cl.r, cl.fr, cl.S, tol, 24);
  }
  return sign * total * std::exp(log_off);
}

double lagrange_identity_residual(const SolutionTrace& u, const SolutionTrace& v, double c,
                                  double d, double quad_rel_tol) {
  const double span = std::min(u.b(), v.b()) - std::max(u.a(), v.a());
  for (const SolutionTrace* t : {&u, &v})
    for (const auto& j : t->jumps)
      if (std::abs(c - j.x) <= 1e-9 * span || std::abs(d - j.x) <= 1e-9 * span)
        throw std::domain_error(
            "lagrange_identity_residual: endpoint coincides with an interaction site");
  const Complex Wd = wronskian(u, v, d), Wc = wronskian(u, v, c);
  const Complex I = integrate_product(u, v, c, d, quad_rel_tol);
  return std::abs((Wd - Wc) - (u.z - v.z) * I);
}

// ---------------------------------------------------------------------------
// Pruefer phase

namespace {

inline double principal(double dphi) {
  while (dphi > kPi) dphi -= 2 * kPi;
  while (dphi < -kPi) dphi += 2 * kPi;
  return dphi;
}

// Lattice points k*pi strictly between phis and phie (phase increases through
// a lattice point exactly at a zero of u, and never decreases through one).
long lattice_between(double phis, double phie) {
  if (phie <= phis) return 0;
  const long first = static_cast<long>(std::ceil(phis / kPi + 1e-9));
  const long last = static_cast<long>(std::floor(phie / kPi - 1e-9));
  return std::max(0L, last - first + 1);
}

}  // namespace

int pruefer_zero_count(const SolutionTrace& tr, double lo, double hi) {
  if (!tr.is_real())
    throw std::domain_error("pruefer_zero_count: trace is not real-valued");
  const double a = tr.a(), b = tr.b();
  const double slack = 1e-12 * (b - a);
  if (lo < a - slack || hi > b + slack || !(lo < hi))
    throw std::domain_error("pruefer_zero_count: window outside the trace");
  lo = std::max(lo, a);
  hi = std::min(hi, b);

  const double sigma = tr.phase_scale;
  const double log_utol = std::log(1e-10) + tr.log_sup_u();
  auto u_is_zero = [&](double uval, double ls) {
    double m = std::abs(uval);
    return m == 0.0 || std::log(m) + ls <= log_utol;
  };
  auto snapped = [&](double phi, double uval, double ls) {
    if (u_is_zero(uval, ls)) return std::round(phi / kPi) * kPi;
    return phi;
  };

  auto jump_at = [&](double x) -> const JumpRecord* {
    for (const auto& j : tr.jumps)
      if (j.x == x) return &j;
    return nullptr;
  };

  auto start = tr.eval(lo, Side::Right);
  double phi = snapped(std::atan2(sigma * start.u.real(), start.du.real()), start.u.real(),
                       start.log_scale);
  double seg_start_phi = phi;
  int count = 0;

  // Walk sample abscissae in (lo, hi]; finish segments at sites and at hi.
  std::size_t i = 0;
  while (i < tr.samples.size() && tr.samples[i].x <= lo) ++i;
  for (;; ++i) {
    double x;
    bool at_hi;
    if (i >= tr.samples.size() || tr.samples[i].x >= hi) {
      x = hi;
      at_hi = true;
    } else {
      x = tr.samples[i].x;
      at_hi = false;
    }
    const JumpRecord* j = at_hi ? nullptr : jump_at(x);

    // Phase of the state arriving from below (left limit at x).
    double uL, duL, lsL;
    if (j) {
      uL = j->u_minus.real();
      duL = j->du_minus.real();
      lsL = j->log_scale;
    } else {
      auto v = tr.eval(x, at_hi ? Side::Left : Side::Right);
      uL = v.u.real();
      duL = v.du.real();
      lsL = v.log_scale;
    }
    double phi_raw = std::atan2(sigma * uL, duL);
    phi += principal(phi_raw - phi);
    if (j || at_hi) phi = snapped(phi, uL, lsL);

    if (j) {
      count += static_cast<int>(lattice_between(seg_start_phi, phi));
      const double uR = j->u_plus.real();
      if (j->kind == InteractionKind::Delta) {
        if (u_is_zero(uL, lsL)) ++count;  // u continuous: a zero sits on the site
      } else {
        const bool zl = u_is_zero(uL, j->log_scale), zr = u_is_zero(uR, j->log_scale);
        if (zl || zr || uL * uR < 0.0) ++count;  // u jumps across (or onto) zero
      }
      // Restart the segment from the post-jump state.
      const double duR = j->du_plus.real();
      phi = snapped(std::atan2(sigma * uR, duR), uR, j->log_scale);
      seg_start_phi = phi;
    } else if (at_hi) {
      count += static_cast<int>(lattice_between(seg_start_phi, phi));
      break;
    }
  }
  return count;
}

double pruefer_phase_at(const SolutionTrace& tr, double x, double sigma) {
  const double a = tr.a(), b = tr.b();
  const double slack = 1e-12 * (b - a);
  if (x < a - slack || x > b + slack)
    throw std::domain_error("pruefer_phase_at: point outside the trace");
  x = std::min(std::max(x, a), b);

  auto phase_of = [&](Complex u, Complex du) {
    return std::atan2(sigma * u.real(), du.real());
  };

  double phi = phase_of(tr.samples.front().u, tr.samples.front().du);
  std::size_t ji = 0;
  for (std::size_t i = 1; i < tr.samples.size() && tr.samples[i].x <= x; ++i) {
    const TraceSample& s = tr.samples[i];
    // Lift up to the left limit first, then across the jump (if any). Both
    // lifts are principal differences: the flow keeps |dphi| < pi/2 per cell
    // by the step cap, and a jump never moves the state by half a turn.
    if (ji < tr.jumps.size() && tr.jumps[ji].x == s.x) {
      const JumpRecord& j = tr.jumps[ji++];
      phi += principal(phase_of(j.u_minus, j.du_minus) - phi);
      phi += principal(phase_of(j.u_plus, j.du_plus) - phi);
    } else {
      phi += principal(phase_of(s.u, s.du) - phi);
    }
  }
  if (x > tr.samples.front().x) {
    auto v = tr.eval(x, Side::Right);
    phi += principal(phase_of(v.u, v.du) - phi);
  }
  return phi;
}

}  // namespace slpi
