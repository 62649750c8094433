#include "slpi/serialize.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace slpi {

namespace {

Json complex_to_json(const Complex& z) {
  return Json{{"re", z.real()}, {"im", z.imag()}};
}

[[noreturn]] void bad_field(const std::string& what) {
  throw std::invalid_argument("json: " + what);
}

}  // namespace

const char* kind_name(InteractionKind k) {
  return k == InteractionKind::Delta ? "delta" : "deltaprime";
}

InteractionKind kind_from_name(const std::string& s) {
  if (s == "delta") return InteractionKind::Delta;
  if (s == "deltaprime" || s == "delta'" || s == "delta_prime")
    return InteractionKind::DeltaPrime;
  bad_field("unknown interaction kind '" + s + "'");
}

Json to_json(const Interval& iv, bool halfline) {
  Json j;
  j["a"] = iv.a;
  if (halfline || std::isinf(iv.b))
    j["b"] = "inf";
  else
    j["b"] = iv.b;
  return j;
}

Interval interval_from_json(const Json& j, bool* halfline) {
  Interval iv{};
  iv.a = j.at("a").get<double>();
  const Json& b = j.at("b");
  bool hl = false;
  if (b.is_string()) {
    std::string s = b.get<std::string>();
    if (s == "inf" || s == "+inf")
      hl = true;
    else
      bad_field("interval.b: expected number or \"inf\", got '" + s + "'");
    iv.b = std::numeric_limits<double>::infinity();
  } else {
    iv.b = b.get<double>();
    hl = std::isinf(iv.b);
  }
  if (halfline) *halfline = hl;
  return iv;
}

Json to_json(const PotentialSpec& pot) {
  Json j;
  if (const auto* c = std::get_if<ConstantPotential>(&pot)) {
    j["type"] = "constant";
    j["value"] = c->value;
  } else if (const auto* p = std::get_if<PiecewiseConstantPotential>(&pot)) {
    j["type"] = "piecewise";
    j["breakpoints"] = p->breakpoints;
    j["values"] = p->values;
  } else if (const auto* t = std::get_if<TabulatedPotential>(&pot)) {
    j["type"] = "tabulated";
    j["grid"] = t->grid;
    j["values"] = t->values;
  } else {
    const auto& b = std::get<BuiltinPotential>(pot);
    j["type"] = "builtin";
    j["name"] = b.form == BuiltinForm::Harmonic ? "harmonic" : "inverse-square-tail";
    j["params"] = b.params;
  }
  return j;
}

PotentialSpec potential_from_json(const Json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "constant") {
    return ConstantPotential{j.at("value").get<double>()};
  }
  if (type == "piecewise" || type == "piecewise_constant") {
    PiecewiseConstantPotential p;
    p.breakpoints = j.at("breakpoints").get<std::vector<double>>();
    p.values = j.at("values").get<std::vector<double>>();
    return p;
  }
  if (type == "tabulated") {
    TabulatedPotential t;
    t.grid = j.at("grid").get<std::vector<double>>();
    t.values = j.at("values").get<std::vector<double>>();
    return t;
  }
  if (type == "builtin") {
    BuiltinPotential b;
    std::string name = j.at("name").get<std::string>();
    if (name == "harmonic")
      b.form = BuiltinForm::Harmonic;
    else if (name == "inverse-square-tail" || name == "inverse_square_tail")
      b.form = BuiltinForm::InverseSquareTail;
    else
      bad_field("unknown builtin potential '" + name + "'");
    b.params = j.at("params").get<std::vector<double>>();
    return b;
  }
  bad_field("unknown potential type '" + type + "'");
}

Json to_json(const InteractionSite& s) {
  return Json{{"index", s.index}, {"x", s.x}, {"kind", kind_name(s.kind)}};
}

Json to_json(const InteractionSet& set) {
  Json arr = Json::array();
  for (const auto& s : set.sites) arr.push_back(to_json(s));
  return arr;
}

InteractionSet interactions_from_json(const Json& j) {
  std::vector<InteractionSite> sites;
  int next_index = 0;
  for (const auto& e : j) {
    InteractionSite s{};
    s.x = e.at("x").get<double>();
    s.kind = kind_from_name(e.at("kind").get<std::string>());
    s.index = e.contains("index") ? e.at("index").get<int>() : next_index;
    next_index = s.index + 1;
    sites.push_back(s);
  }
  return InteractionSet::from_sites(std::move(sites));
}

Json to_json(const BoundaryCondition& bc) {
  return Json{{"theta", bc.theta}, {"gamma", bc.gamma}};
}

BoundaryCondition boundary_from_json(const Json& j) {
  BoundaryCondition bc{};
  bc.theta = j.value("theta", 0.0);
  bc.gamma = j.value("gamma", 0.0);
  return bc;
}

Json to_json(const CouplingVector& w) {
  Json j = Json::object();
  for (const auto& [idx, v] : w.values) j[std::to_string(idx)] = v;
  return j;
}

CouplingVector coupling_from_json(const Json& j) {
  CouplingVector w;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::size_t pos = 0;
    int idx = std::stoi(it.key(), &pos);
    if (pos != it.key().size()) bad_field("coupling: bad site index '" + it.key() + "'");
    w.values[idx] = it.value().get<double>();
  }
  return w;
}

Json to_json(const Distribution& d) {
  Json j;
  switch (d.family) {
    case Distribution::Family::Uniform:
      j["dist"] = "uniform";
      j["lo"] = d.p1;
      j["hi"] = d.p2;
      break;
    case Distribution::Family::Normal:
      j["dist"] = "normal";
      j["mu"] = d.p1;
      j["sigma"] = d.p2;
      break;
    case Distribution::Family::Exponential:
      j["dist"] = "exponential";
      j["rate"] = d.p1;
      break;
  }
  return j;
}

Distribution distribution_from_json(const Json& j) {
  std::string name = j.at("dist").get<std::string>();
  if (name == "uniform")
    return Distribution::uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
  if (name == "normal")
    return Distribution::normal(j.at("mu").get<double>(), j.at("sigma").get<double>());
  if (name == "exponential")
    return Distribution::exponential(j.at("rate").get<double>());
  bad_field("unknown distribution '" + name + "'");
}

Json to_json(const EnsembleSpec& e) {
  Json per = Json::object();
  for (const auto& [idx, d] : e.per_site) per[std::to_string(idx)] = to_json(d);
  return Json{{"seed", e.master_seed}, {"per_site", per}};
}

EnsembleSpec ensemble_from_json(const Json& j) {
  EnsembleSpec e;
  e.master_seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("per_site")) {
    const Json& per = j.at("per_site");
    for (auto it = per.begin(); it != per.end(); ++it)
      e.per_site[std::stoi(it.key())] = distribution_from_json(it.value());
  }
  return e;
}

Json to_json(const Tolerances& t) {
  return Json{{"ode_rel", t.ode_rel}, {"ode_abs", t.ode_abs}, {"eigen", t.eigen},
              {"node", t.node},       {"pole", t.pole},       {"quad", t.quad},
              {"band", t.band}};
}

Tolerances tolerances_from_json(const Json& j) {
  Tolerances t = Tolerances::defaults();
  t.ode_rel = j.value("ode_rel", t.ode_rel);
  t.ode_abs = j.value("ode_abs", t.ode_abs);
  t.eigen = j.value("eigen", t.eigen);
  t.node = j.value("node", t.node);
  t.pole = j.value("pole", t.pole);
  t.quad = j.value("quad", t.quad);
  t.band = j.value("band", t.band);
  return t;
}

Json to_json(const ValidationReport& r) {
  Json arr = Json::array();
  for (const auto& v : r.violations) {
    Json e;
    e["field"] = v.field;
    if (v.site_index)
      e["site_index"] = *v.site_index;
    else
      e["site_index"] = nullptr;
    e["message"] = v.message;
    arr.push_back(std::move(e));
  }
  return Json{{"ok", r.ok()}, {"violations", arr}};
}

Json to_json(const SolutionTrace& tr) {
  Json j;
  j["z"] = complex_to_json(tr.z);
  j["direction"] = tr.direction == ShootDirection::FromLeft ? "left" : "right";
  j["phase_scale"] = tr.phase_scale;
  Json rows = Json::array();
  for (const auto& s : tr.samples) {
    rows.push_back(Json::array({s.x, s.u.real(), s.u.imag(), s.du.real(),
                                s.du.imag(), s.log_scale}));
  }
  j["samples"] = Json{
      {"columns", Json::array({"x", "u_re", "u_im", "du_re", "du_im", "log_scale"})},
      {"rows", rows}};
  Json jumps = Json::array();
  for (const auto& r : tr.jumps) {
    Json e;
    e["site_index"] = r.site_index;
    e["x"] = r.x;
    e["kind"] = kind_name(r.kind);
    e["coupling"] = r.coupling;
    e["u_minus"] = complex_to_json(r.u_minus);
    e["du_minus"] = complex_to_json(r.du_minus);
    e["u_plus"] = complex_to_json(r.u_plus);
    e["du_plus"] = complex_to_json(r.du_plus);
    e["log_scale"] = r.log_scale;
    jumps.push_back(std::move(e));
  }
  j["jumps"] = jumps;
  return j;
}

Json to_json(const GreenValue& g) {
  Json j;
  j["z"] = complex_to_json(g.z);
  j["x"] = g.x;
  if (g.pole)
    j["value"] = nullptr;
  else
    j["value"] = complex_to_json(g.value);
  j["pole"] = g.pole;
  j["scale_log"] = g.scale_log;
  return j;
}

Json to_json(const MatchingValue& m) {
  return Json{{"E", m.E}, {"D", m.D}, {"scale_log", m.scale_log}};
}

Json to_json(const SpectralReport& r) {
  Json eigs = Json::array();
  for (const auto& e : r.eigenvalues) {
    eigs.push_back(Json{{"E", e.E}, {"residual", e.residual},
                        {"zero_count", e.zero_count}});
  }
  Json j;
  j["window"] = Json::array({r.window_lo, r.window_hi});
  j["eigenvalues"] = eigs;
  if (r.continuation)
    j["continuation"] = *r.continuation;
  else
    j["continuation"] = nullptr;
  return j;
}

Json to_json(const DichotomyVerdict& v) {
  Json j;
  j["tag"] = v.tag == DichotomyTag::AllOmega ? "all_omega" : "measure_zero";
  j["E"] = v.E;
  if (v.refined_E)
    j["refined_E"] = *v.refined_E;
  else
    j["refined_E"] = nullptr;
  j["base_residual"] = v.base_residual;
  Json nodes = Json::array();
  for (const auto& n : v.node_residuals) {
    nodes.push_back(Json{{"site_index", n.site_index}, {"x", n.x},
                         {"kind", kind_name(n.kind)}, {"residual", n.residual}});
  }
  j["node_residuals"] = nodes;
  if (v.offending_site)
    j["offending_site"] = *v.offending_site;
  else
    j["offending_site"] = nullptr;
  j["reason"] = v.reason;
  return j;
}

Json to_json(const OscillationCertificate& c) {
  Json j;
  switch (c.tag) {
    case OscillationCertificate::Tag::LyapunovDisconjugate:
      j["tag"] = "lyapunov_disconjugate";
      break;
    case OscillationCertificate::Tag::ZeroCountBound:
      j["tag"] = "zero_count_bound";
      break;
    case OscillationCertificate::Tag::Nonoscillatory:
      j["tag"] = "nonoscillatory";
      break;
    case OscillationCertificate::Tag::Inconclusive:
      j["tag"] = "inconclusive";
      break;
  }
  j["E"] = c.E;
  auto put = [&j](const char* key, const auto& opt) {
    if (opt) j[key] = *opt;
  };
  put("window", c.window);
  put("min_gap", c.min_gap);
  put("bound", c.bound);
  put("site_count", c.site_count);
  put("method", c.method);
  put("sup_value", c.sup_value);
  put("x_max", c.x_max);
  put("tail_form", c.tail_form);
  put("reason", c.reason);
  return j;
}

Json to_json(const ConsistencyReport& r) {
  return Json{{"consistent", r.consistent}, {"verdict", to_json(r.verdict)},
              {"detail", r.detail}};
}

Json to_json(const MonteCarloResult& r) {
  Json hist = Json::array();
  for (const auto& b : r.residual_histogram) {
    hist.push_back(Json{{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}});
  }
  Json j;
  j["E"] = r.E;
  j["n_samples"] = r.n_samples;
  j["n_failed"] = r.n_failed;
  j["hit_fraction"] = r.hit_fraction;
  j["seed"] = r.seed;
  j["eigen_tol"] = r.eigen_tol;
  j["residual_histogram"] = hist;
  return j;
}

Json to_json(const ScanReport& r) {
  Json rows = Json::array();
  for (const auto& res : r.results) rows.push_back(to_json(res));
  Json finds = Json::array();
  for (const auto& f : r.findings) {
    finds.push_back(Json{{"grid_index", f.grid_index}, {"E", f.E},
                         {"hit_fraction", f.hit_fraction}, {"message", f.message}});
  }
  return Json{{"results", rows}, {"findings", finds}};
}

}  // namespace slpi
