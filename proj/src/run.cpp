#include "slpi/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "slpi/ensemble.hpp"
#include "slpi/green.hpp"
#include "slpi/oscillation.hpp"
#include "slpi/serialize.hpp"
#include "slpi/shoot.hpp"
#include "slpi/spectra.hpp"
#include "slpi/version.hpp"

namespace slpi {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV cell for a JSON scalar: numbers via %.17g, null -> empty, bool -> 0/1.
std::string cell(const Json& v) {
  if (v.is_null()) return {};
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return fmt17(v.get<double>());
  return v.get<std::string>();
}

void row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

CouplingVector effective_coupling(const RunConfig& rc) {
  return rc.has_coupling ? rc.coupling : CouplingVector::zeros(rc.problem.interactions);
}

void append(ValidationReport& into, const ValidationReport& more) {
  into.violations.insert(into.violations.end(), more.violations.begin(),
                         more.violations.end());
}

ValidationReport full_validation(const RunConfig& rc) {
  ValidationReport vr = validate(rc.problem);
  if (rc.has_coupling) append(vr, validate(rc.problem, rc.coupling));
  if (rc.has_ensemble) append(vr, validate(rc.problem, rc.ensemble));
  return vr;
}

std::vector<Complex> z_grid_from_params(const RunConfig& rc) {
  double re_lo = rc.param_number("re_lo");
  double re_hi = rc.param_number("re_hi", re_lo);
  long re_n = rc.param_integer("re_n", 1);
  double im_lo = rc.param_number("im_lo", 0.0);
  double im_hi = rc.param_number("im_hi", im_lo);
  long im_n = rc.param_integer("im_n", 1);
  if (re_n < 1 || im_n < 1)
    throw ConfigError("task.re_n/im_n: grid sizes must be positive");
  std::vector<Complex> zs;
  zs.reserve(static_cast<std::size_t>(re_n * im_n));
  for (long j = 0; j < im_n; ++j) {
    double im = im_n > 1 ? im_lo + (im_hi - im_lo) * double(j) / double(im_n - 1) : im_lo;
    for (long i = 0; i < re_n; ++i) {
      double re = re_n > 1 ? re_lo + (re_hi - re_lo) * double(i) / double(re_n - 1) : re_lo;
      zs.emplace_back(re, im);
    }
  }
  return zs;
}

// ---------------------------------------------------------------- executors

Json task_validate(const RunConfig& rc, int* exit_hint) {
  ValidationReport vr = full_validation(rc);
  *exit_hint = vr.ok() ? 0 : 2;
  return to_json(vr);
}

Json task_shoot(const RunConfig& rc) {
  Complex z(rc.param_number("z_re", 0.0), rc.param_number("z_im", 0.0));
  std::string d = rc.param_string("direction", "left");
  ShootDirection dir;
  if (d == "left")
    dir = ShootDirection::FromLeft;
  else if (d == "right")
    dir = ShootDirection::FromRight;
  else
    throw ConfigError("task.direction: expected 'left' or 'right', got '" + d + "'");
  SolutionTrace tr = shoot(rc.problem, effective_coupling(rc), z, dir, rc.tolerances);
  return to_json(tr);
}

Json task_green_sweep(const RunConfig& rc) {
  double x = rc.param_number("x");
  std::string f = rc.param_string("form", "auto");
  GreenForm form;
  if (f == "auto")
    form = GreenForm::Auto;
  else if (f == "value")
    form = GreenForm::Value;
  else if (f == "derivative")
    form = GreenForm::Derivative;
  else
    throw ConfigError("task.form: expected auto|value|derivative, got '" + f + "'");
  std::vector<Complex> zs = z_grid_from_params(rc);
  CouplingVector w = effective_coupling(rc);
  Json values = Json::array();
  for (Complex z : zs)
    values.push_back(to_json(green_diag(rc.problem, w, z, x, form, rc.tolerances)));
  Json out;
  out["x"] = x;
  out["form"] = f;
  out["values"] = values;
  return out;
}

Json task_krein_check(const RunConfig& rc) {
  const auto& sites = rc.problem.interactions.sites;
  if (sites.size() != 1)
    throw ConfigError("interaction: the coupling-relation check needs exactly one site");
  long site = rc.param_integer("site", sites[0].index);
  if (site != sites[0].index)
    throw ConfigError("task.site: no interaction with index " + std::to_string(site));
  double alpha = rc.param_number("alpha");
  double beta = rc.param_number("beta");
  std::vector<Complex> zs = z_grid_from_params(rc);
  Json values = Json::array();
  double max_res = 0.0;
  std::uint64_t testable = 0;
  for (Complex z : zs) {
    Json e;
    e["z"] = Json{{"re", z.real()}, {"im", z.imag()}};
    try {
      double r = krein_relation_residual(rc.problem, static_cast<int>(site), z, alpha,
                                         beta, rc.tolerances);
      e["residual"] = r;
      e["testable"] = true;
      max_res = std::max(max_res, r);
      ++testable;
    } catch (const std::runtime_error&) {
      e["residual"] = nullptr;
      e["testable"] = false;
    }
    values.push_back(std::move(e));
  }
  Json out;
  out["site"] = site;
  out["alpha"] = alpha;
  out["beta"] = beta;
  out["kind"] = kind_name(sites[0].kind);
  out["n_testable"] = testable;
  out["max_residual"] = testable ? Json(max_res) : Json(nullptr);
  out["values"] = values;
  return out;
}

Json task_spectrum(const RunConfig& rc) {
  double e_lo = rc.param_number("e_lo");
  double e_hi = rc.param_number("e_hi");
  long max_count = rc.param_integer("max_count", 64);
  if (max_count < 1) throw ConfigError("task.max_count: must be positive");
  SpectralReport rep = find_eigenvalues(rc.problem, effective_coupling(rc), e_lo, e_hi,
                                        static_cast<std::size_t>(max_count),
                                        rc.tolerances);
  return to_json(rep);
}

Json task_classify(const RunConfig& rc) {
  double e = rc.param_number("e");
  double node_tol = rc.param_number("node_tol", rc.tolerances.node);
  DichotomyVerdict v = classify_dichotomy(rc.problem, e, node_tol, rc.tolerances);
  return to_json(v);
}

Json task_certify(const RunConfig& rc) {
  double e = rc.param_number("e");
  std::vector<OscillationCertificate> certs;
  certs.push_back(lyapunov_certificate(rc.problem, e));
  certs.push_back(measure_zero_by_interaction_count(rc.problem, e));
  if (rc.has_param("x_max")) {
    double x_max = rc.param_number("x_max");
    long grid = rc.param_integer("tail_grid", 256);
    certs.push_back(hille_nonoscillatory(rc.problem.potential, e, rc.problem.interval.a,
                                         x_max, static_cast<int>(grid)));
  }
  Json jc = Json::array();
  for (const auto& c : certs) jc.push_back(to_json(c));
  Json checks = Json::array();
  double node_tol = rc.param_number("node_tol", rc.tolerances.node);
  for (const auto& c : certs) {
    if (!c.conclusive()) continue;
    Json e2;
    e2["certificate"] = to_json(c)["tag"];
    try {
      ConsistencyReport cr = cross_check_certificate(rc.problem, e, c, node_tol,
                                                     rc.tolerances);
      e2["consistent"] = cr.consistent;
      e2["detail"] = cr.detail;
      e2["verdict"] = to_json(cr.verdict);
    } catch (const std::exception& ex) {
      e2["error"] = ex.what();
    }
    checks.push_back(std::move(e2));
  }
  Json out;
  out["E"] = e;
  out["certificates"] = jc;
  out["cross_checks"] = checks;
  return out;
}

Json task_montecarlo(const RunConfig& rc, int threads) {
  if (!rc.has_ensemble)
    throw ConfigError("ensemble: section required for the montecarlo task");
  double e = rc.param_number("e");
  long samples = rc.param_integer("samples", 200);
  if (samples < 1) throw ConfigError("task.samples: must be positive");
  double eigen_tol = rc.param_number("eigen_tol", rc.tolerances.eigen);
  MonteCarloResult res = estimate_eigenvalue_probability(
      rc.problem, rc.ensemble, e, static_cast<std::uint64_t>(samples), eigen_tol,
      rc.tolerances, threads);
  return to_json(res);
}

Json task_scan(const RunConfig& rc, int threads) {
  if (!rc.has_ensemble)
    throw ConfigError("ensemble: section required for the scan task");
  std::vector<double> grid = rc.param_list("e_grid");
  if (grid.empty()) throw ConfigError("task.e_grid: empty grid");
  long samples = rc.param_integer("samples", 200);
  if (samples < 1) throw ConfigError("task.samples: must be positive");
  double eigen_tol = rc.param_number("eigen_tol", rc.tolerances.eigen);
  double band = rc.param_number("band", rc.tolerances.band);
  ScanReport rep = dichotomy_scan(rc.problem, rc.ensemble, grid,
                                  static_cast<std::uint64_t>(samples), eigen_tol, band,
                                  rc.tolerances, threads);
  return to_json(rep);
}

// --- truncate: run an inner task on a ladder of finite right endpoints ----

std::vector<double> signature_of(const std::string& inner, const Json& result) {
  std::vector<double> sig;
  if (inner == "spectrum") {
    for (const auto& e : result.at("eigenvalues")) sig.push_back(e.at("E").get<double>());
  } else if (inner == "montecarlo") {
    sig.push_back(result.at("hit_fraction").get<double>());
  } else if (inner == "classify") {
    sig.push_back(result.at("tag").get<std::string>() == "all_omega" ? 1.0 : 0.0);
  } else if (inner == "certify") {
    for (const auto& c : result.at("certificates")) {
      std::string tag = c.at("tag").get<std::string>();
      sig.push_back(tag == "inconclusive" ? 0.0 : 1.0);
      if (c.contains("sup_value")) sig.push_back(c.at("sup_value").get<double>());
    }
  }
  return sig;
}

Json task_truncate(const RunConfig& rc, int threads) {
  if (!rc.halfline)
    throw ConfigError("interval.b: the truncate task needs a half-line interval (b = inf)");
  std::string inner = rc.param_string("inner", "");
  if (inner != "spectrum" && inner != "certify" && inner != "montecarlo" &&
      inner != "classify")
    throw ConfigError("task.inner: expected spectrum|certify|montecarlo|classify, got '" +
                      inner + "'");
  std::vector<double> ladder = rc.param_list("x_max");
  if (ladder.size() < 2)
    throw ConfigError("task.x_max: need at least two truncation lengths");
  if (!std::is_sorted(ladder.begin(), ladder.end()) ||
      std::adjacent_find(ladder.begin(), ladder.end()) != ladder.end())
    throw ConfigError("task.x_max: lengths must be strictly increasing");

  Json truncations = Json::array();
  std::vector<std::vector<double>> sigs;
  for (double x_max : ladder) {
    RunConfig sub = rc;
    sub.halfline = false;
    sub.problem.interval.b = x_max;
    sub.task = inner;
    if (inner == "certify") sub.task_params["x_max"] = x_max;
    ValidationReport vr = full_validation(sub);
    if (!vr.ok())
      throw ConfigError("truncation at x_max=" + fmt17(x_max) + ": " +
                        vr.violations.front().field + ": " +
                        vr.violations.front().message);
    Json result;
    if (inner == "spectrum")
      result = task_spectrum(sub);
    else if (inner == "certify")
      result = task_certify(sub);
    else if (inner == "montecarlo")
      result = task_montecarlo(sub, threads);
    else
      result = task_classify(sub);
    sigs.push_back(signature_of(inner, result));
    truncations.push_back(Json{{"x_max", x_max}, {"result", std::move(result)}});
  }

  Json diffs = Json::array();
  Json findings = Json::array();
  double prev_diff = -1.0;  // <0: no finite previous difference
  for (std::size_t k = 1; k < ladder.size(); ++k) {
    Json d;
    d["from"] = ladder[k - 1];
    d["to"] = ladder[k];
    if (sigs[k].size() != sigs[k - 1].size()) {
      d["difference"] = nullptr;
      findings.push_back(Json{
          {"x_max", ladder[k]},
          {"message", "result shape changed between x_max=" + fmt17(ladder[k - 1]) +
                          " and x_max=" + fmt17(ladder[k])}});
      prev_diff = -1.0;
    } else {
      double m = 0.0;
      for (std::size_t i = 0; i < sigs[k].size(); ++i)
        m = std::max(m, std::abs(sigs[k][i] - sigs[k - 1][i]));
      d["difference"] = m;
      if (prev_diff >= 0.0 && m > 10.0 * std::max(prev_diff, 1e-12)) {
        findings.push_back(Json{
            {"x_max", ladder[k]},
            {"message", "successive differences grew from " + fmt17(prev_diff) +
                            " to " + fmt17(m) + "; truncation is not settling"}});
      }
      prev_diff = m;
    }
    diffs.push_back(std::move(d));
  }
  Json out;
  out["inner"] = inner;
  out["x_max"] = ladder;
  out["truncations"] = truncations;
  out["differences"] = diffs;
  out["findings"] = findings;
  return out;
}

Json execute(const RunConfig& rc, int threads, int* exit_hint) {
  if (rc.task == "validate") return task_validate(rc, exit_hint);
  if (rc.task == "shoot") return task_shoot(rc);
  if (rc.task == "green-sweep") return task_green_sweep(rc);
  if (rc.task == "krein-check") return task_krein_check(rc);
  if (rc.task == "spectrum") return task_spectrum(rc);
  if (rc.task == "classify") return task_classify(rc);
  if (rc.task == "certify") return task_certify(rc);
  if (rc.task == "montecarlo") return task_montecarlo(rc, threads);
  if (rc.task == "scan") return task_scan(rc, threads);
  if (rc.task == "truncate") return task_truncate(rc, threads);
  throw ConfigError("task.name: unknown task '" + rc.task + "'");
}

// -------------------------------------------------------------- CSV output

void csv_trace(std::ostream& os, const Json& r) {
  row(os, {"x", "u_re", "u_im", "du_re", "du_im", "log_scale"});
  for (const auto& s : r.at("samples").at("rows")) {
    std::vector<std::string> cs;
    for (const auto& v : s) cs.push_back(cell(v));
    row(os, cs);
  }
  os << "# jumps\n";
  row(os, {"site_index", "x", "kind", "coupling", "u_minus_re", "u_minus_im",
           "du_minus_re", "du_minus_im", "u_plus_re", "u_plus_im", "du_plus_re",
           "du_plus_im", "log_scale"});
  for (const auto& j : r.at("jumps")) {
    row(os, {cell(j.at("site_index")), cell(j.at("x")), cell(j.at("kind")),
             cell(j.at("coupling")), cell(j.at("u_minus").at("re")),
             cell(j.at("u_minus").at("im")), cell(j.at("du_minus").at("re")),
             cell(j.at("du_minus").at("im")), cell(j.at("u_plus").at("re")),
             cell(j.at("u_plus").at("im")), cell(j.at("du_plus").at("re")),
             cell(j.at("du_plus").at("im")), cell(j.at("log_scale"))});
  }
}

void csv_green(std::ostream& os, const Json& r) {
  os << "# x: " << cell(r.at("x")) << "\n";
  row(os, {"z_re", "z_im", "g_re", "g_im", "pole", "scale_log"});
  for (const auto& g : r.at("values")) {
    const Json& v = g.at("value");
    row(os, {cell(g.at("z").at("re")), cell(g.at("z").at("im")),
             v.is_null() ? "" : cell(v.at("re")), v.is_null() ? "" : cell(v.at("im")),
             cell(g.at("pole")), cell(g.at("scale_log"))});
  }
}

void csv_krein(std::ostream& os, const Json& r) {
  os << "# site: " << cell(r.at("site")) << " kind: " << cell(r.at("kind"))
     << " alpha: " << cell(r.at("alpha")) << " beta: " << cell(r.at("beta")) << "\n";
  row(os, {"z_re", "z_im", "residual", "testable"});
  for (const auto& e : r.at("values")) {
    row(os, {cell(e.at("z").at("re")), cell(e.at("z").at("im")),
             cell(e.at("residual")), cell(e.at("testable"))});
  }
}

void csv_spectrum(std::ostream& os, const Json& r) {
  os << "# window: " << cell(r.at("window")[0]) << " " << cell(r.at("window")[1])
     << "\n";
  row(os, {"E", "residual", "zero_count"});
  for (const auto& e : r.at("eigenvalues"))
    row(os, {cell(e.at("E")), cell(e.at("residual")), cell(e.at("zero_count"))});
  os << "# continuation: " << (r.at("continuation").is_null() ? std::string("none")
                                                              : cell(r.at("continuation")))
     << "\n";
}

void csv_classify(std::ostream& os, const Json& r) {
  row(os, {"tag", "E", "refined_E", "base_residual", "offending_site"});
  row(os, {cell(r.at("tag")), cell(r.at("E")), cell(r.at("refined_E")),
           cell(r.at("base_residual")), cell(r.at("offending_site"))});
  os << "# node residuals\n";
  row(os, {"site_index", "x", "kind", "residual"});
  for (const auto& n : r.at("node_residuals"))
    row(os, {cell(n.at("site_index")), cell(n.at("x")), cell(n.at("kind")),
             cell(n.at("residual"))});
}

void csv_certify(std::ostream& os, const Json& r) {
  row(os, {"tag", "E", "window", "min_gap", "bound", "site_count", "sup_value",
           "x_max"});
  for (const auto& c : r.at("certificates")) {
    auto opt = [&c](const char* k) {
      return c.contains(k) ? cell(c.at(k)) : std::string{};
    };
    row(os, {cell(c.at("tag")), cell(c.at("E")), opt("window"), opt("min_gap"),
             opt("bound"), opt("site_count"), opt("sup_value"), opt("x_max")});
  }
  os << "# cross checks\n";
  row(os, {"certificate", "consistent"});
  for (const auto& k : r.at("cross_checks")) {
    row(os, {cell(k.at("certificate")),
             k.contains("consistent") ? cell(k.at("consistent")) : std::string{}});
  }
}

void csv_montecarlo(std::ostream& os, const Json& r) {
  row(os, {"E", "n_samples", "n_failed", "hit_fraction", "seed", "eigen_tol"});
  row(os, {cell(r.at("E")), cell(r.at("n_samples")), cell(r.at("n_failed")),
           cell(r.at("hit_fraction")), cell(r.at("seed")), cell(r.at("eigen_tol"))});
  os << "# residual histogram\n";
  row(os, {"bin_lo", "bin_hi", "count"});
  for (const auto& b : r.at("residual_histogram"))
    row(os, {cell(b.at("lo")), cell(b.at("hi")), cell(b.at("count"))});
}

void csv_scan(std::ostream& os, const Json& r) {
  row(os, {"grid_index", "E", "n_samples", "n_failed", "hit_fraction"});
  std::size_t i = 0;
  for (const auto& m : r.at("results")) {
    row(os, {std::to_string(i++), cell(m.at("E")), cell(m.at("n_samples")),
             cell(m.at("n_failed")), cell(m.at("hit_fraction"))});
  }
  os << "# findings\n";
  row(os, {"grid_index", "E", "hit_fraction", "message"});
  for (const auto& f : r.at("findings")) {
    row(os, {cell(f.at("grid_index")), cell(f.at("E")), cell(f.at("hit_fraction")),
             "\"" + f.at("message").get<std::string>() + "\""});
  }
}

void csv_validate(std::ostream& os, const Json& r) {
  os << "# ok: " << (r.at("ok").get<bool>() ? "true" : "false") << "\n";
  row(os, {"field", "site_index", "message"});
  for (const auto& v : r.at("violations")) {
    row(os, {cell(v.at("field")), cell(v.at("site_index")),
             "\"" + v.at("message").get<std::string>() + "\""});
  }
}

void csv_truncate(std::ostream& os, const Json& r) {
  os << "# inner: " << cell(r.at("inner")) << "\n";
  row(os, {"x_max", "difference_from_previous"});
  const Json& ladder = r.at("x_max");
  const Json& diffs = r.at("differences");
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    std::string d;
    if (k > 0) d = cell(diffs[k - 1].at("difference"));
    row(os, {cell(ladder[k]), d});
  }
  os << "# findings\n";
  for (const auto& f : r.at("findings"))
    os << "# " << f.at("message").get<std::string>() << "\n";
}

void write_csv(std::ostream& os, const Json& report) {
  os << "# slpi " << report.at("slpi_version").get<std::string>() << "\n";
  os << "# task: " << report.at("task").get<std::string>() << "\n";
  const Json& r = report.at("result");
  const std::string task = report.at("task").get<std::string>();
  if (task == "validate")
    csv_validate(os, r);
  else if (task == "shoot")
    csv_trace(os, r);
  else if (task == "green-sweep")
    csv_green(os, r);
  else if (task == "krein-check")
    csv_krein(os, r);
  else if (task == "spectrum")
    csv_spectrum(os, r);
  else if (task == "classify")
    csv_classify(os, r);
  else if (task == "certify")
    csv_certify(os, r);
  else if (task == "montecarlo")
    csv_montecarlo(os, r);
  else if (task == "scan")
    csv_scan(os, r);
  else
    csv_truncate(os, r);
}

}  // namespace

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names = {
      "validate", "shoot",   "green-sweep", "krein-check", "spectrum",
      "classify", "certify", "montecarlo",  "scan",        "truncate"};
  return names;
}

RunOutcome run_config(RunConfig rc, const RunOverrides& ov) {
  RunOutcome oc;
  auto t0 = std::chrono::steady_clock::now();
  auto stamp = [&] {
    oc.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  try {
    if (ov.seed) rc.ensemble.master_seed = *ov.seed;
    if (ov.out) rc.output.path = *ov.out;
    if (ov.format) {
      if (*ov.format != "json" && *ov.format != "csv")
        throw ConfigError("--format: expected 'json' or 'csv'");
      rc.output.format = *ov.format;
    }
    int threads = std::max(1, ov.threads);
    if (rc.task.empty()) throw ConfigError("task.name: no task given");
    const auto& names = task_names();
    if (std::find(names.begin(), names.end(), rc.task) == names.end())
      throw ConfigError("task.name: unknown task '" + rc.task + "'");
    if (rc.halfline && rc.task != "truncate" && rc.task != "validate")
      throw ConfigError(
          "interval.b: a half-line interval (b = inf) is only accepted by the "
          "truncate task");
    if (!rc.halfline && rc.task != "validate") {
      ValidationReport vr = full_validation(rc);
      if (!vr.ok()) {
        const Violation& v = vr.violations.front();
        throw ConfigError(v.field + ": " + v.message);
      }
    }

    int exit_hint = 0;
    Json result = execute(rc, threads, &exit_hint);

    Json report;
    report["slpi_version"] = version();
    report["task"] = rc.task;
    report["config"] = config_to_json(rc);
    report["result"] = std::move(result);

    std::string path =
        rc.output.path.empty() ? rc.task + "." + rc.output.format : rc.output.path;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("output.path: cannot write '" + path + "'");
    if (rc.output.format == "json") {
      out << report.dump(2) << "\n";
    } else {
      write_csv(out, report);
    }
    out.close();
    if (!out) throw ConfigError("output.path: write to '" + path + "' failed");
    oc.report_path = path;
    oc.exit_code = exit_hint;
  } catch (const ConfigError& e) {
    oc.exit_code = 2;
    oc.message = e.what();
  } catch (const std::exception& e) {
    oc.exit_code = 3;
    oc.message = e.what();
  }
  stamp();
  return oc;
}

RunOutcome run_task(const std::string& config_path, const std::string& task_override,
                    const RunOverrides& ov) {
  RunConfig rc;
  try {
    rc = load_config(config_path);
  } catch (const ConfigError& e) {
    RunOutcome oc;
    oc.exit_code = 2;
    oc.message = e.what();
    return oc;
  }
  if (!task_override.empty()) rc.task = task_override;
  return run_config(std::move(rc), ov);
}

}  // namespace slpi
