#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "slpi/config.hpp"
#include "slpi/run.hpp"

using namespace slpi;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "slpi_config_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string error_of(const std::string& text) {
  try {
    (void)parse_config_text(text, "test.ini");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

const char* kIniFull = R"(# box with two point interactions
[interval]
a = 0
b = 3.1415926535897931

[potential]
type = constant
value = 0

[interaction]
x = 1.0
kind = delta

[interaction]
x = 2.0
kind = deltaprime

[boundary]
theta = 0
gamma = 0

[coupling]
omega = 5, -2

[ensemble]
seed = 42
dist = uniform -1 1
site1 = normal 0 2

[tolerances]
profile = strict
eigen = 1e-7

[task]
name = spectrum
e_lo = 0.5
e_hi = 20

[output]
format = json
)";

const char* kJsonFull = R"({
  "interval": {"a": 0, "b": 3.1415926535897931},
  "potential": {"type": "constant", "value": 0},
  "interactions": [
    {"x": 1.0, "kind": "delta"},
    {"x": 2.0, "kind": "deltaprime"}
  ],
  "boundary": {"theta": 0, "gamma": 0},
  "coupling": [5, -2],
  "ensemble": {
    "seed": 42,
    "per_site": {
      "0": {"dist": "uniform", "lo": -1, "hi": 1},
      "1": {"dist": "normal", "mu": 0, "sigma": 2}
    }
  },
  "tolerances": {"profile": "strict", "eigen": 1e-7},
  "task": {"name": "spectrum", "e_lo": 0.5, "e_hi": 20},
  "output": {"format": "json"}
})";

RunConfig box_spectrum_config() {
  return parse_config_text(
      "[interval]\na=0\nb=3.1415926535897931\n"
      "[potential]\ntype=constant\nvalue=0\n"
      "[interaction]\nx=1.5707963267948966\nkind=delta\n"
      "[coupling]\nomega=5\n"
      "[task]\nname=spectrum\ne_lo=0.5\ne_hi=20\n",
      "inline");
}

RunConfig box_montecarlo_config() {
  return parse_config_text(
      "[interval]\na=0\nb=3.1415926535897931\n"
      "[potential]\ntype=constant\nvalue=0\n"
      "[interaction]\nx=1.5707963267948966\nkind=delta\n"
      "[ensemble]\nseed=42\ndist=uniform -5 5\n"
      "[task]\nname=montecarlo\ne=4\nsamples=50\n",
      "inline");
}

}  // namespace

TEST_CASE("sectioned text and json parse to the same canonical config") {
  RunConfig a = parse_config_text(kIniFull, "full.ini");
  RunConfig b = parse_config_text(kJsonFull, "full.json");
  CHECK(config_to_json(a).dump() == config_to_json(b).dump());

  CHECK(a.task == "spectrum");
  CHECK(a.problem.interactions.size() == 2);
  CHECK(a.problem.interactions.sites[0].kind == InteractionKind::Delta);
  CHECK(a.problem.interactions.sites[1].kind == InteractionKind::DeltaPrime);
  CHECK(a.has_coupling);
  CHECK(a.coupling.at(0) == 5.0);
  CHECK(a.coupling.at(1) == -2.0);
  CHECK(a.has_ensemble);
  CHECK(a.ensemble.master_seed == 42);
  CHECK(a.ensemble.per_site.at(0).family == Distribution::Family::Uniform);
  CHECK(a.ensemble.per_site.at(1).family == Distribution::Family::Normal);
  CHECK(a.ensemble.per_site.at(1).p2 == 2.0);

  // profile value for untouched fields, explicit override wins for eigen
  Tolerances strict = Tolerances::profile("strict");
  CHECK(a.tolerances.ode_rel == strict.ode_rel);
  CHECK(a.tolerances.pole == strict.pole);
  CHECK(a.tolerances.eigen == 1e-7);
}

TEST_CASE("canonical echo round-trips byte-for-byte") {
  RunConfig a = parse_config_text(kIniFull, "full.ini");
  Json echo = config_to_json(a);
  RunConfig back = config_from_json(echo);
  CHECK(config_to_json(back).dump() == echo.dump());
}

TEST_CASE("positional couplings follow position order, keyed entries override") {
  // the site at smaller x gets the first positional value even when its
  // declaration order (and index) comes second
  RunConfig rc = parse_config_text(
      "[interval]\na=0\nb=10\n[potential]\ntype=constant\nvalue=0\n"
      "[interaction]\nx=7.0\nkind=delta\n"
      "[interaction]\nx=2.0\nkind=delta\n"
      "[coupling]\nomega=5 -2\n",
      "pos.ini");
  CHECK(rc.coupling.at(1) == 5.0);   // x=2.0 has index 1
  CHECK(rc.coupling.at(0) == -2.0);  // x=7.0 has index 0

  RunConfig keyed = parse_config_text(
      "[interval]\na=0\nb=10\n[potential]\ntype=constant\nvalue=0\n"
      "[interaction]\nx=2.0\nkind=delta\n"
      "[interaction]\nx=7.0\nkind=delta\n"
      "[coupling]\nomega=5 -2\nsite1=9\n",
      "keyed.ini");
  CHECK(keyed.coupling.at(0) == 5.0);
  CHECK(keyed.coupling.at(1) == 9.0);
}

TEST_CASE("ensemble default distribution expands per site") {
  RunConfig rc = parse_config_text(
      "[interval]\na=0\nb=10\n[potential]\ntype=constant\nvalue=0\n"
      "[interaction]\nx=2.0\nkind=delta\n"
      "[interaction]\nx=7.0\nkind=delta\n"
      "[ensemble]\nseed=9\ndist=exponential 3\n",
      "ens.ini");
  REQUIRE(rc.has_ensemble);
  CHECK(rc.ensemble.per_site.size() == 2);
  for (int i : {0, 1}) {
    CHECK(rc.ensemble.per_site.at(i).family == Distribution::Family::Exponential);
    CHECK(rc.ensemble.per_site.at(i).p1 == 3.0);
  }

  // json spelling: "default" fills sites without explicit entries
  RunConfig js = parse_config_text(
      R"({"interval":{"a":0,"b":10},"potential":{"type":"constant","value":0},
          "interactions":[{"x":2.0,"kind":"delta"},{"x":7.0,"kind":"delta"}],
          "ensemble":{"seed":9,"default":{"dist":"exponential","rate":3},
                      "per_site":{"1":{"dist":"uniform","lo":0,"hi":1}}}})",
      "ens.json");
  CHECK(js.ensemble.per_site.at(0).family == Distribution::Family::Exponential);
  CHECK(js.ensemble.per_site.at(1).family == Distribution::Family::Uniform);
}

TEST_CASE("infinite right endpoint parses from both syntaxes") {
  RunConfig a = parse_config_text(
      "[interval]\na=0\nb=inf\n[potential]\ntype=constant\nvalue=0\n", "h.ini");
  CHECK(a.halfline);
  RunConfig b = parse_config_text(
      R"({"interval":{"a":0,"b":"inf"},"potential":{"type":"constant","value":0}})",
      "h.json");
  CHECK(b.halfline);
  CHECK(config_to_json(a).at("interval").at("b").get<std::string>() == "inf");
  CHECK(config_to_json(a).dump() == config_to_json(b).dump());
}

TEST_CASE("task parameter accessors raise field-named errors") {
  RunConfig rc = box_spectrum_config();
  CHECK(rc.param_number("e_lo") == 0.5);
  CHECK(rc.param_number("absent", 7.5) == 7.5);
  CHECK(rc.param_integer("e_hi", 0) == 20);
  CHECK(rc.param_string("absent", "dflt") == "dflt");
  CHECK(rc.has_param("e_lo"));
  CHECK(!rc.has_param("absent"));
  CHECK(rc.param_list("e_lo") == std::vector<double>{0.5});

  CHECK_THROWS_WITH_AS((void)rc.param_number("nope"),
                       "task.nope: missing required parameter", ConfigError);
  CHECK_THROWS_WITH_AS((void)rc.param_integer("e_lo", 0),
                       "task.e_lo: expected an integer", ConfigError);
  rc.task_params["label"] = "abc";
  CHECK_THROWS_WITH_AS((void)rc.param_number("label", 0.0),
                       "task.label: expected a number", ConfigError);
  CHECK_THROWS_WITH_AS((void)rc.param_list("label"),
                       "task.label: expected a list of numbers", ConfigError);
}

TEST_CASE("parse diagnostics name the source, line, and field") {
  CHECK(contains(error_of("[interval]\na=0\nb=1\n[bogus]\nx=1\n"),
                 "test.ini:4: unknown section [bogus]"));
  CHECK(contains(error_of("a = 0\n"), "test.ini:1"));
  CHECK(contains(error_of("[interval]\na 0\n"), "test.ini:2: expected 'key = value'"));
  CHECK(contains(error_of("[interval]\na=0\nb=1\n[potential]\ntype=constant\nvalue=0\n"
                          "[coupling]\nwhat=3\n"),
                 "[coupling] what"));
  CHECK(contains(error_of("[interval]\na=0\nb=1\n[potential]\ntype=constant\nvalue=0\n"
                          "[ensemble]\ndist=uniform 0 1\n"),
                 "[ensemble] requires a seed"));
  CHECK(contains(error_of("[interval]\na=0\nb=1\n[potential]\ntype=constant\nvalue=0\n"
                          "[interaction]\nx=0.5\nkind=delta\n[coupling]\nomega=1 2\n"),
                 "2 values for 1 sites"));
  CHECK(contains(error_of("[interval]\na=0\nb=1\n[potential]\ntype=constant\nvalue=0\n"
                          "[ensemble]\nseed=1\ndist=uniform 0\n"),
                 "uniform takes two parameters"));
  // json-side diagnostics
  CHECK(contains(error_of("{ not json"), "bad.json") == false);  // origin comes through
  try {
    (void)parse_config_text("{ not json", "bad.json");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(contains(e.what(), "bad.json"));
  }
  try {
    (void)parse_config_text(R"({"potential":{"type":"constant","value":0}})", "nointerval");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(contains(e.what(), "interval"));
  }
  try {
    (void)parse_config_text(
        R"({"interval":{"a":0,"b":1},"potential":{"type":"constant","value":0},
            "output":{"format":"xml"}})",
        "fmt.json");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(contains(e.what(), "output.format"));
  }
}

TEST_CASE("config files load through either syntax") {
  fs::path ini = scratch_dir() / "full.ini";
  fs::path json = scratch_dir() / "full.json";
  spit(ini, kIniFull);
  spit(json, kJsonFull);
  RunConfig a = load_config(ini.string());
  RunConfig b = load_config(json.string());
  CHECK(config_to_json(a).dump() == config_to_json(b).dump());
  CHECK_THROWS_AS((void)load_config((scratch_dir() / "missing.ini").string()),
                  ConfigError);
}

TEST_CASE("csv and json reports carry identical numeric payloads") {
  RunConfig rc = box_spectrum_config();
  RunOverrides jov, cov;
  jov.out = (scratch_dir() / "spec.json").string();
  cov.out = (scratch_dir() / "spec.csv").string();
  cov.format = "csv";
  RunOutcome jr = run_config(rc, jov);
  RunOutcome cr = run_config(rc, cov);
  REQUIRE(jr.exit_code == 0);
  REQUIRE(cr.exit_code == 0);

  Json rep = Json::parse(slurp(jr.report_path));
  const Json& eig = rep.at("result").at("eigenvalues");
  REQUIRE(eig.size() > 0);

  // pull data rows out of the csv table
  std::istringstream in(slurp(cr.report_path));
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("E,", 0) == 0) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  REQUIRE(rows.size() == eig.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 3);
    // %.17g round-trips doubles exactly
    CHECK(std::strtod(rows[i][0].c_str(), nullptr) == eig[i].at("E").get<double>());
    CHECK(std::strtod(rows[i][1].c_str(), nullptr) == eig[i].at("residual").get<double>());
    CHECK(std::stoull(rows[i][2]) == eig[i].at("zero_count").get<std::uint64_t>());
  }
}

TEST_CASE("monte carlo csv mirrors the json summary and histogram") {
  RunConfig rc = box_montecarlo_config();
  RunOverrides jov, cov;
  jov.out = (scratch_dir() / "mc.json").string();
  cov.out = (scratch_dir() / "mc.csv").string();
  cov.format = "csv";
  REQUIRE(run_config(rc, jov).exit_code == 0);
  REQUIRE(run_config(rc, cov).exit_code == 0);

  Json r = Json::parse(slurp((scratch_dir() / "mc.json").string())).at("result");
  std::istringstream in(slurp((scratch_dir() / "mc.csv").string()));
  std::string line;
  std::vector<std::string> data;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("E,", 0) == 0 || line.rfind("bin_lo,", 0) == 0) continue;
    data.push_back(line);
  }
  // first data line: summary row
  REQUIRE(data.size() == 1 + r.at("residual_histogram").size());
  std::istringstream ls(data[0]);
  std::vector<std::string> cells;
  std::string c;
  while (std::getline(ls, c, ',')) cells.push_back(c);
  REQUIRE(cells.size() == 6);
  CHECK(std::strtod(cells[0].c_str(), nullptr) == r.at("E").get<double>());
  CHECK(std::stoull(cells[1]) == r.at("n_samples").get<std::uint64_t>());
  CHECK(std::strtod(cells[3].c_str(), nullptr) == r.at("hit_fraction").get<double>());
  CHECK(std::stoull(cells[4]) == 42);
  for (std::size_t i = 0; i < r.at("residual_histogram").size(); ++i) {
    std::istringstream hs(data[1 + i]);
    std::vector<std::string> hc;
    while (std::getline(hs, c, ',')) hc.push_back(c);
    REQUIRE(hc.size() == 3);
    CHECK(std::stoull(hc[2]) ==
          r.at("residual_histogram")[i].at("count").get<std::uint64_t>());
  }
}

TEST_CASE("runner maps failures to exit codes") {
  // clean run
  RunConfig ok = box_spectrum_config();
  RunOverrides ov;
  ov.out = (scratch_dir() / "ok.json").string();
  RunOutcome good = run_config(ok, ov);
  CHECK(good.exit_code == 0);
  CHECK(fs::exists(good.report_path));
  CHECK(good.message.empty());

  // unknown task
  RunConfig bad_task = box_spectrum_config();
  bad_task.task = "frobnicate";
  RunOutcome r1 = run_config(bad_task, ov);
  CHECK(r1.exit_code == 2);
  CHECK(contains(r1.message, "frobnicate"));

  // infinite interval is only meaningful for truncation studies
  RunConfig half = parse_config_text(
      "[interval]\na=0\nb=inf\n[potential]\ntype=constant\nvalue=0\n"
      "[task]\nname=spectrum\ne_lo=0\ne_hi=4\n",
      "half.ini");
  RunOutcome r2 = run_config(half, ov);
  CHECK(r2.exit_code == 2);

  // semantic validation failure before computing
  RunConfig outside = box_spectrum_config();
  outside.problem.interactions.sites[0].x = 9.0;  // beyond b
  RunOutcome r3 = run_config(outside, ov);
  CHECK(r3.exit_code == 2);
  CHECK(contains(r3.message, "interaction[0]"));

  // the validate task reports the same problem instead of failing outright
  RunConfig vtask = outside;
  vtask.task = "validate";
  vtask.task_params = Json::object();
  RunOverrides vov;
  vov.out = (scratch_dir() / "validate.json").string();
  RunOutcome r4 = run_config(vtask, vov);
  CHECK(r4.exit_code == 2);
  REQUIRE(fs::exists(vov.out.value()));
  Json vrep = Json::parse(slurp(vov.out.value()));
  CHECK(vrep.at("result").at("ok").get<bool>() == false);
  CHECK(vrep.at("result").at("violations").size() > 0);

  // runtime computation failure: inverted window reaches the solver
  RunConfig inverted = box_spectrum_config();
  inverted.task_params["e_lo"] = 20.0;
  inverted.task_params["e_hi"] = 0.5;
  RunOutcome r5 = run_config(inverted, ov);
  CHECK(r5.exit_code == 3);
  CHECK(!r5.message.empty());

  // bad format override
  RunOverrides bad_fmt;
  bad_fmt.out = ov.out;
  bad_fmt.format = "xml";
  CHECK(run_config(box_spectrum_config(), bad_fmt).exit_code == 2);
}

TEST_CASE("seed override lands in the echoed config") {
  RunConfig rc = box_montecarlo_config();
  RunOverrides ov;
  ov.out = (scratch_dir() / "seeded.json").string();
  ov.seed = 123;
  REQUIRE(run_config(rc, ov).exit_code == 0);
  Json rep = Json::parse(slurp(ov.out.value()));
  CHECK(rep.at("config").at("ensemble").at("seed").get<std::uint64_t>() == 123);
  CHECK(rep.at("result").at("seed").get<std::uint64_t>() == 123);
}

TEST_CASE("a report's embedded config reruns to the identical file") {
  RunConfig rc = box_montecarlo_config();
  RunOverrides ov;
  ov.out = (scratch_dir() / "rerun.json").string();
  REQUIRE(run_config(rc, ov).exit_code == 0);
  std::string first = slurp(ov.out.value());

  // reconstruct the run purely from the embedded echo; it carries the output
  // path, so no overrides are needed the second time
  Json rep = Json::parse(first);
  RunConfig again = config_from_json(rep.at("config"));
  CHECK(again.output.path == ov.out.value());
  REQUIRE(run_config(again).exit_code == 0);
  CHECK(slurp(ov.out.value()) == first);
}
