#include "slpi/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace slpi {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> tokenize(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

/// Coerce a raw value string to JSON: number, array of numbers, or string.
Json coerce_value(const std::string& raw) {
  std::vector<std::string> toks = tokenize(raw);
  if (toks.empty()) return std::string{};
  std::vector<double> nums;
  nums.reserve(toks.size());
  for (const auto& t : toks) {
    double d;
    if (!parse_double(t, d)) return raw;  // keep full string (paths, names)
    nums.push_back(d);
  }
  if (nums.size() == 1) return nums[0];
  return Json(nums);
}

struct IniEntry {
  std::string key;
  std::string raw;
  int line;
};

struct IniSection {
  std::string name;
  int line;
  std::vector<IniEntry> entries;
};

std::vector<IniSection> parse_ini(const std::string& text, const std::string& origin) {
  std::vector<IniSection> sections;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty() || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail("unterminated section header");
      std::string name = trim(t.substr(1, t.size() - 2));
      if (name.empty()) fail("empty section name");
      sections.push_back({name, lineno, {}});
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    if (sections.empty()) fail("entry before any [section]");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (key.empty()) fail("empty key");
    sections.back().entries.push_back({key, val, lineno});
  }
  return sections;
}

Distribution parse_distribution_tokens(const std::vector<std::string>& toks,
                                       const std::string& where) {
  auto num = [&](std::size_t i) {
    double d;
    if (i >= toks.size() || !parse_double(toks[i], d))
      throw ConfigError(where + ": distribution '" + toks[0] +
                        "' is missing a numeric parameter");
    return d;
  };
  if (toks.empty()) throw ConfigError(where + ": empty distribution");
  const std::string& fam = toks[0];
  if (fam == "uniform") {
    if (toks.size() != 3)
      throw ConfigError(where + ": uniform takes two parameters (lo hi)");
    return Distribution::uniform(num(1), num(2));
  }
  if (fam == "normal") {
    if (toks.size() != 3)
      throw ConfigError(where + ": normal takes two parameters (mu sigma)");
    return Distribution::normal(num(1), num(2));
  }
  if (fam == "exponential") {
    if (toks.size() != 2)
      throw ConfigError(where + ": exponential takes one parameter (rate)");
    return Distribution::exponential(num(1));
  }
  throw ConfigError(where + ": unknown distribution family '" + fam + "'");
}

/// Assemble the canonical JSON document from parsed text sections.
Json ini_to_json(const std::vector<IniSection>& sections, const std::string& origin) {
  Json doc = Json::object();
  Json interactions = Json::array();
  // staged coupling/ensemble material that needs the site list
  std::optional<std::vector<double>> positional_omega;
  Json keyed_omega = Json::object();
  bool have_keyed_omega = false;
  std::optional<std::vector<std::string>> default_dist;
  std::vector<std::pair<int, std::vector<std::string>>> site_dists;
  std::optional<std::uint64_t> ens_seed;
  bool have_ensemble_section = false;

  int next_auto_index = 0;
  for (const auto& sec : sections) {
    auto where = [&](const IniEntry& e) {
      return origin + ":" + std::to_string(e.line) + ": [" + sec.name + "] " + e.key;
    };
    if (sec.name == "interval" || sec.name == "potential" ||
        sec.name == "boundary" || sec.name == "tolerances" ||
        sec.name == "task" || sec.name == "output") {
      Json& obj = doc[sec.name];
      if (!obj.is_object()) obj = Json::object();
      for (const auto& e : sec.entries) obj[e.key] = coerce_value(e.raw);
    } else if (sec.name == "interaction") {
      Json site = Json::object();
      for (const auto& e : sec.entries) site[e.key] = coerce_value(e.raw);
      if (!site.contains("index")) site["index"] = next_auto_index;
      next_auto_index = site["index"].get<int>() + 1;
      interactions.push_back(std::move(site));
    } else if (sec.name == "coupling") {
      for (const auto& e : sec.entries) {
        if (e.key == "omega") {
          Json v = coerce_value(e.raw);
          std::vector<double> vals;
          if (v.is_number())
            vals.push_back(v.get<double>());
          else if (v.is_array())
            vals = v.get<std::vector<double>>();
          else
            throw ConfigError(where(e) + ": expected numbers");
          positional_omega = std::move(vals);
        } else if (e.key.rfind("site", 0) == 0) {
          double d;
          if (!parse_double(e.raw, d))
            throw ConfigError(where(e) + ": expected a number");
          keyed_omega[e.key.substr(4)] = d;
          have_keyed_omega = true;
        } else {
          throw ConfigError(where(e) + ": unknown coupling key");
        }
      }
    } else if (sec.name == "ensemble") {
      have_ensemble_section = true;
      for (const auto& e : sec.entries) {
        if (e.key == "seed") {
          try {
            ens_seed = static_cast<std::uint64_t>(std::stoull(trim(e.raw)));
          } catch (const std::exception&) {
            throw ConfigError(where(e) + ": expected an unsigned integer seed");
          }
        } else if (e.key == "dist") {
          default_dist = tokenize(e.raw);
        } else if (e.key.rfind("site", 0) == 0) {
          int idx;
          try {
            idx = std::stoi(e.key.substr(4));
          } catch (const std::exception&) {
            throw ConfigError(where(e) + ": bad site index");
          }
          site_dists.emplace_back(idx, tokenize(e.raw));
        } else {
          throw ConfigError(where(e) + ": unknown ensemble key");
        }
      }
    } else {
      throw ConfigError(origin + ":" + std::to_string(sec.line) +
                        ": unknown section [" + sec.name + "]");
    }
  }
  if (!interactions.empty()) doc["interactions"] = interactions;

  // site index list in position order, for positional/default expansion
  std::vector<std::pair<double, int>> order;
  for (const auto& s : interactions)
    order.emplace_back(s.at("x").get<double>(), s.at("index").get<int>());
  std::sort(order.begin(), order.end());

  if (positional_omega || have_keyed_omega) {
    Json coupling = Json::object();
    if (positional_omega) {
      if (positional_omega->size() != order.size())
        throw ConfigError(origin + ": [coupling] omega lists " +
                          std::to_string(positional_omega->size()) +
                          " values for " + std::to_string(order.size()) + " sites");
      for (std::size_t k = 0; k < order.size(); ++k)
        coupling[std::to_string(order[k].second)] = (*positional_omega)[k];
    }
    for (auto it = keyed_omega.begin(); it != keyed_omega.end(); ++it)
      coupling[it.key()] = it.value();
    doc["coupling"] = coupling;
  }

  if (have_ensemble_section) {
    if (!ens_seed) throw ConfigError(origin + ": [ensemble] requires a seed");
    Json per = Json::object();
    if (default_dist) {
      Distribution d = parse_distribution_tokens(*default_dist, origin + ": [ensemble] dist");
      for (const auto& [x, idx] : order) {
        (void)x;
        per[std::to_string(idx)] = to_json(d);
      }
    }
    for (const auto& [idx, toks] : site_dists) {
      Distribution d = parse_distribution_tokens(
          toks, origin + ": [ensemble] site" + std::to_string(idx));
      per[std::to_string(idx)] = to_json(d);
    }
    doc["ensemble"] = Json{{"seed", *ens_seed}, {"per_site", per}};
  }
  return doc;
}

/// Task parameters are the one config block kept as raw JSON. The sectioned
/// text syntax coerces every numeric value to double, so integer-typed JSON
/// literals must be widened too or the two syntaxes would echo differently.
Json canonical_param(const Json& v) {
  if (v.is_number() && !v.is_number_float()) return v.get<double>();
  if (v.is_array()) {
    Json out = Json::array();
    for (const auto& e : v) out.push_back(canonical_param(e));
    return out;
  }
  return v;
}

Tolerances tolerances_from_config(const Json& j) {
  Tolerances t = Tolerances::defaults();
  if (j.contains("profile")) {
    std::string p = j.at("profile").get<std::string>();
    try {
      t = Tolerances::profile(p);
    } catch (const std::exception& ex) {
      throw ConfigError(std::string("tolerances.profile: ") + ex.what());
    }
  }
  Json over = j;
  over.erase("profile");
  Tolerances base = t;
  Tolerances o = tolerances_from_json(over);
  // tolerances_from_json fills gaps from defaults(); re-apply profile values
  // for keys absent in the override object
  auto pick = [&over](double field_override, double profile_value, const char* key) {
    return over.contains(key) ? field_override : profile_value;
  };
  t.ode_rel = pick(o.ode_rel, base.ode_rel, "ode_rel");
  t.ode_abs = pick(o.ode_abs, base.ode_abs, "ode_abs");
  t.eigen = pick(o.eigen, base.eigen, "eigen");
  t.node = pick(o.node, base.node, "node");
  t.pole = pick(o.pole, base.pole, "pole");
  t.quad = pick(o.quad, base.quad, "quad");
  t.band = pick(o.band, base.band, "band");
  return t;
}

}  // namespace

double RunConfig::param_number(const std::string& key) const {
  if (!task_params.contains(key))
    throw ConfigError("task." + key + ": missing required parameter");
  return param_number(key, 0.0);
}

double RunConfig::param_number(const std::string& key, double fallback) const {
  if (!task_params.contains(key)) return fallback;
  const Json& v = task_params.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    double d;
    if (parse_double(v.get<std::string>(), d)) return d;
  }
  throw ConfigError("task." + key + ": expected a number");
}

long RunConfig::param_integer(const std::string& key, long fallback) const {
  double d = param_number(key, static_cast<double>(fallback));
  long n = static_cast<long>(d);
  if (static_cast<double>(n) != d)
    throw ConfigError("task." + key + ": expected an integer");
  return n;
}

std::string RunConfig::param_string(const std::string& key,
                                    const std::string& fallback) const {
  if (!task_params.contains(key)) return fallback;
  const Json& v = task_params.at(key);
  if (v.is_string()) return v.get<std::string>();
  throw ConfigError("task." + key + ": expected a string");
}

std::vector<double> RunConfig::param_list(const std::string& key) const {
  if (!task_params.contains(key))
    throw ConfigError("task." + key + ": missing required parameter");
  const Json& v = task_params.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError("task." + key + ": expected numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  throw ConfigError("task." + key + ": expected a list of numbers");
}

RunConfig config_from_json(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  RunConfig rc;
  try {
    if (!doc.contains("interval")) throw ConfigError("interval: section missing");
    rc.problem.interval = interval_from_json(doc.at("interval"), &rc.halfline);
    if (!doc.contains("potential")) throw ConfigError("potential: section missing");
    rc.problem.potential = potential_from_json(doc.at("potential"));
    if (doc.contains("interactions"))
      rc.problem.interactions = interactions_from_json(doc.at("interactions"));
    if (doc.contains("boundary"))
      rc.problem.bc = boundary_from_json(doc.at("boundary"));
    if (doc.contains("coupling")) {
      const Json& c = doc.at("coupling");
      if (c.is_array()) {
        std::vector<double> vals = c.get<std::vector<double>>();
        if (vals.size() != rc.problem.interactions.size())
          throw ConfigError("coupling: " + std::to_string(vals.size()) +
                            " values for " +
                            std::to_string(rc.problem.interactions.size()) + " sites");
        std::size_t k = 0;
        for (const auto& s : rc.problem.interactions.sites)
          rc.coupling.values[s.index] = vals[k++];
      } else {
        rc.coupling = coupling_from_json(c);
      }
      rc.has_coupling = true;
    }
    if (doc.contains("ensemble")) {
      const Json& e = doc.at("ensemble");
      rc.ensemble.master_seed = e.at("seed").get<std::uint64_t>();
      if (e.contains("per_site")) {
        const Json& per = e.at("per_site");
        for (auto it = per.begin(); it != per.end(); ++it)
          rc.ensemble.per_site[std::stoi(it.key())] =
              distribution_from_json(it.value());
      }
      if (e.contains("default")) {
        Distribution d = distribution_from_json(e.at("default"));
        for (const auto& s : rc.problem.interactions.sites)
          if (!rc.ensemble.per_site.count(s.index))
            rc.ensemble.per_site[s.index] = d;
      }
      rc.has_ensemble = true;
    }
    if (doc.contains("tolerances"))
      rc.tolerances = tolerances_from_config(doc.at("tolerances"));
    if (doc.contains("task")) {
      const Json& t = doc.at("task");
      if (!t.is_object()) throw ConfigError("task: must be an object");
      for (auto it = t.begin(); it != t.end(); ++it) {
        if (it.key() == "name")
          rc.task = it.value().get<std::string>();
        else
          rc.task_params[it.key()] = canonical_param(it.value());
      }
    }
    if (doc.contains("output")) {
      const Json& o = doc.at("output");
      rc.output.path = o.value("path", std::string{});
      rc.output.format = o.value("format", std::string{"json"});
      if (rc.output.format != "json" && rc.output.format != "csv")
        throw ConfigError("output.format: expected 'json' or 'csv', got '" +
                          rc.output.format + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Json::exception& ex) {
    throw ConfigError(std::string("config: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("config: ") + ex.what());
  }
  return rc;
}

Json config_to_json(const RunConfig& rc) {
  Json doc;
  doc["interval"] = to_json(rc.problem.interval, rc.halfline);
  doc["potential"] = to_json(rc.problem.potential);
  doc["interactions"] = to_json(rc.problem.interactions);
  doc["boundary"] = to_json(rc.problem.bc);
  if (rc.has_coupling) doc["coupling"] = to_json(rc.coupling);
  if (rc.has_ensemble) doc["ensemble"] = to_json(rc.ensemble);
  doc["tolerances"] = to_json(rc.tolerances);
  Json task = Json::object();
  task["name"] = rc.task;
  for (auto it = rc.task_params.begin(); it != rc.task_params.end(); ++it)
    task[it.key()] = it.value();
  doc["task"] = task;
  doc["output"] = Json{{"path", rc.output.path}, {"format", rc.output.format}};
  return doc;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& ex) {
      throw ConfigError(origin + ": " + ex.what());
    }
    return config_from_json(doc);
  }
  return config_from_json(ini_to_json(parse_ini(text, origin), origin));
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

}  // namespace slpi
