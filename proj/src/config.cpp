#include "mann/config.hpp"

#include <fstream>
#include <set>
#include <string>

namespace mann {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

Polynomial parse_polynomial(const json& terms, const std::string& where) {
  if (!terms.is_array()) throw ConfigError(where + ": expected a list of terms");
  Polynomial p;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    const std::string at = where + "[" + std::to_string(i) + "]";
    reject_unknown(t, {"coefficient", "powers"}, at);
    Polynomial::Term term;
    term.coefficient = number(t.value("coefficient", json(0.0)), at + ".coefficient");
    if (t.contains("powers")) {
      if (!t["powers"].is_array()) throw ConfigError(at + ".powers: expected a list");
      for (const auto& pw : t["powers"]) {
        if (!pw.is_number_integer()) throw ConfigError(at + ".powers: expected integers");
        term.powers.push_back(pw.get<int>());
      }
    }
    p.terms.push_back(std::move(term));
  }
  return p;
}

StrictFeedbackSystem parse_system(const json& sys) {
  reject_unknown(sys, {"name", "levels"}, "system");
  const std::string name = get_or<std::string>(sys, "name", "example1", "system");
  if (!sys.contains("levels")) {
    if (name == "example1") return make_example1();
    throw ConfigError("system: unknown named system '" + name + "' (inline systems need 'levels')");
  }
  const auto& levels = sys["levels"];
  if (!levels.is_array() || levels.empty()) throw ConfigError("system.levels: expected a non-empty list");
  std::vector<Polynomial> f, g, bound;
  std::vector<double> lower;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::string at = "system.levels[" + std::to_string(i) + "]";
    const auto& lv = levels[i];
    reject_unknown(lv, {"f", "g", "g_bound", "g_lower"}, at);
    for (const char* key : {"f", "g", "g_bound", "g_lower"}) {
      if (!lv.contains(key)) throw ConfigError(at + ": missing '" + key + "'");
    }
    f.push_back(parse_polynomial(lv["f"], at + ".f"));
    g.push_back(parse_polynomial(lv["g"], at + ".g"));
    bound.push_back(parse_polynomial(lv["g_bound"], at + ".g_bound"));
    lower.push_back(number(lv["g_lower"], at + ".g_lower"));
  }
  return make_polynomial_system(name, f, g, bound, lower);
}

ScenarioScript parse_scenario(const json& sc) {
  reject_unknown(sc, {"events"}, "scenario");
  std::vector<ScenarioEvent> events;
  const json list = sc.value("events", json::array());
  if (!list.is_array()) throw ConfigError("scenario.events: expected a list");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string at = "scenario.events[" + std::to_string(i) + "]";
    const auto& ev = list[i];
    reject_unknown(ev, {"t", "level", "kind", "coefficient"}, at);
    for (const char* key : {"t", "kind", "coefficient"}) {
      if (!ev.contains(key)) throw ConfigError(at + ": missing '" + key + "'");
    }
    ScenarioEvent out;
    out.time = number(ev["t"], at + ".t");
    out.coefficient = number(ev["coefficient"], at + ".coefficient");
    const std::string kind = get_or<std::string>(ev, "kind", "", at);
    if (kind == "scale") {
      out.kind = EventKind::Scale;
    } else if (kind == "offset") {
      out.kind = EventKind::Offset;
    } else {
      throw ConfigError(at + ".kind: expected 'scale' or 'offset'");
    }
    if (ev.contains("level")) {
      const auto& lv = ev["level"];
      if (lv.is_string() && lv.get<std::string>() == "all") {
        out.level.reset();
      } else if (lv.is_number_integer() && lv.get<int>() >= 1) {
        out.level = lv.get<int>() - 1;
      } else {
        throw ConfigError(at + ".level: expected \"all\" or a 1-based level");
      }
    }
    events.push_back(out);
  }
  return ScenarioScript(std::move(events));
}

CommandSignal parse_command(const json& cmd, int order) {
  if (!cmd.is_object() || cmd.size() != 1) {
    throw ConfigError("command: expected exactly one of 'constant' or 'sine'");
  }
  if (cmd.contains("constant")) return CommandSignal::constant(number(cmd["constant"], "command.constant"), order);
  if (cmd.contains("sine")) {
    const auto& s = cmd["sine"];
    reject_unknown(s, {"offset", "amplitude", "omega"}, "command.sine");
    return CommandSignal::sine(get_or(s, "offset", 0.0, "command.sine"),
                               get_or(s, "amplitude", 0.0, "command.sine"),
                               get_or(s, "omega", 1.0, "command.sine"), order);
  }
  throw ConfigError("command: unknown signal type '" + cmd.begin().key() + "'");
}

void parse_controller(const json& c, RunConfig& run) {
  reject_unknown(c,
                 {"mode", "K", "k_z", "kappa", "C_w", "C_v", "stability_preset", "hidden", "slots",
                  "c_w", "init_range", "per_level"},
                 "controller");
  auto& cfg = run.controller;
  if (c.contains("mode")) cfg.mode = parse_mode(get_or<std::string>(c, "mode", "", "controller"));
  cfg.gain = get_or(c, "K", cfg.gain, "controller");
  cfg.memory_gain = get_or(c, "k_z", cfg.memory_gain, "controller");
  cfg.rates.kappa = get_or(c, "kappa", cfg.rates.kappa, "controller");
  cfg.rates.c_w = get_or(c, "C_w", cfg.rates.c_w, "controller");
  cfg.rates.c_v = get_or(c, "C_v", cfg.rates.c_v, "controller");
  cfg.stability_preset = get_or(c, "stability_preset", cfg.stability_preset, "controller");
  run.hidden_width = get_or(c, "hidden", run.hidden_width, "controller");
  run.memory_slots = get_or(c, "slots", run.memory_slots, "controller");
  run.write_constant = get_or(c, "c_w", run.write_constant, "controller");
  run.init_range = get_or(c, "init_range", run.init_range, "controller");
  if (c.contains("per_level")) {
    const auto& list = c["per_level"];
    if (!list.is_array()) throw ConfigError("controller.per_level: expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string at = "controller.per_level[" + std::to_string(i) + "]";
      const auto& o = list[i];
      reject_unknown(o, {"level", "C_w", "C_v", "kappa"}, at);
      const int level = get_or(o, "level", 0, at);
      if (level < 1) throw ConfigError(at + ".level: expected a 1-based level");
      AdaptationRates r = cfg.rates;
      r.c_w = get_or(o, "C_w", r.c_w, at);
      r.c_v = get_or(o, "C_v", r.c_v, at);
      r.kappa = get_or(o, "kappa", r.kappa, at);
      if (static_cast<int>(cfg.level_rates.size()) < level) cfg.level_rates.resize(level);
      cfg.level_rates[level - 1] = r;
    }
  }
}

void parse_run(const json& r, RunConfig& run) {
  reject_unknown(r, {"h", "T", "seed", "decimation", "x0", "blowup_guard"}, "run");
  run.step = get_or(r, "h", run.step, "run");
  run.horizon = get_or(r, "T", run.horizon, "run");
  run.seed = get_or<std::uint64_t>(r, "seed", run.seed, "run");
  run.decimation = get_or(r, "decimation", run.decimation, "run");
  run.blowup_guard = get_or(r, "blowup_guard", run.blowup_guard, "run");
  if (r.contains("x0")) {
    const auto& x0 = r["x0"];
    if (!x0.is_array()) throw ConfigError("run.x0: expected a list");
    Vec v(static_cast<Eigen::Index>(x0.size()));
    for (std::size_t i = 0; i < x0.size(); ++i) v[i] = number(x0[i], "run.x0");
    run.x0 = v;
  }
  if (!(run.horizon > 0.0)) throw ConfigError("run.T must be positive");
}

}  // namespace

ExperimentConfig parse_experiment(const json& doc) {
  reject_unknown(doc, {"system", "scenario", "command", "controller", "run", "metrics", "assumption_check"},
                 "config");
  ExperimentConfig cfg;
  auto& run = cfg.run;
  if (doc.contains("system")) run.system = parse_system(doc["system"]);
  const int n = run.system.order();
  if (doc.contains("scenario")) run.scenario = parse_scenario(doc["scenario"]);
  run.command = doc.contains("command") ? parse_command(doc["command"], n)
                                        : CommandSignal::constant(0.1, n);
  if (doc.contains("controller")) parse_controller(doc["controller"], run);
  if (doc.contains("run")) parse_run(doc["run"], run);

  if (doc.contains("metrics")) {
    const auto& m = doc["metrics"];
    reject_unknown(m, {"band_fraction", "band_mode"}, "metrics");
    cfg.metrics.band_fraction = get_or(m, "band_fraction", cfg.metrics.band_fraction, "metrics");
    const std::string mode = get_or<std::string>(m, "band_mode", "relative", "metrics");
    if (mode == "relative") {
      cfg.metrics.band_mode = BandMode::RelativeToCommand;
    } else if (mode == "absolute") {
      cfg.metrics.band_mode = BandMode::Absolute;
    } else {
      throw ConfigError("metrics.band_mode: expected 'relative' or 'absolute'");
    }
  }

  auto& check = cfg.assumption;
  if (doc.contains("assumption_check")) {
    const auto& a = doc["assumption_check"];
    reject_unknown(a, {"enabled", "box", "samples", "seed"}, "assumption_check");
    check.enabled = get_or(a, "enabled", check.enabled, "assumption_check");
    check.samples = get_or(a, "samples", check.samples, "assumption_check");
    check.seed = get_or<std::uint64_t>(a, "seed", check.seed, "assumption_check");
    if (a.contains("box")) {
      for (const auto& side : a["box"]) {
        if (!side.is_array() || side.size() != 2) {
          throw ConfigError("assumption_check.box: expected [lo, hi] pairs");
        }
        check.box.emplace_back(number(side[0], "assumption_check.box"),
                               number(side[1], "assumption_check.box"));
      }
    }
  }
  if (check.box.empty()) check.box.assign(n, {-2.0, 2.0});
  if (static_cast<int>(check.box.size()) != n) {
    throw ConfigError("assumption_check.box: one interval per state required");
  }
  if (check.samples < 1) throw ConfigError("assumption_check.samples must be >= 1");

  run.validate();
  cfg.metrics.validate();
  return cfg;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  return parse_experiment(doc);
}

AssumptionReport check_assumption(const ExperimentConfig& cfg) {
  return validate_assumption(cfg.run.system, cfg.assumption.box, cfg.assumption.samples,
                             cfg.assumption.seed);
}

}  // namespace mann
