#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mann/config.hpp"
#include "mann/errors.hpp"
#include "mann/trajectory_csv.hpp"

using namespace mann;
using nlohmann::json;

namespace {

Trajectory short_run(double c_w = kDefaultWriteConstant) {
  RunConfig run;
  run.horizon = 8.0;
  run.write_constant = c_w;
  run.scenario = ScenarioScript({{2.0, std::nullopt, EventKind::Scale, 20.0}, {5.0, std::nullopt, EventKind::Scale, 0.05}});
  return simulate(run);
}

json base_config() {
  return json::parse(R"({
    "system": {"name": "example1"},
    "scenario": {"events": [{"t": 5, "level": "all", "kind": "scale", "coefficient": 20}]},
    "command": {"constant": 0.1},
    "controller": {"mode": "mann", "K": 20, "k_z": 0, "kappa": 0, "C_w": 10, "C_v": 10,
                   "hidden": 6, "slots": 1, "c_w": 0.75},
    "run": {"h": 0.001, "T": 30, "seed": 1, "decimation": 10},
    "metrics": {"band_fraction": 0.001, "band_mode": "relative"}
  })");
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("trajectory columns") {
  const auto tr = short_run();
  const auto cols = trajectory_columns(tr);
  CHECK(cols.front() == "t");
  CHECK(cols[1] == "x1");
  CHECK(std::find(cols.begin(), cols.end(), "m1r_scaled_6") != cols.end());
  CHECK(cols.back() == "drift_offset2");
  const auto frozen = trajectory_columns(short_run(0.0));
  CHECK(std::find(frozen.begin(), frozen.end(), "m1r_scaled_1") == frozen.end());
}

TEST_CASE("scaled memory read columns divide by the write constant") {
  const auto tr = short_run();
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  std::istringstream is(os.str());
  std::string header, line;
  std::getline(is, header);
  for (int i = 0; i < 200; ++i) std::getline(is, line);
  const auto cols = trajectory_columns(tr);
  const auto idx = [&](const std::string& c) { return std::find(cols.begin(), cols.end(), c) - cols.begin(); };
  std::vector<double> vals;
  std::stringstream ls(line);
  for (std::string cell; std::getline(ls, cell, ',');) vals.push_back(std::stod(cell));
  CHECK(vals[idx("m1r_scaled_2")] == doctest::Approx(vals[idx("m1r_2")] / 0.75).epsilon(1e-15));
}

TEST_CASE("trajectory csv round trip preserves metrics") {
  const auto tr = short_run();
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  std::istringstream is(os.str());
  auto back = read_trajectory_csv(is);
  back.event_times = tr.event_times;
  back.horizon = tr.horizon;
  REQUIRE(back.size() == tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(back.samples[i].t == tr.samples[i].t);
    CHECK(back.samples[i].x == tr.samples[i].x);
    CHECK(back.samples[i].u == tr.samples[i].u);
    CHECK(back.samples[i].m1r == tr.samples[i].m1r);
  }
  const SettlingSpec spec{1e-2, BandMode::RelativeToCommand};
  for (const auto& w : event_windows(tr.event_times, tr.horizon)) {
    const auto a = settling_time(tr, w, spec);
    const auto b = settling_time(back, w, spec);
    CHECK(a.has_value() == b.has_value());
    if (a && b) CHECK(std::abs(*a - *b) <= 1e-9);
    CHECK(std::abs(peak_deviation(tr, w) - peak_deviation(back, w)) <= 1e-9);
  }
}

TEST_CASE("metrics csv") {
  const auto tr = short_run();
  std::ostringstream os;
  write_metrics_csv(os, tr, SettlingSpec{});
  const std::string s = os.str();
  CHECK(s.rfind("event_t,window_end,settling_time,peak_deviation\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 3);
}

TEST_CASE("reading a malformed csv fails") {
  std::istringstream empty("");
  CHECK_THROWS_AS(read_trajectory_csv(empty), ConfigError);
  std::istringstream junk("t,x1\n0,abc\n");
  CHECK_THROWS_AS(read_trajectory_csv(junk), ConfigError);
}

TEST_CASE("shipped default config parses to the documented defaults") {
  const auto cfg = parse_experiment(base_config());
  CHECK(cfg.run.controller.gain == 20.0);
  CHECK(cfg.run.controller.rates.c_w == 10.0);
  CHECK(cfg.run.controller.rates.c_v == 10.0);
  CHECK(cfg.run.controller.rates.kappa == 0.0);
  CHECK(cfg.run.controller.memory_gain == 0.0);
  CHECK(cfg.run.hidden_width == 6);
  CHECK(cfg.run.memory_slots == 1);
  CHECK(cfg.run.write_constant == 0.75);
  CHECK(cfg.run.command.value(3.0) == 0.1);
  CHECK(cfg.run.scenario.events().size() == 1);
  CHECK(cfg.run.step == 0.001);
  CHECK(check_assumption(cfg).passed);
}

TEST_CASE("empty config takes every default") {
  const auto cfg = parse_experiment(json::object());
  CHECK(cfg.run.system.name == "example1");
  CHECK(cfg.run.horizon == 30.0);
  CHECK(cfg.assumption.enabled);
}

TEST_CASE("config error paths") {
  auto bad = [](auto mutate) {
    json j = base_config();
    mutate(j);
    INFO(j.dump());
    CHECK_THROWS_AS(parse_experiment(j), ConfigError);
  };
  bad([](json& j) { j["bogus"] = 1; });
  bad([](json& j) { j["controller"]["gainz"] = 1; });
  bad([](json& j) { j["run"]["h"] = 0.0; });
  bad([](json& j) { j["run"]["h"] = -1e-3; });
  bad([](json& j) { j["run"]["T"] = 0.0; });
  bad([](json& j) { j["controller"]["K"] = "twenty"; });
  bad([](json& j) { j["controller"]["mode"] = "frozen"; });
  bad([](json& j) { j["system"]["name"] = "example2"; });
  bad([](json& j) { j["scenario"]["events"].push_back({{"t", 2}, {"kind", "scale"}, {"coefficient", 2}}); });
  bad([](json& j) { j["scenario"]["events"][0]["kind"] = "shift"; });
  bad([](json& j) { j["scenario"]["events"][0]["level"] = 3; });
  bad([](json& j) { j["metrics"]["band_mode"] = "percent"; });
  bad([](json& j) { j["run"]["x0"] = {0.1}; });
}

TEST_CASE("inline polynomial systems") {
  json j = base_config();
  j["system"] = json::parse(R"({"name": "poly", "levels": [
      {"f": [{"coefficient": -0.05, "powers": [1]}], "g": [{"coefficient": 1}],
       "g_bound": [{"coefficient": 1}], "g_lower": 0.5},
      {"f": [{"coefficient": 0.1, "powers": [0, 2]}], "g": [{"coefficient": 2}],
       "g_bound": [{"coefficient": 2}], "g_lower": 0.5}]})");
  const auto cfg = parse_experiment(j);
  CHECK(cfg.run.system.order() == 2);
  const std::vector<double> x{1.0, 3.0};
  CHECK(cfg.run.system.drift[1](x) == doctest::Approx(0.9));
  CHECK(check_assumption(cfg).passed);

  j["system"]["levels"][0]["g"] = json::parse(R"([{"coefficient": 1, "powers": [1]}])");
  const auto sign_change = parse_experiment(j);
  CHECK_FALSE(check_assumption(sign_change).passed);
}

TEST_CASE("loading config files") {
  const auto dir = std::filesystem::temp_directory_path() / "mann_io_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "good.json") << base_config().dump();
    std::ofstream(dir / "broken.json") << "{\"run\": {";
  }
  CHECK(load_experiment(dir / "good.json").run.controller.gain == 20.0);
  CHECK_THROWS_AS(load_experiment(dir / "broken.json"), ConfigError);
  CHECK_THROWS_AS(load_experiment(dir / "missing.json"), ConfigError);
  std::filesystem::remove_all(dir);
}
