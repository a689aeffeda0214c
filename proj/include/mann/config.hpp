#pragma once

// JSON experiment files. Every section is optional; unknown keys are rejected.
//
//   {
//     "system":     {"name": "example1"}  or  {"name": "...", "levels": [
//                     {"f": [{"coefficient": c, "powers": [p1, ..]}], "g": [..],
//                      "g_bound": [..], "g_lower": 0.5}, ...]},
//     "scenario":   {"events": [{"t": 5, "level": "all" | 1-based int,
//                                "kind": "scale" | "offset", "coefficient": 20}]},
//     "command":    {"constant": 0.1}  or  {"sine": {"offset", "amplitude", "omega"}},
//     "controller": {"mode", "K", "k_z", "kappa", "C_w", "C_v", "stability_preset",
//                    "hidden", "slots", "c_w", "init_range",
//                    "per_level": [{"level", "C_w", "C_v", "kappa"}]},
//     "run":        {"h", "T", "seed", "decimation", "x0", "blowup_guard"},
//     "metrics":    {"band_fraction", "band_mode": "relative" | "absolute"},
//     "assumption_check": {"enabled", "box": [[lo, hi], ..], "samples", "seed"}
//   }

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mann/metrics.hpp"
#include "mann/simulator.hpp"

namespace mann {

struct AssumptionCheck {
  bool enabled = true;
  std::vector<std::pair<double, double>> box;  // defaults to [-2, 2] per state
  int samples = 1000;
  std::uint64_t seed = 7;
};

struct ExperimentConfig {
  RunConfig run;
  SettlingSpec metrics;
  AssumptionCheck assumption;
};

/// Throws ConfigError with the offending key path.
ExperimentConfig parse_experiment(const nlohmann::json& doc);
/// Throws ConfigError if the file is unreadable or malformed.
ExperimentConfig load_experiment(const std::filesystem::path& path);

/// Runs the sampled assumption check configured in cfg.
AssumptionReport check_assumption(const ExperimentConfig& cfg);

}  // namespace mann
