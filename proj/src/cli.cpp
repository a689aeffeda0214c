#include "mann/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "mann/config.hpp"
#include "mann/ensemble.hpp"
#include "mann/trajectory_csv.hpp"

namespace mann::cli {

namespace {

std::string describe(const AssumptionViolation& v) {
  std::ostringstream os;
  os << "gain assumption violated at level " << v.level + 1 << " (" << v.reason << "): g = " << v.gain
     << ", bound = " << v.bound << ", g_0 = " << v.lower << " at x = [";
  for (std::size_t i = 0; i < v.sample.size(); ++i) os << (i ? ", " : "") << v.sample[i];
  os << "]";
  return os.str();
}

// Loads the config and applies the assumption check; nullopt after reporting an error.
std::optional<ExperimentConfig> prepare(const std::filesystem::path& path, std::ostream& err) {
  try {
    ExperimentConfig cfg = load_experiment(path);
    if (cfg.assumption.enabled) {
      const AssumptionReport report = check_assumption(cfg);
      if (!report.passed) {
        err << "error: " << describe(*report.first_violation) << '\n';
        return std::nullopt;
      }
      spdlog::debug("gain assumption holds on {} samples", report.samples_checked);
    }
    return cfg;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return std::nullopt;
  }
}

bool ensure_dir(const std::filesystem::path& dir, std::ostream& err) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create output directory " << dir << ": " << ec.message() << '\n';
    return false;
  }
  return true;
}

bool write_file(const std::filesystem::path& path, const std::string& content, std::ostream& err) {
  std::ofstream f(path);
  f << content;
  if (!f) {
    err << "error: cannot write " << path << '\n';
    return false;
  }
  return true;
}

int exit_code_for(RunStatus status) {
  switch (status) {
    case RunStatus::Ok: return kExitOk;
    case RunStatus::Diverged:
    case RunStatus::NumericFailure: return kExitDiverged;
    case RunStatus::ConfigFailure:
    case RunStatus::AssumptionFailure: return kExitConfig;
  }
  return kExitConfig;
}

std::string file_mode_name(Mode m) {
  std::string s(to_string(m));
  for (auto& c : s) {
    if (c == '-') c = '_';
  }
  return s;
}

}  // namespace

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  auto cfg = prepare(opts.config, err);
  if (!cfg) return kExitConfig;
  if (opts.mode) cfg->run.controller.mode = *opts.mode;
  if (opts.seed) cfg->run.seed = *opts.seed;

  spdlog::info("simulating {} mode over T={} s with h={}", to_string(cfg->run.controller.mode),
               cfg->run.horizon, cfg->run.step);
  const RunOutcome outcome = run_one(cfg->run);
  if (outcome.status != RunStatus::Ok) {
    err << "error: " << outcome.diagnostic << '\n';
    return exit_code_for(outcome.status);
  }
  if (!ensure_dir(opts.out_dir, err)) return kExitConfig;

  const Trajectory& traj = *outcome.trajectory;
  std::ostringstream traj_csv;
  write_trajectory_csv(traj_csv, traj);
  std::ostringstream metrics_csv;
  write_metrics_csv(metrics_csv, traj, cfg->metrics);
  if (!write_file(opts.out_dir / "trajectory.csv", traj_csv.str(), err) ||
      !write_file(opts.out_dir / "metrics.csv", metrics_csv.str(), err)) {
    return kExitConfig;
  }
  out << "wrote " << traj.size() << " samples to " << (opts.out_dir / "trajectory.csv").string() << '\n';
  out << metrics_csv.str();
  return kExitOk;
}

int cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err) {
  auto cfg = prepare(opts.config, err);
  if (!cfg) return kExitConfig;
  if (opts.seed) cfg->run.seed = *opts.seed;

  const std::vector<Mode> modes{Mode::Nn, Mode::Mann, Mode::MannFrozen};
  const auto runs = mode_variants(cfg->run, modes);
  spdlog::info("running {} modes with seed {}", runs.size(), cfg->run.seed);
  auto outcomes = run_batch_parallel(runs, opts.threads);

  std::map<Mode, Trajectory> trajectories;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (outcomes[i].status != RunStatus::Ok) {
      err << "error: " << to_string(modes[i]) << ": " << outcomes[i].diagnostic << '\n';
      return exit_code_for(outcomes[i].status);
    }
    trajectories.emplace(modes[i], std::move(*outcomes[i].trajectory));
  }
  if (!ensure_dir(opts.out_dir, err)) return kExitConfig;

  const auto& ref = trajectories.at(Mode::Nn);
  const ComparisonTable table = comparison_table(trajectories, ref.event_times, cfg->metrics);
  for (const auto& [mode, traj] : trajectories) {
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    if (!write_file(opts.out_dir / ("trajectory_" + file_mode_name(mode) + ".csv"), csv.str(), err)) {
      return kExitConfig;
    }
  }
  const std::string summary = table.to_text();
  if (!write_file(opts.out_dir / "comparison.csv", table.to_csv(), err) ||
      !write_file(opts.out_dir / "summary.txt", summary, err)) {
    return kExitConfig;
  }
  out << summary;
  return kExitOk;
}

int cmd_validate(const std::filesystem::path& config, std::ostream& out, std::ostream& err) {
  try {
    const ExperimentConfig cfg = load_experiment(config);
    const AssumptionReport report = check_assumption(cfg);
    if (!report.passed) {
      err << "error: " << describe(*report.first_violation) << '\n';
      return kExitConfig;
    }
    out << "ok: " << config.string() << " (system " << cfg.run.system.name << ", order "
        << cfg.run.system.order() << ", " << cfg.run.scenario.events().size() << " events, gain bounds hold on "
        << report.samples_checked << " samples)\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

int main(int argc, char** argv) {
  if (const char* level = std::getenv("MANN_LOG_LEVEL")) {
    spdlog::set_level(spdlog::level::from_str(level));
  } else {
    spdlog::set_level(spdlog::level::warn);
  }

  CLI::App app{"Backstepping memory-augmented NN adaptive control simulator"};
  app.require_subcommand(1);

  RunOptions run_opts;
  std::uint64_t run_seed = 0;
  std::string run_mode;
  auto* run = app.add_subcommand("run", "simulate one controller mode");
  run->add_option("config", run_opts.config, "experiment JSON file")->required()->check(CLI::ExistingFile);
  auto* mode_opt = run->add_option("--mode", run_mode, "controller mode")
                       ->check(CLI::IsMember({"nn", "mann", "mann-frozen"}));
  run->add_option("--out", run_opts.out_dir, "output directory");
  auto* run_seed_opt = run->add_option("--seed", run_seed, "override run.seed");

  CompareOptions cmp_opts;
  std::uint64_t cmp_seed = 0;
  auto* compare = app.add_subcommand("compare", "run NN, MANN and MANN-frozen and tabulate settling times");
  compare->add_option("config", cmp_opts.config, "experiment JSON file")->required()->check(CLI::ExistingFile);
  compare->add_option("--out", cmp_opts.out_dir, "output directory");
  auto* cmp_seed_opt = compare->add_option("--seed", cmp_seed, "override run.seed");
  compare->add_option("--threads", cmp_opts.threads, "OpenMP threads for the three runs");

  std::filesystem::path validate_path;
  auto* validate = app.add_subcommand("validate", "check a config file and the gain assumption");
  validate->add_option("config", validate_path, "experiment JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) {
    if (*mode_opt) run_opts.mode = parse_mode(run_mode);
    if (*run_seed_opt) run_opts.seed = run_seed;
    return cmd_run(run_opts, std::cout, std::cerr);
  }
  if (*compare) {
    if (*cmp_seed_opt) cmp_opts.seed = cmp_seed;
    return cmd_compare(cmp_opts, std::cout, std::cerr);
  }
  return cmd_validate(validate_path, std::cout, std::cerr);
}

}  // namespace mann::cli
