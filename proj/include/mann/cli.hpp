#pragma once

// Subcommands behind the mannsim executable. Exit codes: 0 success,
// 1 configuration or assumption error, 2 divergence during simulation.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "mann/controller.hpp"

namespace mann::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitDiverged = 2;

struct RunOptions {
  std::filesystem::path config;
  std::optional<Mode> mode;  // overrides controller.mode
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
};

/// Simulates one mode; writes trajectory.csv and metrics.csv into out_dir.
int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);

struct CompareOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 0;  // 0: OpenMP default
};

/// Runs NN, MANN and MANN-frozen with one seed; writes trajectory_<mode>.csv,
/// comparison.csv and summary.txt, and prints the summary table.
int cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err);

/// Schema check plus the sampled gain-bound check.
int cmd_validate(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int main(int argc, char** argv);

}  // namespace mann::cli
