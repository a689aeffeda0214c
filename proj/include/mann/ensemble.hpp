#pragma once

// Batches of independent closed-loop runs. Each run is a single-threaded ODE
// integration; the batch is parallel across runs with OpenMP.
// run_batch_serial is the reference the parallel path is tested against.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mann/simulator.hpp"

namespace mann {

enum class RunStatus { Ok, Diverged, NumericFailure, ConfigFailure, AssumptionFailure };

std::string_view to_string(RunStatus status) noexcept;

struct RunOutcome {
  RunStatus status = RunStatus::Ok;
  std::optional<Trajectory> trajectory;
  std::string diagnostic;
};

/// Runs simulate() and converts library errors into a status.
RunOutcome run_one(const RunConfig& run);

std::vector<RunOutcome> run_batch_serial(std::span<const RunConfig> runs);
/// threads <= 0 uses the OpenMP default.
std::vector<RunOutcome> run_batch_parallel(std::span<const RunConfig> runs, int threads = 0);

/// Copies of base differing only in controller mode (same seed, so identical initial weights).
std::vector<RunConfig> mode_variants(const RunConfig& base, std::span<const Mode> modes);
std::vector<RunConfig> seed_variants(const RunConfig& base, std::span<const std::uint64_t> seeds);

}  // namespace mann
