#include "mann/ensemble.hpp"

#include <omp.h>

namespace mann {

std::string_view to_string(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::Ok: return "ok";
    case RunStatus::Diverged: return "diverged";
    case RunStatus::NumericFailure: return "numeric-failure";
    case RunStatus::ConfigFailure: return "config-failure";
    case RunStatus::AssumptionFailure: return "assumption-failure";
  }
  return "unknown";
}

RunOutcome run_one(const RunConfig& run) {
  RunOutcome out;
  try {
    out.trajectory = simulate(run);
  } catch (const DivergenceError& e) {
    out.status = RunStatus::Diverged;
    out.diagnostic = e.what();
  } catch (const NumericError& e) {
    out.status = RunStatus::NumericFailure;
    out.diagnostic = e.what();
  } catch (const AssumptionError& e) {
    out.status = RunStatus::AssumptionFailure;
    out.diagnostic = e.what();
  } catch (const Error& e) {
    out.status = RunStatus::ConfigFailure;
    out.diagnostic = e.what();
  }
  return out;
}

std::vector<RunOutcome> run_batch_serial(std::span<const RunConfig> runs) {
  std::vector<RunOutcome> out;
  out.reserve(runs.size());
  for (const auto& run : runs) out.push_back(run_one(run));
  return out;
}

std::vector<RunOutcome> run_batch_parallel(std::span<const RunConfig> runs, int threads) {
  std::vector<RunOutcome> out(runs.size());
  const auto count = static_cast<long long>(runs.size());
  const int team = threads > 0 ? threads : omp_get_max_threads();
  // run_one never throws library errors; anything else would terminate inside the region.
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
  for (long long i = 0; i < count; ++i) out[i] = run_one(runs[i]);
  return out;
}

std::vector<RunConfig> mode_variants(const RunConfig& base, std::span<const Mode> modes) {
  std::vector<RunConfig> out;
  for (Mode m : modes) {
    RunConfig run = base;
    run.controller.mode = m;
    out.push_back(std::move(run));
  }
  return out;
}

std::vector<RunConfig> seed_variants(const RunConfig& base, std::span<const std::uint64_t> seeds) {
  std::vector<RunConfig> out;
  for (auto s : seeds) {
    RunConfig run = base;
    run.seed = s;
    out.push_back(std::move(run));
  }
  return out;
}

}  // namespace mann
