#pragma once

// Joint closed-loop ODE: plant state, every level's network weights and
// every level's memory, integrated with fixed RK4 steps that are split at
// scenario event times.

#include <cstdint>
#include <optional>
#include <vector>

#include "mann/controller.hpp"

namespace mann {

struct RunConfig {
  StrictFeedbackSystem system = make_example1();
  ScenarioScript scenario;
  CommandSignal command = CommandSignal::constant(0.1, 2);
  ControllerConfig controller;

  int hidden_width = 6;           // N
  int memory_slots = 1;           // n_s
  double write_constant = kDefaultWriteConstant;  // c_w
  double init_range = 0.5;        // V_aug ~ U[-range, range]
  bool pin_memory = false;        // hold μ at its initial value (oracle runs only)

  double step = 1e-3;   // h [s]
  double horizon = 30;  // T [s]
  int decimation = 10;  // record every k-th step
  std::uint64_t seed = 1;
  std::optional<Vec> x0;  // defaults to the zero vector
  double blowup_guard = 1e6;

  /// Throws ConfigError on any invalid setting.
  void validate() const;
  /// Write constant actually used by the write law (0 in MannFrozen mode).
  double effective_write_constant() const noexcept;
};

struct ClosedLoopState {
  double t = 0.0;
  Vec x;
  std::vector<TwoLayerNN> nns;
  std::vector<MemoryState> mems;

  bool operator==(const ClosedLoopState& other) const;
};

ClosedLoopState init_closed_loop(const RunConfig& run);

/// Layout: x, then per level V_aug (column-major), W_aug, μ (column-major).
Vec pack(const ClosedLoopState& s);
/// Inverse of pack; shapes (and c_w, t) are taken from tmpl. Throws DimensionError on length mismatch.
ClosedLoopState unpack(const Vec& v, const ClosedLoopState& tmpl);
int packed_size(const ClosedLoopState& s);

/// d/dt of pack(s), with drift modifiers taken from the scenario at time t.
Vec closed_loop_derivative(double t, const ClosedLoopState& s, const RunConfig& run);

struct TrajectorySample {
  double t = 0.0;
  Vec x;
  double y_d = 0.0;
  Vec e;
  Vec x_d;
  double u = 0.0;
  Vec w_norm;   // ‖Ŵ_k‖_F per level
  Vec v_norm;   // ‖V̂_k‖_F per level
  Vec mu_norm;  // ‖μ_k‖_F per level
  Vec q1;       // level-1 hidden output
  Vec m1r;      // level-1 memory read M_{1,r}
  Vec drift_scale;
  Vec drift_offset;

  double y() const { return x[0]; }
  double tracking_error() const { return x[0] - y_d; }
};

struct Trajectory {
  int order = 0;
  int hidden_width = 0;
  Mode mode = Mode::Mann;
  double write_constant = 0.0;  // effective c_w of the run
  std::vector<double> event_times;
  double horizon = 0.0;
  std::vector<TrajectorySample> samples;

  std::size_t size() const noexcept { return samples.size(); }
};

/// Throws DivergenceError when a recorded norm exceeds the blow-up guard and
/// NumericError if the derivative goes non-finite.
Trajectory simulate(const RunConfig& run);

/// True h_k along a recorded trajectory, derivatives by finite differences
/// of the samples (central inside, one-sided at the ends). Level is 1-based.
std::vector<double> true_h_series(const Trajectory& traj, const StrictFeedbackSystem& sys, int level);

}  // namespace mann
