#pragma once

// Settling time, peak deviation and the NN-vs-MANN comparison table.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mann/simulator.hpp"

namespace mann {

enum class BandMode { RelativeToCommand, Absolute };

struct SettlingSpec {
  double band_fraction = 1e-3;  // 0.1 %
  BandMode band_mode = BandMode::RelativeToCommand;

  void validate() const;
  double band(double y_d) const noexcept;
};

/// Half-open evaluation window [start, end); the final window of a run
/// includes the horizon sample.
struct Window {
  double start = 0.0;
  double end = 0.0;
  bool include_end = false;

  bool contains(double t) const noexcept { return t >= start && (t < end || (include_end && t <= end)); }
};

/// One window per event: from the event to the next event, the last one to the horizon.
std::vector<Window> event_windows(const std::vector<double>& event_times, double horizon);

/// Time after window.start until |y − y_d| enters the band and stays there up
/// to the end of the window. nullopt means it never settles. Throws
/// DimensionError if the window holds no samples.
std::optional<double> settling_time(const Trajectory& traj, const Window& window,
                                    const SettlingSpec& spec);
/// Window from event_t to the next event (or the horizon).
std::optional<double> settling_time(const Trajectory& traj, double event_t, const SettlingSpec& spec);

/// max |y − y_d| over the window.
double peak_deviation(const Trajectory& traj, const Window& window);

/// (t_ref − t) / t_ref · 100.
double reduction_percent(double reference, double value);

struct ComparisonRow {
  Mode mode = Mode::Nn;
  std::vector<std::optional<double>> settling;  // per event
  std::vector<double> peak;                     // per event
  std::vector<std::optional<double>> reduction; // vs the NN row, per event
};

struct ComparisonTable {
  std::vector<double> event_times;
  std::vector<ComparisonRow> rows;

  const ComparisonRow& row(Mode mode) const;
  std::string to_csv() const;
  std::string to_text() const;
};

/// Rows in the order NN, MANN, MANN-frozen (whichever are present). The NN
/// trajectory is required as the reduction reference.
ComparisonTable comparison_table(const std::map<Mode, Trajectory>& trajectories,
                                 const std::vector<double>& event_times, const SettlingSpec& spec);

}  // namespace mann
