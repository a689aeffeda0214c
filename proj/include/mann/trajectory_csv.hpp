#pragma once

// CSV emission for trajectories and per-event metrics. Numbers are written
// with 17 significant digits so a read-back reproduces them exactly.
//
// trajectory.csv columns, n = system order, N = hidden width:
//   t, x1..xn, y_d, e1..en, xd1..xdn, u, w_norm1..n, v_norm1..n, mu_norm1..n,
//   q1_1..q1_N, m1r_1..m1r_N, [m1r_scaled_1..m1r_scaled_N when c_w > 0],
//   drift_scale1..n, drift_offset1..n

#include <iosfwd>
#include <string>
#include <vector>

#include "mann/metrics.hpp"

namespace mann {

std::vector<std::string> trajectory_columns(const Trajectory& traj);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Reads samples back. Event times, horizon and mode are not part of the
/// file and must be filled in by the caller. Throws ConfigError on a bad file.
Trajectory read_trajectory_csv(std::istream& in);

/// One row per event window: event_t, window_end, settling_time, peak_deviation.
void write_metrics_csv(std::ostream& out, const Trajectory& traj, const SettlingSpec& spec);

std::string format_double(double v);

}  // namespace mann
