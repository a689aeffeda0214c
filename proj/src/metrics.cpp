#include "mann/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mann {

void SettlingSpec::validate() const {
  if (!(band_fraction > 0.0) || !std::isfinite(band_fraction)) {
    throw ConfigError("settling band fraction must be positive");
  }
}

double SettlingSpec::band(double y_d) const noexcept {
  return band_mode == BandMode::RelativeToCommand ? band_fraction * std::abs(y_d) : band_fraction;
}

std::vector<Window> event_windows(const std::vector<double>& event_times, double horizon) {
  std::vector<Window> out;
  for (std::size_t i = 0; i < event_times.size(); ++i) {
    const bool last = i + 1 == event_times.size();
    out.push_back({event_times[i], last ? horizon : event_times[i + 1], last});
  }
  return out;
}

std::optional<double> settling_time(const Trajectory& traj, const Window& window,
                                    const SettlingSpec& spec) {
  std::optional<double> first_in_window;
  std::optional<double> settled_from;
  bool last_in_band = false;
  for (const auto& smp : traj.samples) {
    if (!window.contains(smp.t)) continue;
    if (!first_in_window) first_in_window = smp.t;
    const bool in_band = std::abs(smp.tracking_error()) <= spec.band(smp.y_d);
    if (in_band && !last_in_band) settled_from = smp.t;
    last_in_band = in_band;
  }
  if (!first_in_window) throw DimensionError("settling_time: window contains no samples");
  if (!last_in_band) return std::nullopt;
  return *settled_from - window.start;
}

std::optional<double> settling_time(const Trajectory& traj, double event_t, const SettlingSpec& spec) {
  for (const auto& w : event_windows(traj.event_times, traj.horizon)) {
    if (w.start == event_t) return settling_time(traj, w, spec);
  }
  double end = traj.horizon;
  for (double te : traj.event_times) {
    if (te > event_t) {
      end = te;
      break;
    }
  }
  return settling_time(traj, Window{event_t, end, end == traj.horizon}, spec);
}

double peak_deviation(const Trajectory& traj, const Window& window) {
  bool any = false;
  double peak = 0.0;
  for (const auto& smp : traj.samples) {
    if (!window.contains(smp.t)) continue;
    any = true;
    peak = std::max(peak, std::abs(smp.tracking_error()));
  }
  if (!any) throw DimensionError("peak_deviation: window contains no samples");
  return peak;
}

double reduction_percent(double reference, double value) {
  return (reference - value) / reference * 100.0;
}

const ComparisonRow& ComparisonTable::row(Mode mode) const {
  for (const auto& r : rows) {
    if (r.mode == mode) return r;
  }
  throw ConfigError("comparison table has no row for mode " + std::string(to_string(mode)));
}

namespace {

std::string fmt_opt(const std::optional<double>& v, int precision) {
  if (!v) return "not settled";
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(precision);
  os << *v;
  return os.str();
}

std::string fmt_round_trip(const std::optional<double>& v) {
  if (!v) return "not_settled";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

}  // namespace

std::string ComparisonTable::to_csv() const {
  std::ostringstream os;
  os << "mode,event_t,settling_time,peak_deviation,reduction_percent\n";
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < event_times.size(); ++j) {
      os << to_string(r.mode) << ',' << fmt_round_trip(event_times[j]) << ','
         << fmt_round_trip(r.settling[j]) << ',' << fmt_round_trip(r.peak[j]) << ','
         << (r.reduction[j] ? fmt_round_trip(r.reduction[j]) : std::string()) << '\n';
    }
  }
  return os.str();
}

std::string ComparisonTable::to_text() const {
  std::ostringstream os;
  constexpr int kLabel = 22;
  constexpr int kCol = 16;
  auto pad = [](std::string s, int w) {
    if (static_cast<int>(s.size()) < w) s.append(w - s.size(), ' ');
    return s;
  };
  os << "Time to settle [s]\n" << pad("controller", kLabel);
  for (double te : event_times) os << pad("t=" + fmt_opt(te, 2), kCol);
  os << '\n';
  for (const auto& r : rows) {
    os << pad(std::string(to_string(r.mode)), kLabel);
    for (const auto& s : r.settling) os << pad(fmt_opt(s, 2), kCol);
    os << '\n';
  }
  for (const auto& r : rows) {
    if (r.mode == Mode::Nn) continue;
    os << pad("reduction " + std::string(to_string(r.mode)), kLabel);
    for (const auto& red : r.reduction) os << pad(red ? fmt_opt(red, 0) + " %" : "-", kCol);
    os << '\n';
  }
  os << "Peak |y - y_d|\n";
  for (const auto& r : rows) {
    os << pad(std::string(to_string(r.mode)), kLabel);
    for (double p : r.peak) {
      std::ostringstream cell;
      cell.precision(4);
      cell << std::scientific << p;
      os << pad(cell.str(), kCol);
    }
    os << '\n';
  }
  return os.str();
}

ComparisonTable comparison_table(const std::map<Mode, Trajectory>& trajectories,
                                 const std::vector<double>& event_times, const SettlingSpec& spec) {
  spec.validate();
  const auto nn = trajectories.find(Mode::Nn);
  if (nn == trajectories.end()) throw ConfigError("comparison table: NN trajectory missing");

  ComparisonTable table;
  table.event_times = event_times;
  const double horizon = nn->second.horizon;
  const auto windows = event_windows(event_times, horizon);

  for (Mode mode : {Mode::Nn, Mode::Mann, Mode::MannFrozen}) {
    const auto it = trajectories.find(mode);
    if (it == trajectories.end()) continue;
    ComparisonRow row;
    row.mode = mode;
    for (const auto& w : windows) {
      row.settling.push_back(settling_time(it->second, w, spec));
      row.peak.push_back(peak_deviation(it->second, w));
    }
    table.rows.push_back(std::move(row));
  }
  const auto& ref = table.rows.front();
  for (auto& row : table.rows) {
    for (std::size_t j = 0; j < windows.size(); ++j) {
      if (ref.settling[j] && row.settling[j] && *ref.settling[j] > 0.0) {
        row.reduction.push_back(reduction_percent(*ref.settling[j], *row.settling[j]));
      } else {
        row.reduction.push_back(std::nullopt);
      }
    }
  }
  return table;
}

}  // namespace mann
