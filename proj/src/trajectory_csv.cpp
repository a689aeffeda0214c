#include "mann/trajectory_csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace mann {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void indexed(std::vector<std::string>& cols, const std::string& prefix, int count) {
  for (int i = 1; i <= count; ++i) cols.push_back(prefix + std::to_string(i));
}

}  // namespace

std::vector<std::string> trajectory_columns(const Trajectory& traj) {
  const int n = traj.order;
  const int width = traj.hidden_width;
  std::vector<std::string> cols{"t"};
  indexed(cols, "x", n);
  cols.emplace_back("y_d");
  indexed(cols, "e", n);
  indexed(cols, "xd", n);
  cols.emplace_back("u");
  indexed(cols, "w_norm", n);
  indexed(cols, "v_norm", n);
  indexed(cols, "mu_norm", n);
  indexed(cols, "q1_", width);
  indexed(cols, "m1r_", width);
  if (traj.write_constant > 0.0) indexed(cols, "m1r_scaled_", width);
  indexed(cols, "drift_scale", n);
  indexed(cols, "drift_offset", n);
  return cols;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const auto cols = trajectory_columns(traj);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& s : traj.samples) {
    std::string line = format_double(s.t);
    auto put = [&line](double v) {
      line += ',';
      line += format_double(v);
    };
    auto put_all = [&put](const Vec& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i) put(v[i]);
    };
    put_all(s.x);
    put(s.y_d);
    put_all(s.e);
    put_all(s.x_d);
    put(s.u);
    put_all(s.w_norm);
    put_all(s.v_norm);
    put_all(s.mu_norm);
    put_all(s.q1);
    put_all(s.m1r);
    if (traj.write_constant > 0.0) put_all(s.m1r / traj.write_constant);
    put_all(s.drift_scale);
    put_all(s.drift_offset);
    out << line << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("trajectory csv: empty file");
  std::vector<std::string> cols;
  {
    std::stringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < cols.size(); ++i) index[cols[i]] = i;

  auto count_prefix = [&](const std::string& prefix) {
    int k = 0;
    while (index.contains(prefix + std::to_string(k + 1))) ++k;
    return k;
  };
  Trajectory traj;
  traj.order = count_prefix("x");
  traj.hidden_width = count_prefix("q1_");
  if (traj.order == 0 || !index.contains("t") || !index.contains("y_d") || !index.contains("u")) {
    throw ConfigError("trajectory csv: header is missing required columns");
  }

  std::string line;
  std::vector<double> row;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    row.clear();
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p <= end) {
      const char* comma = std::find(p, end, ',');
      double v = 0.0;
      const auto res = std::from_chars(p, comma, v);
      if (res.ec != std::errc()) throw ConfigError("trajectory csv: bad number in '" + line + "'");
      row.push_back(v);
      p = comma + 1;
    }
    if (row.size() != cols.size()) throw ConfigError("trajectory csv: ragged row");

    auto col = [&](const std::string& name) { return row[index.at(name)]; };
    auto vec = [&](const std::string& prefix, int count) {
      Vec v(count);
      for (int i = 0; i < count; ++i) v[i] = col(prefix + std::to_string(i + 1));
      return v;
    };
    TrajectorySample s;
    const int n = traj.order;
    const int width = traj.hidden_width;
    s.t = col("t");
    s.x = vec("x", n);
    s.y_d = col("y_d");
    s.e = vec("e", n);
    s.x_d = vec("xd", n);
    s.u = col("u");
    s.w_norm = vec("w_norm", n);
    s.v_norm = vec("v_norm", n);
    s.mu_norm = vec("mu_norm", n);
    s.q1 = vec("q1_", width);
    s.m1r = vec("m1r_", width);
    s.drift_scale = vec("drift_scale", n);
    s.drift_offset = vec("drift_offset", n);
    traj.samples.push_back(std::move(s));
  }
  if (!traj.samples.empty()) traj.horizon = traj.samples.back().t;
  return traj;
}

void write_metrics_csv(std::ostream& out, const Trajectory& traj, const SettlingSpec& spec) {
  out << "event_t,window_end,settling_time,peak_deviation\n";
  for (const auto& w : event_windows(traj.event_times, traj.horizon)) {
    const auto settle = settling_time(traj, w, spec);
    out << format_double(w.start) << ',' << format_double(w.end) << ','
        << (settle ? format_double(*settle) : std::string("not_settled")) << ','
        << format_double(peak_deviation(traj, w)) << '\n';
  }
}

}  // namespace mann
