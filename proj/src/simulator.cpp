#include "mann/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mann {

void RunConfig::validate() const {
  system.validate();
  controller.validate();
  const int n = system.order();
  if (command.max_order() < n) {
    throw ConfigError("command signal must supply derivatives up to order " + std::to_string(n));
  }
  for (const auto& ev : scenario.events()) {
    if (ev.level && *ev.level >= n) {
      throw ConfigError("scenario event at t=" + std::to_string(ev.time) + " targets level " +
                        std::to_string(*ev.level + 1) + " of a system of order " + std::to_string(n));
    }
  }
  if (hidden_width < 1) throw ConfigError("hidden width N must be >= 1");
  if (memory_slots < 1) throw ConfigError("memory slot count n_s must be >= 1");
  if (!(write_constant >= 0.0 && write_constant <= 1.0)) throw ConfigError("c_w must lie in [0, 1]");
  if (!(init_range >= 0.0) || !std::isfinite(init_range)) throw ConfigError("init range must be >= 0");
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("step h must be positive");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon T must be >= 0");
  if (decimation < 1) throw ConfigError("decimation must be >= 1");
  if (!(blowup_guard > 0.0)) throw ConfigError("blow-up guard must be positive");
  if (x0) {
    if (x0->size() != n) throw ConfigError("x0 length must equal system order");
    if (!x0->allFinite()) throw ConfigError("x0 must be finite");
  }
}

double RunConfig::effective_write_constant() const noexcept {
  return controller.mode == Mode::MannFrozen ? 0.0 : write_constant;
}

bool ClosedLoopState::operator==(const ClosedLoopState& other) const {
  if (t != other.t || x != other.x || nns != other.nns || mems.size() != other.mems.size()) {
    return false;
  }
  for (std::size_t i = 0; i < mems.size(); ++i) {
    if (mems[i].mu != other.mems[i].mu || mems[i].c_w != other.mems[i].c_w) return false;
  }
  return true;
}

ClosedLoopState init_closed_loop(const RunConfig& run) {
  run.validate();
  const int n = run.system.order();
  ClosedLoopState s;
  s.x = run.x0 ? *run.x0 : Vec::Zero(n);
  std::mt19937_64 rng(run.seed);
  for (int k = 1; k <= n; ++k) {
    s.nns.push_back(
        TwoLayerNN::seeded(level_input_dim(k, run.hidden_width), run.hidden_width, rng, run.init_range));
    s.mems.push_back(MemoryState::zeros(run.hidden_width, run.memory_slots, run.write_constant));
  }
  return s;
}

int packed_size(const ClosedLoopState& s) {
  auto size = static_cast<int>(s.x.size());
  for (const auto& nn : s.nns) size += nn.parameter_count();
  for (const auto& m : s.mems) size += static_cast<int>(m.mu.size());
  return size;
}

Vec pack(const ClosedLoopState& s) {
  Vec v(packed_size(s));
  Eigen::Index pos = 0;
  auto put = [&](const double* data, Eigen::Index len) {
    std::copy(data, data + len, v.data() + pos);
    pos += len;
  };
  put(s.x.data(), s.x.size());
  for (std::size_t k = 0; k < s.nns.size(); ++k) {
    put(s.nns[k].v_aug.data(), s.nns[k].v_aug.size());
    put(s.nns[k].w_aug.data(), s.nns[k].w_aug.size());
    put(s.mems[k].mu.data(), s.mems[k].mu.size());
  }
  return v;
}

ClosedLoopState unpack(const Vec& v, const ClosedLoopState& tmpl) {
  if (v.size() != packed_size(tmpl)) {
    throw DimensionError("unpack: vector length " + std::to_string(v.size()) + " != layout size " +
                         std::to_string(packed_size(tmpl)));
  }
  ClosedLoopState s = tmpl;
  Eigen::Index pos = 0;
  auto take = [&](double* data, Eigen::Index len) {
    std::copy(v.data() + pos, v.data() + pos + len, data);
    pos += len;
  };
  take(s.x.data(), s.x.size());
  for (std::size_t k = 0; k < s.nns.size(); ++k) {
    take(s.nns[k].v_aug.data(), s.nns[k].v_aug.size());
    take(s.nns[k].w_aug.data(), s.nns[k].w_aug.size());
    take(s.mems[k].mu.data(), s.mems[k].mu.size());
  }
  return s;
}

namespace {

// Derivative of the packed state written in pack() order.
Vec derivative_of(double t, const ClosedLoopState& s, const RunConfig& run,
                  const ControllerConfig& cfg, std::span<const DriftModifier> modifiers) {
  const int n = run.system.order();
  const ControlStepOutput ctl =
      control_step(t, s.x, run.system.bounds, run.command, s.nns, s.mems, cfg);

  Vec d(packed_size(s));
  d.head(n) = state_derivative(run.system, modifiers, t, s.x, ctl.u);

  const bool write_memory = cfg.mode != Mode::Nn && !run.pin_memory;
  const double c_w = run.effective_write_constant();
  Eigen::Index pos = n;
  for (int i = 0; i < n; ++i) {
    const auto& nn = s.nns[i];
    const auto& lv = ctl.levels[i];
    const WeightDerivatives wd = weight_derivatives(nn, lv.hidden, ctl.e[i], cfg.rates_for(i));
    d.segment(pos, wd.dv_aug.size()) = wd.dv_aug.reshaped();
    pos += wd.dv_aug.size();
    d.segment(pos, wd.dw_aug.size()) = wd.dw_aug;
    pos += wd.dw_aug.size();

    const auto mem_size = s.mems[i].mu.size();
    if (write_memory) {
      const auto width = nn.hidden_width();
      const Mat dmu = write_derivative_with(s.mems[i], lv.memory.z, lv.hidden.q,
                                            nn.w_aug.head(width), ctl.e[i], c_w);
      d.segment(pos, mem_size) = dmu.reshaped();
    } else {
      d.segment(pos, mem_size).setZero();
    }
    pos += mem_size;
  }
  return d;
}

TrajectorySample make_sample(double t, const ClosedLoopState& s, const RunConfig& run,
                             const ControllerConfig& cfg) {
  const int n = run.system.order();
  const ControlStepOutput ctl =
      control_step(t, s.x, run.system.bounds, run.command, s.nns, s.mems, cfg);
  TrajectorySample smp;
  smp.t = t;
  smp.x = s.x;
  smp.y_d = ctl.x_d[0];
  smp.e = ctl.e;
  smp.x_d = ctl.x_d;
  smp.u = ctl.u;
  smp.w_norm.resize(n);
  smp.v_norm.resize(n);
  smp.mu_norm.resize(n);
  smp.drift_scale.resize(n);
  smp.drift_offset.resize(n);
  for (int i = 0; i < n; ++i) {
    smp.w_norm[i] = s.nns[i].w_aug.norm();
    smp.v_norm[i] = s.nns[i].v_aug.norm();
    smp.mu_norm[i] = cfg.mode == Mode::Nn ? 0.0 : s.mems[i].mu.norm();
    const DriftModifier m = run.scenario.modifier(i, t);
    smp.drift_scale[i] = m.scale;
    smp.drift_offset[i] = m.offset;
  }
  smp.q1 = ctl.levels[0].hidden.q;
  smp.m1r = ctl.levels[0].memory.m_r;
  return smp;
}

void check_guard(const TrajectorySample& smp, double guard) {
  auto check = [&](const Vec& v, const char* name) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i]) || std::abs(v[i]) > guard) {
        throw DivergenceError(smp.t, std::string(name) + "[" + std::to_string(i + 1) + "]", v[i]);
      }
    }
  };
  check(smp.x, "x");
  check(smp.w_norm, "|W|");
  check(smp.v_norm, "|V|");
  check(smp.mu_norm, "|mu|");
  if (!std::isfinite(smp.u) || std::abs(smp.u) > guard) throw DivergenceError(smp.t, "u", smp.u);
}

}  // namespace

Vec closed_loop_derivative(double t, const ClosedLoopState& s, const RunConfig& run) {
  const ControllerConfig cfg = run.controller.resolved();
  const auto mods = run.scenario.modifiers(run.system.order(), t);
  return derivative_of(t, s, run, cfg, mods);
}

Trajectory simulate(const RunConfig& run) {
  ClosedLoopState state = init_closed_loop(run);
  const ControllerConfig cfg = run.controller.resolved();
  const int n = run.system.order();

  Trajectory traj;
  traj.order = n;
  traj.hidden_width = run.hidden_width;
  traj.mode = cfg.mode;
  traj.write_constant = run.effective_write_constant();
  traj.horizon = run.horizon;
  for (double te : run.scenario.event_times()) {
    if (te <= run.horizon) traj.event_times.push_back(te);
  }

  traj.samples.push_back(make_sample(0.0, state, run, cfg));
  check_guard(traj.samples.back(), run.blowup_guard);

  std::vector<double> breakpoints;
  for (double te : traj.event_times) {
    if (te > 0.0 && te < run.horizon) breakpoints.push_back(te);
  }
  breakpoints.push_back(run.horizon);

  const double h = run.step;
  Vec flat = pack(state);
  long long step_count = 0;
  double seg_start = 0.0;
  for (double seg_end : breakpoints) {
    const double length = seg_end - seg_start;
    if (length <= 0.0) continue;
    // Whole steps of h; a remainder shorter than 1e-6 h is absorbed into the last step.
    auto steps = static_cast<long long>(std::floor(length / h));
    if (length - static_cast<double>(steps) * h > 1e-6 * h) ++steps;
    steps = std::max<long long>(steps, 1);

    const auto mods = run.scenario.modifiers(n, seg_start);
    const StateDerivative deriv = [&](double t, const Vec& v) {
      return derivative_of(t, unpack(v, state), run, cfg, mods);
    };
    for (long long s = 0; s < steps; ++s) {
      const double t0 = seg_start + static_cast<double>(s) * h;
      const bool last = s + 1 == steps;
      const double t1 = last ? seg_end : seg_start + static_cast<double>(s + 1) * h;
      flat = rk4_step(deriv, t0, flat, t1 - t0);
      ++step_count;
      const bool at_horizon = last && seg_end == run.horizon;
      if (step_count % run.decimation == 0 || at_horizon) {
        state = unpack(flat, state);
        state.t = t1;
        traj.samples.push_back(make_sample(t1, state, run, cfg));
        check_guard(traj.samples.back(), run.blowup_guard);
      }
    }
    seg_start = seg_end;
  }
  return traj;
}

std::vector<double> true_h_series(const Trajectory& traj, const StrictFeedbackSystem& sys, int level) {
  const auto m = traj.samples.size();
  if (m < 2) throw DimensionError("true_h_series: need at least two samples");
  if (level < 1 || level > traj.order) throw DimensionError("true_h_series: level out of range");
  const int i = level - 1;

  auto ddt = [&](std::size_t j, auto&& value) {
    const auto lo = j == 0 ? 0 : j - 1;
    const auto hi = j + 1 == m ? j : j + 1;
    return (value(traj.samples[hi]) - value(traj.samples[lo])) /
           (traj.samples[hi].t - traj.samples[lo].t);
  };

  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto& smp = traj.samples[j];
    TrueHInputs in;
    in.level = level;
    in.x = smp.x;
    in.e = smp.e[i];
    in.x_d = smp.x_d[i];
    in.x_d_dot = ddt(j, [i](const TrajectorySample& s) { return s.x_d[i]; });
    if (level >= 2) in.x_prev_dot = ddt(j, [i](const TrajectorySample& s) { return s.x[i - 1]; });
    in.modifier = {smp.drift_scale[i], smp.drift_offset[i]};
    out[j] = true_h(sys, in);
  }
  return out;
}

}  // namespace mann
