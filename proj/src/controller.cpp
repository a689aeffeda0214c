#include "mann/controller.hpp"

#include <cmath>
#include <string>

namespace mann {

std::string_view to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::Mann: return "mann";
    case Mode::Nn: return "nn";
    case Mode::MannFrozen: return "mann-frozen";
  }
  return "unknown";
}

Mode parse_mode(std::string_view text) {
  if (text == "mann") return Mode::Mann;
  if (text == "nn") return Mode::Nn;
  if (text == "mann-frozen" || text == "mann_frozen") return Mode::MannFrozen;
  throw ConfigError("unknown controller mode '" + std::string(text) + "'");
}

void ControllerConfig::validate() const {
  if (!(gain > 0.0) || !std::isfinite(gain)) throw ConfigError("controller: K must be positive");
  if (!(memory_gain >= 0.0) || !std::isfinite(memory_gain)) {
    throw ConfigError("controller: k_z must be >= 0");
  }
  rates.validate();
  for (const auto& r : level_rates) {
    if (r) r->validate();
  }
}

ControllerConfig ControllerConfig::resolved() const {
  ControllerConfig out = *this;
  if (stability_preset) {
    out.memory_gain = gain;
    out.rates.kappa = 1.0 / std::sqrt(gain);
    for (auto& r : out.level_rates) {
      if (r) r->kappa = out.rates.kappa;
    }
    out.stability_preset = false;
  }
  return out;
}

const AdaptationRates& ControllerConfig::rates_for(int level) const {
  if (level >= 0 && level < static_cast<int>(level_rates.size()) && level_rates[level]) {
    return *level_rates[level];
  }
  return rates;
}

namespace {

// 𝐠_k evaluated on (x₁..x_{k−1}, v); level is 1-based.
double bound_with_last(const GainBounds& bounds, int level, const Vec& x, double v,
                       std::vector<double>& scratch) {
  scratch.assign(x.data(), x.data() + level);
  scratch[level - 1] = v;
  return bounds.bound[level - 1](scratch);
}

}  // namespace

double gain_K(int level, double e_k, double x_kd, const Vec& x, const GainBounds& bounds,
              const TwoLayerNN& nn, const HiddenLayerEval& ev, double memory_norm,
              const ControllerConfig& cfg) {
  std::vector<double> scratch;
  const double bound_integral = quad01(
      [&](double theta) { return bound_with_last(bounds, level, x, theta * e_k + x_kd, scratch); },
      QuadWeight::Theta);

  // ‖x_e (Ŵᵀσ̂′)‖_F² factors into ‖x_e‖² ‖σ̂′ᵀŴ‖².
  const Vec w_sigma_prime = ev.sigma_prime.transpose() * nn.w_aug;
  const double outer_term = ev.x_e.squaredNorm() * w_sigma_prime.squaredNorm();
  const double inner_term = (ev.sigma_prime * ev.z).squaredNorm();

  const double k = cfg.gain * (1.0 + bound_integral) +
                   cfg.memory_gain * nn.w_aug.norm() * memory_norm +
                   cfg.gain * (outer_term + inner_term);
  if (!std::isfinite(k)) throw NumericError("gain_K: level " + std::to_string(level), 0.0);
  return k;
}

double gain_K(int level, double e_k, double x_kd, const Vec& x, const GainBounds& bounds,
              const TwoLayerNN& nn, const Vec& x_tilde, const MemoryState* mem,
              const ControllerConfig& cfg) {
  return gain_K(level, e_k, x_kd, x, bounds, nn, evaluate_hidden(nn, x_tilde),
                mem ? mem->mu.norm() : 0.0, cfg);
}

ControlStepOutput control_step(double t, const Vec& x, const GainBounds& bounds,
                               const CommandSignal& cmd, std::span<const TwoLayerNN> nns,
                               std::span<const MemoryState> mems, const ControllerConfig& cfg) {
  const int n = bounds.order();
  if (x.size() != n) throw DimensionError("control_step: state length != system order");
  if (static_cast<int>(nns.size()) != n) throw DimensionError("control_step: one network per level");
  const bool with_memory = cfg.mode != Mode::Nn;
  if (with_memory && static_cast<int>(mems.size()) != n) {
    throw DimensionError("control_step: one memory per level");
  }

  ControlStepOutput out;
  out.e.resize(n);
  out.x_d.resize(n);
  out.levels.resize(n);
  out.x_d[0] = cmd.value(t);

  for (int k = 1; k <= n; ++k) {
    const int i = k - 1;
    auto& lv = out.levels[i];
    const double x_kd = out.x_d[i];
    const double e_k = x[i] - x_kd;
    out.e[i] = e_k;

    lv.x_tilde = assemble_input(k, x, cmd, t, nns);
    lv.hidden = evaluate_hidden(nns[i], lv.x_tilde);
    double memory_norm = 0.0;
    if (with_memory) {
      lv.memory = read(mems[i], lv.hidden.q);
      memory_norm = mems[i].mu.norm();
    } else {
      lv.memory.m_r = Vec::Zero(nns[i].hidden_width());
    }
    lv.gain = gain_K(k, e_k, x_kd, x, bounds, nns[i], lv.hidden, memory_norm, cfg);

    const auto width = nns[i].hidden_width();
    const Vec& w = nns[i].w_aug;
    lv.h_hat = w.head(width).dot(lv.hidden.q + lv.memory.m_r) + w[width];

    const std::span<const double> prefix(x.data(), k);
    lv.bound = bounds.bound[i](prefix);
    if (!(lv.bound > bounds.lower[i])) {
      throw AssumptionError("control_step: gain bound of level " + std::to_string(k) + " = " +
                            std::to_string(lv.bound) + " is not above g_0 = " +
                            std::to_string(bounds.lower[i]) + " at t=" + std::to_string(t));
    }
    const double cross = k >= 2 ? out.levels[i - 1].bound * out.e[i - 1] : 0.0;
    const double next = (-lv.gain * e_k - cross - lv.h_hat) / lv.bound;
    if (!std::isfinite(next)) {
      throw NumericError("control_step: level " + std::to_string(k) + " output not finite", t);
    }
    if (k < n) {
      out.x_d[k] = next;
    } else {
      out.u = next;
    }
  }
  return out;
}

double ideal_first_order_control(double t, double x1, const CommandSignal& cmd,
                                 const StrictFeedbackSystem& sys, double gain,
                                 const DriftModifier& modifier) {
  const double y_d = cmd.value(t);
  const double y_d_dot = cmd.derivative(1, t);
  const double e = x1 - y_d;
  auto beta = [&](double v) {
    const std::span<const double> p(&v, 1);
    return sys.bounds.bound[0](p) / sys.gain[0](p);
  };
  const std::span<const double> p(&x1, 1);
  const double beta_integral = quad01([&](double theta) { return beta(theta * e + y_d); });
  const double h = beta(x1) * modifier.apply(sys.drift[0](p)) - y_d_dot * beta_integral;
  return (-gain * e - h) / sys.bounds.bound[0](p);
}

double true_h(const StrictFeedbackSystem& sys, const TrueHInputs& in) {
  const int k = in.level;
  const int i = k - 1;
  if (k < 1 || k > sys.order() || in.x.size() != sys.order()) {
    throw DimensionError("true_h: level or state out of range");
  }
  std::vector<double> buf(in.x.data(), in.x.data() + k);
  auto beta_at = [&](std::vector<double>& p) {
    return sys.bounds.bound[i](p) / sys.gain[i](p);
  };

  const std::span<const double> prefix(in.x.data(), k);
  const double beta_now = sys.bounds.bound[i](prefix) / sys.gain[i](prefix);
  const double drift_term = beta_now * in.modifier.apply(sys.drift[i](prefix));

  const double beta_integral = quad01([&](double theta) {
    buf.assign(in.x.data(), in.x.data() + k);
    buf[i] = theta * in.e + in.x_d;
    return beta_at(buf);
  });

  double coupling = 0.0;
  if (k >= 2) {
    const double step = in.fd_step;
    const double dbeta_integral = quad01(
        [&](double theta) {
          buf.assign(in.x.data(), in.x.data() + k);
          buf[i] = theta * in.e + in.x_d;
          buf[i - 1] = in.x[i - 1] + step;
          const double up = beta_at(buf);
          buf[i - 1] = in.x[i - 1] - step;
          const double down = beta_at(buf);
          return (up - down) / (2.0 * step);
        },
        QuadWeight::Theta);
    coupling = in.e * in.x_prev_dot * dbeta_integral;
  }
  return drift_term + coupling - in.x_d_dot * beta_integral;
}

}  // namespace mann
