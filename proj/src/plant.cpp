#include "mann/plant.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace mann {

void StrictFeedbackSystem::validate() const {
  const auto n = drift.size();
  if (n == 0) throw ConfigError("system '" + name + "': order must be at least 1");
  if (gain.size() != n || bounds.bound.size() != n || bounds.lower.size() != n) {
    throw ConfigError("system '" + name + "': every level needs f, g, bound and lower bound");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!drift[i] || !gain[i] || !bounds.bound[i]) {
      throw ConfigError("system '" + name + "': level " + std::to_string(i + 1) +
                        " has an empty function");
    }
    if (!(bounds.lower[i] > 0.0) || !std::isfinite(bounds.lower[i])) {
      throw ConfigError("system '" + name + "': g_" + std::to_string(i + 1) +
                        ",0 must be positive and finite");
    }
  }
}

namespace {

double example_drift(double x) { return 0.1 * (-0.5 * x + x * x); }
double example_gain(double x) { return 1.0 + 0.1 * x * x; }

}  // namespace

StrictFeedbackSystem make_example1() {
  StrictFeedbackSystem sys;
  sys.name = "example1";
  for (int i = 0; i < 2; ++i) {
    sys.drift.emplace_back([i](std::span<const double> x) { return example_drift(x[i]); });
    sys.gain.emplace_back([i](std::span<const double> x) { return example_gain(x[i]); });
    sys.bounds.bound.emplace_back([i](std::span<const double> x) { return example_gain(x[i]); });
    sys.bounds.lower.push_back(0.5);
  }
  return sys;
}

double Polynomial::operator()(std::span<const double> prefix) const {
  double acc = 0.0;
  for (const auto& term : terms) {
    double value = term.coefficient;
    for (std::size_t j = 0; j < term.powers.size(); ++j) {
      if (term.powers[j] != 0) value *= std::pow(prefix[j], term.powers[j]);
    }
    acc += value;
  }
  return acc;
}

StrictFeedbackSystem make_polynomial_system(std::string name, const std::vector<Polynomial>& drift,
                                            const std::vector<Polynomial>& gain,
                                            const std::vector<Polynomial>& bound,
                                            const std::vector<double>& lower) {
  const auto n = drift.size();
  if (gain.size() != n || bound.size() != n || lower.size() != n) {
    throw ConfigError("polynomial system: f, g, bound and lower lists differ in length");
  }
  auto check_support = [](const Polynomial& p, std::size_t level, const char* which) {
    for (const auto& term : p.terms) {
      for (std::size_t j = level + 1; j < term.powers.size(); ++j) {
        if (term.powers[j] != 0) {
          throw ConfigError(std::string("polynomial system: ") + which + "_" +
                            std::to_string(level + 1) + " depends on x_" + std::to_string(j + 1));
        }
      }
      for (int p_j : term.powers) {
        if (p_j < 0) throw ConfigError("polynomial system: negative power");
      }
    }
  };
  StrictFeedbackSystem sys;
  sys.name = std::move(name);
  for (std::size_t i = 0; i < n; ++i) {
    check_support(drift[i], i, "f");
    check_support(gain[i], i, "g");
    check_support(bound[i], i, "bound");
    sys.drift.emplace_back(drift[i]);
    sys.gain.emplace_back(gain[i]);
    sys.bounds.bound.emplace_back(bound[i]);
    sys.bounds.lower.push_back(lower[i]);
  }
  sys.validate();
  return sys;
}

// ---------------------------------------------------------------------------

CommandSignal::CommandSignal(std::vector<Derivative> derivatives)
    : derivatives_(std::move(derivatives)) {
  if (derivatives_.empty()) throw ConfigError("command signal needs at least y_d itself");
}

CommandSignal CommandSignal::constant(double value, int max_order) {
  std::vector<Derivative> d;
  d.emplace_back([value](double) { return value; });
  for (int k = 1; k <= max_order; ++k) d.emplace_back([](double) { return 0.0; });
  return CommandSignal(std::move(d));
}

CommandSignal CommandSignal::sine(double offset, double amplitude, double omega, int max_order) {
  std::vector<Derivative> d;
  for (int k = 0; k <= max_order; ++k) {
    // d^k/dt^k sin(ωt) = ω^k sin(ωt + kπ/2)
    const double scale = amplitude * std::pow(omega, k);
    const double phase = k * std::numbers::pi / 2.0;
    const double base = k == 0 ? offset : 0.0;
    d.emplace_back([=](double t) { return base + scale * std::sin(omega * t + phase); });
  }
  return CommandSignal(std::move(d));
}

double CommandSignal::derivative(int k, double t) const {
  if (k < 0 || k > max_order()) {
    throw ConfigError("command signal: derivative order " + std::to_string(k) +
                      " not supplied (max " + std::to_string(max_order()) + ")");
  }
  return derivatives_[k](t);
}

// ---------------------------------------------------------------------------

ScenarioScript::ScenarioScript(std::vector<ScenarioEvent> events) : events_(std::move(events)) {
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const auto& ev = events_[i];
    if (!std::isfinite(ev.time) || ev.time < 0.0) {
      throw ConfigError("scenario: event " + std::to_string(i) + " has an invalid time");
    }
    if (i > 0 && !(ev.time > events_[i - 1].time)) {
      throw ConfigError("scenario: event times must be strictly increasing");
    }
    if (!std::isfinite(ev.coefficient)) {
      throw ConfigError("scenario: event " + std::to_string(i) + " coefficient is not finite");
    }
    if (ev.kind == EventKind::Scale && ev.coefficient == 0.0) {
      throw ConfigError("scenario: scale coefficient must be nonzero");
    }
    if (ev.level && *ev.level < 0) throw ConfigError("scenario: negative level index");
  }
}

std::vector<double> ScenarioScript::event_times() const {
  std::vector<double> times;
  times.reserve(events_.size());
  for (const auto& ev : events_) times.push_back(ev.time);
  return times;
}

DriftModifier ScenarioScript::modifier(int level, double t) const {
  DriftModifier m;
  for (const auto& ev : events_) {
    if (ev.time > t) break;
    if (ev.level && *ev.level != level) continue;
    if (ev.kind == EventKind::Scale) {
      m.scale *= ev.coefficient;
    } else {
      m.offset = ev.coefficient;
    }
  }
  return m;
}

std::vector<DriftModifier> ScenarioScript::modifiers(int order, double t) const {
  std::vector<DriftModifier> out;
  out.reserve(order);
  for (int i = 0; i < order; ++i) out.push_back(modifier(i, t));
  return out;
}

ScenarioScript ScenarioScript::scenario1() {
  return ScenarioScript({{5.0, std::nullopt, EventKind::Scale, 20.0},
                         {10.0, std::nullopt, EventKind::Scale, 2.0},
                         {20.0, std::nullopt, EventKind::Scale, 1.0 / 40.0}});
}

ScenarioScript ScenarioScript::scenario2() {
  return ScenarioScript({{0.0, std::nullopt, EventKind::Offset, 0.001},
                         {5.0, std::nullopt, EventKind::Offset, 0.05},
                         {10.0, std::nullopt, EventKind::Offset, 0.1},
                         {20.0, std::nullopt, EventKind::Offset, 0.001}});
}

ScenarioScript ScenarioScript::scenario3() {
  return ScenarioScript({{5.0, 0, EventKind::Scale, 200.0},
                         {10.0, 0, EventKind::Scale, 2.0},
                         {20.0, 0, EventKind::Scale, 1.0 / 400.0}});
}

double effective_drift(const StrictFeedbackSystem& sys, const ScenarioScript& script, int level,
                       double t, std::span<const double> prefix) {
  return script.modifier(level, t).apply(sys.drift[level](prefix));
}

Vec state_derivative(const StrictFeedbackSystem& sys, std::span<const DriftModifier> modifiers,
                     double t, const Vec& x, double u) {
  const int n = sys.order();
  if (x.size() != n) throw DimensionError("state_derivative: state length != system order");
  if (static_cast<int>(modifiers.size()) != n) {
    throw DimensionError("state_derivative: one drift modifier per level required");
  }
  Vec dx(n);
  for (int i = 0; i < n; ++i) {
    const std::span<const double> prefix(x.data(), i + 1);
    const double next = i + 1 < n ? x[i + 1] : u;
    dx[i] = modifiers[i].apply(sys.drift[i](prefix)) + sys.gain[i](prefix) * next;
    if (!std::isfinite(dx[i])) {
      throw NumericError("state_derivative: level " + std::to_string(i + 1) + " not finite", t);
    }
  }
  return dx;
}

Vec state_derivative(const StrictFeedbackSystem& sys, const ScenarioScript& script, double t,
                     const Vec& x, double u) {
  const auto mods = script.modifiers(sys.order(), t);
  return state_derivative(sys, mods, t, x, u);
}

// ---------------------------------------------------------------------------

AssumptionReport validate_assumption(const StrictFeedbackSystem& sys,
                                     std::span<const std::pair<double, double>> box, int n_samples,
                                     std::uint64_t seed) {
  const int n = sys.order();
  if (static_cast<int>(box.size()) != n) {
    throw DimensionError("validate_assumption: box dimension != system order");
  }
  if (n_samples < 1) throw ConfigError("validate_assumption: need at least one sample");

  std::mt19937_64 rng(seed);
  std::vector<std::uniform_real_distribution<double>> axes;
  for (const auto& [lo, hi] : box) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw ConfigError("validate_assumption: box must be bounded with lo <= hi");
    }
    axes.emplace_back(lo, hi);
  }

  AssumptionReport report;
  std::vector<double> sample(n);
  for (int s = 0; s < n_samples; ++s) {
    for (int j = 0; j < n; ++j) sample[j] = axes[j](rng);
    ++report.samples_checked;
    for (int i = 0; i < n; ++i) {
      const std::span<const double> prefix(sample.data(), i + 1);
      const double g = sys.gain[i](prefix);
      const double bound = sys.bounds.bound[i](prefix);
      const double lower = sys.bounds.lower[i];
      std::string reason;
      if (!std::isfinite(g) || !std::isfinite(bound)) {
        reason = "non-finite gain or bound";
      } else if (!(lower > 0.0)) {
        reason = "lower bound g_0 not positive";
      } else if (!(std::abs(g) > lower)) {
        reason = "|g| <= g_0";
      } else if (!(bound >= std::abs(g))) {
        reason = "bound < |g|";
      }
      if (!reason.empty()) {
        report.passed = false;
        report.first_violation = AssumptionViolation{i, sample, g, bound, lower, reason};
        return report;
      }
    }
  }
  return report;
}

}  // namespace mann
