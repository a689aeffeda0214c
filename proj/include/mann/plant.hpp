#pragma once

// Strict-feedback plant, its known gain bounds, the command signal and the
// scenario engine that applies abrupt changes to the drift terms.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mann/numerics.hpp"

namespace mann {

/// A level function evaluated on the state prefix (x₁..x_i).
using LevelFn = std::function<double(std::span<const double> prefix)>;

/// The only plant knowledge the controller may use: 𝐠_i and g_{i,0}.
struct GainBounds {
  std::vector<LevelFn> bound;  // 𝐠_i
  std::vector<double> lower;   // g_{i,0}

  int order() const noexcept { return static_cast<int>(bound.size()); }
};

/// ẋ_i = f_i(x₁..x_i) + g_i(x₁..x_i) x_{i+1},  ẋ_n = f_n + g_n u,  y = x₁.
struct StrictFeedbackSystem {
  std::string name;
  std::vector<LevelFn> drift;  // f_i
  std::vector<LevelFn> gain;   // g_i
  GainBounds bounds;

  int order() const noexcept { return static_cast<int>(drift.size()); }

  /// Structural checks only (n ≥ 1, consistent sizes, positive lower bounds).
  void validate() const;
};

/// The second-order system used throughout the examples: f_i = 0.1(-x_i/2 + x_i²),
/// g_i = 1 + 0.1 x_i², 𝐠_i = g_i, g_{i,0} = 0.5.
StrictFeedbackSystem make_example1();

/// Sum of monomials c · ∏ x_j^{p_j} over the state prefix.
struct Polynomial {
  struct Term {
    double coefficient = 0.0;
    std::vector<int> powers;  // powers[j] applies to x_{j+1}; missing trailing entries are 0
  };
  std::vector<Term> terms;

  double operator()(std::span<const double> prefix) const;
};

/// Builds a system from per-level polynomials; level i functions may only
/// reference x₁..x_i.
StrictFeedbackSystem make_polynomial_system(std::string name, const std::vector<Polynomial>& drift,
                                            const std::vector<Polynomial>& gain,
                                            const std::vector<Polynomial>& bound,
                                            const std::vector<double>& lower);

// ---------------------------------------------------------------------------
// Command signal

/// y_d and its time derivatives. derivative(k, t) is defined for k ≤ max_order().
class CommandSignal {
 public:
  using Derivative = std::function<double(double t)>;

  explicit CommandSignal(std::vector<Derivative> derivatives);

  static CommandSignal constant(double value, int max_order);
  /// offset + amplitude · sin(ω t).
  static CommandSignal sine(double offset, double amplitude, double omega, int max_order);

  int max_order() const noexcept { return static_cast<int>(derivatives_.size()) - 1; }
  double value(double t) const { return derivative(0, t); }
  /// Throws ConfigError when k exceeds the supplied order.
  double derivative(int k, double t) const;

 private:
  std::vector<Derivative> derivatives_;
};

// ---------------------------------------------------------------------------
// Scenario engine

enum class EventKind { Scale, Offset };

struct ScenarioEvent {
  double time = 0.0;
  std::optional<int> level;  // 0-based; nullopt applies to every level
  EventKind kind = EventKind::Scale;
  double coefficient = 1.0;
};

/// Effective drift is scale · f_i + offset.
struct DriftModifier {
  double scale = 1.0;
  double offset = 0.0;

  double apply(double f) const noexcept { return scale * f + offset; }
  bool operator==(const DriftModifier&) const = default;
};

/// Ordered abrupt changes. A scale event multiplies the current scale, an
/// offset event replaces the current additive offset. Events take effect at
/// their own time (right-continuous).
class ScenarioScript {
 public:
  ScenarioScript() = default;
  /// Throws ConfigError unless times are strictly increasing, coefficients
  /// finite and scale coefficients nonzero.
  explicit ScenarioScript(std::vector<ScenarioEvent> events);

  const std::vector<ScenarioEvent>& events() const noexcept { return events_; }
  std::vector<double> event_times() const;

  DriftModifier modifier(int level, double t) const;
  /// Modifiers for levels 0..order-1 at time t.
  std::vector<DriftModifier> modifiers(int order, double t) const;

  /// f_i → 20 f_i at 5, → 2 f_i at 10, → f_i / 40 at 20, every level.
  static ScenarioScript scenario1();
  /// Offsets 0.001 at 0, 0.05 at 5, 0.1 at 10, 0.001 at 20, every level.
  static ScenarioScript scenario2();
  /// f₁ → 200 f₁ at 5, → 2 f₁ at 10, → f₁ / 400 at 20.
  static ScenarioScript scenario3();

 private:
  std::vector<ScenarioEvent> events_;
};

double effective_drift(const StrictFeedbackSystem& sys, const ScenarioScript& script, int level,
                       double t, std::span<const double> prefix);

/// ẋ for the full plant with the drift modifiers already resolved.
Vec state_derivative(const StrictFeedbackSystem& sys, std::span<const DriftModifier> modifiers,
                     double t, const Vec& x, double u);
Vec state_derivative(const StrictFeedbackSystem& sys, const ScenarioScript& script, double t,
                     const Vec& x, double u);

// ---------------------------------------------------------------------------
// Assumption check

struct AssumptionViolation {
  int level = 0;  // 0-based
  std::vector<double> sample;
  double gain = 0.0;
  double bound = 0.0;
  double lower = 0.0;
  std::string reason;
};

struct AssumptionReport {
  bool passed = true;
  int samples_checked = 0;
  std::optional<AssumptionViolation> first_violation;
};

/// Checks 𝐠_i ≥ |g_i| > g_{i,0} > 0 on seeded uniform samples of an axis-aligned box.
AssumptionReport validate_assumption(const StrictFeedbackSystem& sys,
                                     std::span<const std::pair<double, double>> box, int n_samples,
                                     std::uint64_t seed);

}  // namespace mann
