#pragma once

// Backstepping control chain. For k = 1..n:
//   e_k       = x_k − x_{k,d}                (x_{1,d} = y_d)
//   x_{k+1,d} = (−K_k e_k − 𝐠_{k−1} e_{k−1} − ĥ_k) / 𝐠_k
// and the last level's value is the plant input u.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mann/adaptation.hpp"
#include "mann/memory.hpp"
#include "mann/nn.hpp"
#include "mann/plant.hpp"

namespace mann {

/// Mann: live memory. Nn: no memory at all. MannFrozen: memory with c_w = 0.
enum class Mode { Mann, Nn, MannFrozen };

std::string_view to_string(Mode mode) noexcept;
/// Accepts "mann", "nn", "mann-frozen" (and "mann_frozen").
Mode parse_mode(std::string_view text);

struct ControllerConfig {
  double gain = 20.0;        // K
  double memory_gain = 0.0;  // k_z
  AdaptationRates rates;
  std::vector<std::optional<AdaptationRates>> level_rates;  // per-level overrides, 0-based
  Mode mode = Mode::Mann;
  bool stability_preset = false;  // k_z = K, κ = 1/√K

  void validate() const;
  /// Copy with the stability preset folded into memory_gain and kappa.
  ControllerConfig resolved() const;
  const AdaptationRates& rates_for(int level) const;
};

/// Everything computed for one level during a control step.
struct LevelTerms {
  Vec x_tilde;
  HiddenLayerEval hidden;
  MemoryRead memory;  // m_r = 0 and z empty in Nn mode
  double gain = 0.0;  // K_k
  double h_hat = 0.0;
  double bound = 0.0;  // 𝐠_k(x₁..x_k)
};

struct ControlStepOutput {
  Vec e;    // e₁..e_n
  Vec x_d;  // x_{1,d}..x_{n,d}
  double u = 0.0;
  std::vector<LevelTerms> levels;
};

/// K_k for a level (1-based) given its evaluated hidden layer. memory_norm is ‖μ_k‖_F.
double gain_K(int level, double e_k, double x_kd, const Vec& x, const GainBounds& bounds,
              const TwoLayerNN& nn, const HiddenLayerEval& ev, double memory_norm,
              const ControllerConfig& cfg);

/// Convenience form; mem == nullptr means no memory term.
double gain_K(int level, double e_k, double x_kd, const Vec& x, const GainBounds& bounds,
              const TwoLayerNN& nn, const Vec& x_tilde, const MemoryState* mem,
              const ControllerConfig& cfg);

/// One evaluation of the whole chain at the current weights and memory.
/// cfg must already be resolved(). Throws AssumptionError if some 𝐠_k ≤ g_{k,0}.
ControlStepOutput control_step(double t, const Vec& x, const GainBounds& bounds,
                               const CommandSignal& cmd, std::span<const TwoLayerNN> nns,
                               std::span<const MemoryState> mems, const ControllerConfig& cfg);

/// Exact first-order controller u* = (−K e₁ − h₁) / 𝐠₁ with the true f₁, g₁.
double ideal_first_order_control(double t, double x1, const CommandSignal& cmd,
                                 const StrictFeedbackSystem& sys, double gain,
                                 const DriftModifier& modifier = {});

/// Inputs of the true function h_k a level's network approximates.
struct TrueHInputs {
  int level = 1;         // 1-based
  Vec x;                 // full state
  double e = 0.0;        // e_k
  double x_d = 0.0;      // x_{k,d}
  double x_prev_dot = 0.0;  // ẋ_{k−1} (ignored for k = 1)
  double x_d_dot = 0.0;     // ẋ_{k,d}
  DriftModifier modifier;
  double fd_step = 1e-6;
};

/// h_k = β_k f_k + e_k ẋ_{k−1} ∫θ ∂β_k/∂x_{k−1} dθ − ẋ_{k,d} ∫β_k dθ with β_k = 𝐠_k / g_k.
double true_h(const StrictFeedbackSystem& sys, const TrueHInputs& in);

}  // namespace mann
