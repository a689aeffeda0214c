#pragma once

// Per-level two-layer network in augmented-weight form:
//   x_e = [x̃; 1],  q = σ(V_augᵀ x_e),  σ̂ = [q; 1],  ĥ = W_augᵀ (σ̂ + [M_r; 0]).

#include <random>
#include <span>

#include "mann/numerics.hpp"
#include "mann/plant.hpp"

namespace mann {

struct TwoLayerNN {
  Mat v_aug;  // (d+1) × N, bias row last
  Vec w_aug;  // N+1, bias entry last

  int input_dim() const noexcept { return static_cast<int>(v_aug.rows()) - 1; }
  int hidden_width() const noexcept { return static_cast<int>(v_aug.cols()); }
  /// Number of scalars in flat(Ẑ).
  int parameter_count() const noexcept {
    return static_cast<int>(v_aug.size() + w_aug.size());
  }

  static TwoLayerNN zeros(int input_dim, int hidden_width);
  /// V_aug i.i.d. uniform on [-range, range], W_aug = 0.
  static TwoLayerNN seeded(int input_dim, int hidden_width, std::mt19937_64& rng,
                           double range = 0.5);

  bool operator==(const TwoLayerNN& other) const {
    return v_aug == other.v_aug && w_aug == other.w_aug;
  }
};

/// [x̃; 1]
Vec augment_input(const Vec& x_tilde);

/// V_augᵀ x_e
Vec pre_activation(const TwoLayerNN& nn, const Vec& x_tilde);
Vec hidden(const TwoLayerNN& nn, const Vec& x_tilde);
Vec sigma_hat(const TwoLayerNN& nn, const Vec& x_tilde);
/// ∂σ̂/∂z for z = V_augᵀ x_e; shape (N+1) × N with a zero last row.
Mat sigma_prime(const TwoLayerNN& nn, const Vec& x_tilde);
double approximate_h(const TwoLayerNN& nn, const Vec& x_tilde, const Vec& m_r);

/// Everything one control step needs from a level's network, evaluated once.
struct HiddenLayerEval {
  Vec x_e;
  Vec z;            // pre-activation
  Vec q;            // hidden output
  Vec sigma_hat;    // [q; 1]
  Mat sigma_prime;  // (N+1) × N
};
HiddenLayerEval evaluate_hidden(const TwoLayerNN& nn, const Vec& x_tilde);

/// Input dimension d_k of level k (1-based) for hidden width N:
/// k states, y_d..y_d^{(k)}, then flat(Ẑ₁..Ẑ_{k-1}).
int level_input_dim(int level, int hidden_width);

/// Appends column-major V_aug followed by W_aug.
void append_flat_weights(const TwoLayerNN& nn, std::vector<double>& out);

/// x̃_k = [x₁..x_k, y_d, ẏ_d, .., y_d^{(k)}, flat(Ẑ₁), .., flat(Ẑ_{k-1})], level 1-based.
Vec assemble_input(int level, const Vec& x, const CommandSignal& cmd, double t,
                   std::span<const TwoLayerNN> prior);

}  // namespace mann
