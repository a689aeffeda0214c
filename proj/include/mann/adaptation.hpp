#pragma once

// Weight update laws, identical at every backstepping level:
//   Ŵ̇ = C_w (σ̂ − σ̂′ V̂ᵀ x_e) e − κ C_w Ŵ
//   V̂̇ = C_v x_e e Ŵᵀ σ̂′ − κ C_v V̂
// Memory does not enter these laws.

#include "mann/nn.hpp"

namespace mann {

struct AdaptationRates {
  double c_w = 10.0;  // C_w, output-layer learning rate
  double c_v = 10.0;  // C_v, input-layer learning rate
  double kappa = 0.0;

  void validate() const;
};

struct WeightDerivatives {
  Vec dw_aug;  // N+1
  Mat dv_aug;  // (d+1) × N
};

WeightDerivatives weight_derivatives(const TwoLayerNN& nn, const Vec& x_tilde, double e,
                                     const AdaptationRates& rates);

/// Same laws on an already evaluated hidden layer.
WeightDerivatives weight_derivatives(const TwoLayerNN& nn, const HiddenLayerEval& ev, double e,
                                     const AdaptationRates& rates);

}  // namespace mann
