#include "mann/adaptation.hpp"

#include <cmath>

namespace mann {

void AdaptationRates::validate() const {
  if (!(c_w > 0.0) || !(c_v > 0.0) || !std::isfinite(c_w) || !std::isfinite(c_v)) {
    throw ConfigError("adaptation: learning rates C_w, C_v must be positive");
  }
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ConfigError("adaptation: kappa must be >= 0");
}

WeightDerivatives weight_derivatives(const TwoLayerNN& nn, const HiddenLayerEval& ev, double e,
                                     const AdaptationRates& rates) {
  WeightDerivatives d;
  d.dw_aug = rates.c_w * e * (ev.sigma_hat - ev.sigma_prime * ev.z) - rates.kappa * rates.c_w * nn.w_aug;
  const Vec w_sigma_prime = ev.sigma_prime.transpose() * nn.w_aug;  // (Ŵᵀσ̂′)ᵀ, length N
  d.dv_aug = (rates.c_v * e) * ev.x_e * w_sigma_prime.transpose() - rates.kappa * rates.c_v * nn.v_aug;
  return d;
}

WeightDerivatives weight_derivatives(const TwoLayerNN& nn, const Vec& x_tilde, double e,
                                     const AdaptationRates& rates) {
  return weight_derivatives(nn, evaluate_hidden(nn, x_tilde), e, rates);
}

}  // namespace mann
