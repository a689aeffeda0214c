#pragma once

// Scalar, vector and integration primitives shared by every other module.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <string_view>

#include "mann/errors.hpp"

namespace mann {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Throws NumericError(what, t) unless every entry is finite.
void require_finite(const Vec& v, std::string_view what, double t = 0.0);
void require_finite(const Mat& m, std::string_view what, double t = 0.0);

/// Numerically safe softmax (max-subtracted). Throws DimensionError on empty input.
Vec softmax(const Vec& v);

/// Logistic sigmoid.
inline double sigmoid(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }

inline double sigmoid_deriv(double x) noexcept {
  const double s = sigmoid(x);
  return s * (1.0 - s);
}

enum class QuadWeight { Plain, Theta };

/// Nodes and weights of the 16-point Gauss-Legendre rule mapped to [0, 1].
struct GaussLegendre01 {
  static constexpr int kNodes = 16;
  std::array<double, kNodes> nodes;
  std::array<double, kNodes> weights;
};
const GaussLegendre01& gauss_legendre01();

/// ∫₀¹ f(θ) dθ (Plain) or ∫₀¹ θ f(θ) dθ (Theta). Exact for polynomials of degree ≤ 31.
template <typename F>
double quad01(F&& f, QuadWeight weight = QuadWeight::Plain) {
  const auto& rule = gauss_legendre01();
  double acc = 0.0;
  for (int i = 0; i < GaussLegendre01::kNodes; ++i) {
    const double theta = rule.nodes[i];
    const double value = f(theta);
    if (!std::isfinite(value)) {
      throw NumericError("quad01: integrand not finite at theta=" + std::to_string(theta), 0.0);
    }
    acc += rule.weights[i] * (weight == QuadWeight::Theta ? theta * value : value);
  }
  return acc;
}

using StateDerivative = std::function<Vec(double t, const Vec& state)>;

/// One classical fourth-order Runge-Kutta step of size h from (t, s).
Vec rk4_step(const StateDerivative& deriv, double t, const Vec& s, double h);

}  // namespace mann
