#include "mann/numerics.hpp"

#include <numbers>
#include <string>

namespace mann {

void require_finite(const Vec& v, std::string_view what, double t) {
  if (!v.allFinite()) throw NumericError(std::string(what) + ": non-finite entry", t);
}

void require_finite(const Mat& m, std::string_view what, double t) {
  if (!m.allFinite()) throw NumericError(std::string(what) + ": non-finite entry", t);
}

Vec softmax(const Vec& v) {
  if (v.size() == 0) throw DimensionError("softmax: empty input");
  const Vec shifted = (v.array() - v.maxCoeff()).exp().matrix();
  return shifted / shifted.sum();
}

namespace {

// Legendre roots by Newton iteration from the Chebyshev-like initial guess.
GaussLegendre01 build_rule() {
  constexpr int n = GaussLegendre01::kNodes;
  GaussLegendre01 rule{};
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = 0.5 * (x + 1.0);
    rule.weights[i] = 0.5 * w;
  }
  return rule;
}

}  // namespace

const GaussLegendre01& gauss_legendre01() {
  static const GaussLegendre01 rule = build_rule();
  return rule;
}

Vec rk4_step(const StateDerivative& deriv, double t, const Vec& s, double h) {
  const double half = 0.5 * h;
  const Vec k1 = deriv(t, s);
  require_finite(k1, "rk4_step: derivative", t);
  const Vec k2 = deriv(t + half, s + half * k1);
  require_finite(k2, "rk4_step: derivative", t + half);
  const Vec k3 = deriv(t + half, s + half * k2);
  require_finite(k3, "rk4_step: derivative", t + half);
  const Vec k4 = deriv(t + h, s + h * k3);
  require_finite(k4, "rk4_step: derivative", t + h);
  return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace mann
