#include <doctest.h>

#include <random>

#include "mann/adaptation.hpp"
#include "mann/errors.hpp"

using namespace mann;

TEST_CASE("no error and no leakage means no adaptation") {
  std::mt19937_64 rng(1);
  auto nn = TwoLayerNN::seeded(3, 4, rng);
  nn.w_aug.setLinSpaced(-1, 1);
  const auto d = weight_derivatives(nn, Vec::Ones(3), 0.0, AdaptationRates{});
  CHECK(d.dw_aug.isZero(0.0));
  CHECK(d.dv_aug.isZero(0.0));
}

TEST_CASE("leakage alone decays the weights") {
  std::mt19937_64 rng(2);
  auto nn = TwoLayerNN::seeded(3, 4, rng);
  nn.w_aug.setLinSpaced(-1, 1);
  const AdaptationRates r{10.0, 5.0, 0.2};
  const auto d = weight_derivatives(nn, Vec::Ones(3), 0.0, r);
  CHECK((d.dw_aug + 0.2 * 10.0 * nn.w_aug).norm() < 1e-15);
  CHECK((d.dv_aug + 0.2 * 5.0 * nn.v_aug).norm() < 1e-15);
}

TEST_CASE("hand-evaluated update on a one-neuron network") {
  const auto nn = TwoLayerNN::zeros(1, 1);
  Vec x(1);
  x << 0.6;
  const auto d = weight_derivatives(nn, x, 1.0, AdaptationRates{10.0, 10.0, 0.0});
  CHECK(d.dw_aug(0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(d.dw_aug(1) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(d.dv_aug.isZero(0.0));
}

TEST_CASE("update shapes and independence from memory") {
  std::mt19937_64 rng(3);
  auto nn = TwoLayerNN::seeded(36, 6, rng);
  nn.w_aug.setConstant(0.3);
  const Vec x = Vec::LinSpaced(36, -1, 1);
  const auto d = weight_derivatives(nn, x, 0.01, AdaptationRates{});
  CHECK(d.dw_aug.size() == 7);
  CHECK(d.dv_aug.rows() == 37);
  CHECK(d.dv_aug.cols() == 6);
  CHECK(d.dw_aug == weight_derivatives(nn, evaluate_hidden(nn, x), 0.01, AdaptationRates{}).dw_aug);
}

TEST_CASE("error terms scale linearly in the error") {
  std::mt19937_64 rng(4);
  auto nn = TwoLayerNN::seeded(3, 5, rng);
  nn.w_aug.setLinSpaced(-0.5, 0.7);
  const AdaptationRates r{10.0, 7.0, 0.3};
  const Vec x = Vec::LinSpaced(3, 0.1, 0.4);
  const auto d1 = weight_derivatives(nn, x, 0.25, r);
  const auto d2 = weight_derivatives(nn, x, 0.5, r);
  const Vec w1 = d1.dw_aug + r.kappa * r.c_w * nn.w_aug;
  const Vec w2 = d2.dw_aug + r.kappa * r.c_w * nn.w_aug;
  CHECK((w2 - 2.0 * w1).norm() <= 1e-14 * w2.norm());
  const Mat v1 = d1.dv_aug + r.kappa * r.c_v * nn.v_aug;
  const Mat v2 = d2.dv_aug + r.kappa * r.c_v * nn.v_aug;
  CHECK((v2 - 2.0 * v1).norm() <= 1e-14 * v2.norm());
}

TEST_CASE("weight norms decay exponentially under leakage") {
  std::mt19937_64 rng(6);
  auto nn = TwoLayerNN::seeded(2, 3, rng);
  nn.w_aug.setConstant(1.0);
  const AdaptationRates r{10.0, 10.0, 0.1};
  const Vec x = Vec::Ones(2);
  const double w0 = nn.w_aug.norm(), v0 = nn.v_aug.norm();
  const double h = 1e-3;
  for (int i = 0; i < 1000; ++i) {
    const auto d = weight_derivatives(nn, x, 0.0, r);
    nn.w_aug += h * d.dw_aug;
    nn.v_aug += h * d.dv_aug;
  }
  // explicit Euler at rate 1: (1 - h)^1000
  const double factor = std::pow(1.0 - h, 1000);
  CHECK(nn.w_aug.norm() == doctest::Approx(w0 * factor).epsilon(1e-12));
  CHECK(nn.v_aug.norm() == doctest::Approx(v0 * factor).epsilon(1e-12));
}

TEST_CASE("learning rate validation") {
  CHECK_THROWS_AS((AdaptationRates{0.0, 1.0, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((AdaptationRates{1.0, -1.0, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((AdaptationRates{1.0, 1.0, -0.1}.validate()), ConfigError);
  CHECK_NOTHROW(AdaptationRates{}.validate());
}
