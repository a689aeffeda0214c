#include <doctest.h>

#include <cmath>

#include "mann/errors.hpp"
#include "mann/simulator.hpp"

using namespace mann;

namespace {

StrictFeedbackSystem unit_system() {
  StrictFeedbackSystem s;
  s.name = "unit";
  s.drift = {[](auto) { return 0.0; }};
  s.gain = {[](auto) { return 1.0; }};
  s.bounds.bound = {[](auto) { return 1.0; }};
  s.bounds.lower = {0.5};
  return s;
}

}  // namespace

TEST_CASE("initial closed-loop state") {
  RunConfig run;
  const auto s = init_closed_loop(run);
  CHECK(s.t == 0.0);
  CHECK(s.x == Vec::Zero(2));
  REQUIRE(s.nns.size() == 2);
  CHECK(s.nns[0].input_dim() == 3);
  CHECK(s.nns[1].input_dim() == 36);
  for (const auto& nn : s.nns) {
    CHECK(nn.w_aug.isZero(0.0));
    CHECK_FALSE(nn.v_aug.isZero(0.0));
    CHECK(nn.v_aug.cwiseAbs().maxCoeff() <= 0.5);
  }
  for (const auto& m : s.mems) CHECK(m.mu.isZero(0.0));
  CHECK(init_closed_loop(run) == s);
  run.seed = 2;
  CHECK_FALSE(init_closed_loop(run).nns[0] == s.nns[0]);
}

TEST_CASE("initial state honours x0") {
  RunConfig run;
  Vec x0(2);
  x0 << 0.3, -0.1;
  run.x0 = x0;
  CHECK(init_closed_loop(run).x == x0);
}

TEST_CASE("packing layout and round trip") {
  RunConfig run;
  auto s = init_closed_loop(run);
  CHECK(packed_size(s) == 274);
  s.x << 0.1, 0.2;
  s.nns[1].w_aug.setLinSpaced(-1, 1);
  s.mems[0].mu.setConstant(0.7);
  const Vec v = pack(s);
  CHECK(v.size() == 274);
  CHECK(v(0) == 0.1);
  CHECK(v(2) == s.nns[0].v_aug(0, 0));
  CHECK(v(2 + 24) == s.nns[0].w_aug(0));
  CHECK(v(2 + 31) == 0.7);
  CHECK(unpack(v, s) == s);
  CHECK_THROWS_AS(unpack(Vec::Zero(273), s), DimensionError);

  RunConfig zeroed;
  zeroed.init_range = 0.0;
  CHECK(pack(init_closed_loop(zeroed)).isZero(0.0));
}

TEST_CASE("closed-loop derivative on a unit plant") {
  RunConfig run;
  run.system = unit_system();
  run.command = CommandSignal::constant(0.1, 1);
  run.init_range = 0.0;
  auto s = init_closed_loop(run);
  s.x << 0.2;
  const Vec d = closed_loop_derivative(0.0, s, run);
  CHECK(d(0) == doctest::Approx(-1.5 * run.controller.gain * 0.1).epsilon(1e-13));
}

TEST_CASE("closed-loop derivative at zero error has no error-driven memory change") {
  RunConfig run;
  run.init_range = 0.0;
  run.write_constant = 0.0;
  auto s = init_closed_loop(run);
  // x1 = y_d and x2 = x2d give e = 0 at every level
  s.x(0) = 0.1;
  const Vec probe = closed_loop_derivative(0.0, s, run);
  const auto step = control_step(0.0, s.x, run.system.bounds, run.command, s.nns, s.mems, run.controller);
  s.x(1) = step.x_d(1);
  const Vec d = closed_loop_derivative(0.0, s, run);
  CHECK(probe.size() == d.size());
  const int mem0 = 2 + 31;
  CHECK(d.segment(mem0, 6).isZero(0.0));
  CHECK(d.segment(packed_size(s) - 6, 6).isZero(0.0));
}

TEST_CASE("nn mode leaves the memory block untouched") {
  RunConfig run;
  run.controller.mode = Mode::Nn;
  auto s = init_closed_loop(run);
  s.x << 0.4, -0.2;
  s.nns[0].w_aug.setConstant(0.3);
  const Vec d = closed_loop_derivative(0.0, s, run);
  CHECK(d.segment(2 + 31, 6).isZero(0.0));
  CHECK(d.tail(6).isZero(0.0));
}

TEST_CASE("frozen mode keeps forgetting and the error channel") {
  RunConfig run;
  run.controller.mode = Mode::MannFrozen;
  auto s = init_closed_loop(run);
  s.x << 0.4, -0.2;
  s.nns[0].w_aug.setConstant(0.3);
  s.mems[0].mu.setConstant(0.1);
  const Vec d = closed_loop_derivative(0.0, s, run);
  const auto step = control_step(0.0, s.x, run.system.bounds, run.command, s.nns, s.mems, run.controller);
  const Vec expected = (s.nns[0].w_aug.head(6) * step.e(0) - s.mems[0].mu.col(0));
  CHECK((d.segment(2 + 31, 6) - expected).norm() < 1e-14);
}

TEST_CASE("zero horizon returns the initial sample") {
  RunConfig run;
  run.horizon = 0.0;
  const auto traj = simulate(run);
  REQUIRE(traj.size() == 1);
  CHECK(traj.samples[0].t == 0.0);
  CHECK(traj.samples[0].x == Vec::Zero(2));
  CHECK(traj.samples[0].y_d == 0.1);
}

TEST_CASE("recording schedule") {
  RunConfig run;
  run.horizon = 0.1005;
  run.decimation = 10;
  const auto traj = simulate(run);
  CHECK(traj.samples.front().t == 0.0);
  CHECK(traj.samples.back().t == doctest::Approx(0.1005));
  for (std::size_t i = 1; i < traj.size(); ++i) CHECK(traj.samples[i].t > traj.samples[i - 1].t);
  CHECK(traj.size() == 12);
  for (const auto& s : traj.samples) {
    CHECK(s.q1.size() == 6);
    CHECK(s.w_norm.size() == 2);
  }
}

TEST_CASE("runs are deterministic") {
  RunConfig run;
  run.horizon = 2.0;
  run.scenario = ScenarioScript({{1.0, std::nullopt, EventKind::Scale, 20.0}});
  const auto a = simulate(run);
  const auto b = simulate(run);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.samples[i].x == b.samples[i].x);
    CHECK(a.samples[i].u == b.samples[i].u);
  }
}

TEST_CASE("events are aligned to the recorded samples") {
  RunConfig run;
  run.horizon = 6.0;
  run.step = 0.003;  // 5 is not a multiple of h
  run.decimation = 1;
  run.scenario = ScenarioScript::scenario1();
  const auto traj = simulate(run);
  bool seen = false;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const auto& prev = traj.samples[i - 1];
    const auto& cur = traj.samples[i];
    if (prev.t < 5.0 && cur.t >= 5.0) {
      CHECK(cur.t == 5.0);
      CHECK(cur.drift_scale(0) / prev.drift_scale(0) == 20.0);
      seen = true;
    }
  }
  CHECK(seen);
}

TEST_CASE("blow-up guard raises a divergence error") {
  RunConfig run;
  run.horizon = 5.0;
  run.blowup_guard = 0.05;
  try {
    simulate(run);
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.time() >= 0.0);
  }
}

TEST_CASE("run configuration validation") {
  RunConfig run;
  run.step = 0.0;
  CHECK_THROWS_AS(run.validate(), ConfigError);
  run = {};
  run.horizon = -1.0;
  CHECK_THROWS_AS(run.validate(), ConfigError);
  run = {};
  run.command = CommandSignal::constant(0.1, 1);
  CHECK_THROWS_AS(run.validate(), ConfigError);
  run = {};
  run.x0 = Vec::Zero(3);
  CHECK_THROWS_AS(run.validate(), ConfigError);
  run = {};
  run.write_constant = 2.0;
  CHECK_THROWS_AS(run.validate(), ConfigError);
  run = {};
  run.controller.mode = Mode::MannFrozen;
  CHECK(run.effective_write_constant() == 0.0);
}

TEST_CASE("example 1 stays bounded on scenario 1") {
  RunConfig run;
  run.scenario = ScenarioScript::scenario1();
  const auto traj = simulate(run);
  for (const auto& s : traj.samples) {
    CHECK(s.x.allFinite());
    CHECK(s.w_norm.allFinite());
    CHECK(s.v_norm.allFinite());
    CHECK(s.mu_norm.allFinite());
  }
}

TEST_CASE("true h series on example 1") {
  RunConfig run;
  run.horizon = 1.0;
  const auto traj = simulate(run);
  const auto h1 = true_h_series(traj, run.system, 1);
  REQUIRE(h1.size() == traj.size());
  // constant command: h1 = f1(x1)
  for (std::size_t i = 0; i < traj.size(); i += 10) {
    const double x1 = traj.samples[i].x(0);
    CHECK(h1[i] == doctest::Approx(0.1 * (-0.5 * x1 + x1 * x1)).epsilon(1e-12));
  }
  const auto h2 = true_h_series(traj, run.system, 2);
  CHECK(h2.size() == traj.size());
}
