#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <string>

#include "quadsmc/csvio.hpp"
#include "quadsmc/scenario.hpp"
#include "quadsmc/sim.hpp"

using namespace quadsmc;

TEST_CASE("rk4 scalar decay accuracy") {
  // dx/dt = -x embedded in the position channel; exact answer e^{-t}.
  VehicleState s;
  s.xi = Vec3(1.0, 0, 0);
  const auto deriv = [](const VehicleState& st) {
    VehicleState::Flat dx = VehicleState::Flat::Zero();
    dx(0) = -st.xi.x();
    return dx;
  };
  const double dt = 5e-4;
  for (int i = 0; i < 2000; ++i) s = rk4_step(s, deriv, dt);
  CHECK(std::abs(s.xi.x() - std::exp(-1.0)) < 1e-12);

  // Zero derivative leaves the state untouched.
  VehicleState h;
  h.q = UnitQuaternion::from_axis_angle(Vec3::UnitX(), 0.3);
  const VehicleState h2 = rk4_step(
      h, [](const VehicleState&) { return VehicleState::Flat::Zero(); }, dt);
  CHECK((h2.to_flat() - h.to_flat()).norm() == 0.0);
}

TEST_CASE("rk4 quaternion propagation under constant body rate") {
  const Vec3 omega(1.2, -0.7, 0.5);
  const auto deriv = [&](const VehicleState& st) {
    VehicleState::Flat dx = VehicleState::Flat::Zero();
    // qdot = 0.5 q (x) (0, omega), scalar-first components by hand.
    const double w = st.q.w();
    const Vec3 v = st.q.vec();
    dx(6) = -0.5 * v.dot(omega);
    dx.segment<3>(7) = 0.5 * (w * omega + v.cross(omega));
    return dx;
  };
  VehicleState s;
  const double dt = 5e-4;
  const int n = 1000;
  for (int i = 0; i < n; ++i) s = rk4_step(s, deriv, dt);
  const UnitQuaternion exact =
      UnitQuaternion::from_axis_angle(omega.normalized(), omega.norm() * n * dt);
  CHECK(std::abs(s.q.dot(exact)) > 1.0 - 1e-8);
  CHECK(s.q.coeffs().norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rk4 rejects non-finite derivatives") {
  VehicleState s;
  const auto bad = [](const VehicleState&) {
    VehicleState::Flat dx = VehicleState::Flat::Zero();
    dx(3) = std::numeric_limits<double>::quiet_NaN();
    return dx;
  };
  CHECK_THROWS_AS(rk4_step(s, bad, 1e-3), NonFinite);
}

TEST_CASE("legacy adaptation step") {
  CHECK(legacy_adaptation_step(1.0, 0.0, 100.0, 0.002) == 1.0);
  CHECK(legacy_adaptation_step(0.0, 1.0, 1.0, 0.002) ==
        doctest::Approx(0.002).epsilon(1e-15));
  CHECK(legacy_adaptation_step(0.0, -3.0, 2.0, 0.5) ==
        doctest::Approx(3.0).epsilon(1e-15));
  CHECK_THROWS_AS(legacy_adaptation_step(0.0, 1.0, 0.0, 0.002),
                  std::invalid_argument);
  // Integrating |s| = 1 for 100 s at gamma = 10 accumulates 1000.
  double k = 0.0;
  for (int i = 0; i < 50000; ++i) k = legacy_adaptation_step(k, 1.0, 10.0, 0.002);
  CHECK(k == doctest::Approx(1000.0).epsilon(1e-9));
}

TEST_CASE("reaching-bound constants, hand spot check") {
  const VehicleParams p = VehicleParams::crazyflie();
  UncertaintyBounds b;
  b.d_alpha_bar = Vec3::Constant(1e-4);
  b.d_a_bar = Vec3::Constant(0.5);
  AttitudeGains gq;
  gq.phi_q = Vec3::Constant(2.0);
  gq.pi_q = Vec3::Constant(1e-4);
  PositionGains gxi;
  gxi.phi_xi = Vec3::Constant(1.0);
  gxi.pi_xi = Vec3::Constant(0.5);
  const LyapunovConstants lc = lyapunov_constants(b, gq, gxi, p);

  // r = Delta / (Delta + pi) = 0.5 on both channel groups here.
  CHECK(lc.r_q(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(lc.s_star_q(0) == doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-12));
  CHECK(lc.s_star_xi(1) == doctest::Approx(std::atanh(0.5)).epsilon(1e-12));
  // c1 = min (Delta + pi)(1 - r) sqrt(2) / sqrt(max J)
  const double c1 = 2e-4 * 0.5 * std::sqrt(2.0) / std::sqrt(p.J_diag.maxCoeff());
  CHECK(lc.c1 == doctest::Approx(c1).epsilon(1e-12));
  CHECK(lc.c3 == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(lc.c5 == doctest::Approx(0.5 * std::min(lc.c1, lc.c3)).epsilon(1e-12));
  CHECK(lc.c2 == doctest::Approx(3 * lc.s_star_q(0) * 2e-4).epsilon(1e-12));
  CHECK(lc.c6 == doctest::Approx(lc.c2 + lc.c4).epsilon(1e-12));

  // Reaching time is zero when already inside the boundary layer.
  CHECK(lc.t_star_attitude(0.0) == 0.0);
  const double V0 = 2.0 * (lc.c2 / lc.c1) * (lc.c2 / lc.c1);
  CHECK(lc.t_star_attitude(V0) ==
        doctest::Approx(2.0 / lc.c1 * (std::sqrt(V0) - lc.c2 / lc.c1)));
}

TEST_CASE("disturbance model gating and bounds") {
  DisturbanceModel m;
  m.d_alpha_const = Vec3(0, 1e-4, 0);
  m.d_alpha_step = Vec3(0, 60, 0);
  m.step_on = 2.0;
  m.step_off = 7.0;
  m.wind = Vec3(5.6, 0, 0);
  m.c_d = Vec3::Constant(0.4);
  m.wind_gated = true;
  m.gate_center = Vec3(0, 0, 1);
  m.gate_radius = 1.5;

  VehicleState inside;
  inside.xi = Vec3(0, 0, 1);
  VehicleState outside;
  outside.xi = Vec3(10, 0, 1);

  CHECK(m.eval(1.9, inside).d_alpha.y() == doctest::Approx(1e-4));
  CHECK(m.eval(2.0, inside).d_alpha.y() == doctest::Approx(60.0001));
  CHECK(m.eval(6.999, inside).d_alpha.y() == doctest::Approx(60.0001));
  CHECK(m.eval(7.0, inside).d_alpha.y() == doctest::Approx(1e-4));
  CHECK(m.eval(1.0, inside).d_a.x() == doctest::Approx(0.4 * 5.6));
  CHECK(m.eval(1.0, outside).d_a.norm() == 0.0);

  Vec3 da, dal;
  m.bounds(&da, &dal, 3.0);
  CHECK(da.x() == doctest::Approx(0.4 * (5.6 + 3.0)).epsilon(1e-12));
  CHECK(dal.y() == doctest::Approx(60.0001).epsilon(1e-12));
}

TEST_CASE("hover regulation settles to millimetre accuracy") {
  const Scenario sc = make_scenario("hover");
  SimConfig cfg = default_sim_config(sc);
  cfg.duration = 5.0;
  const TrialResult r = run_trial(sc, ControllerType::kQsmc,
                                  sc.default_gains(ControllerType::kQsmc), cfg,
                                  VehicleParams::crazyflie());
  REQUIRE(r.success);
  double worst = 0.0;
  for (const TraceRow& row : r.trace) {
    if (row.t < 2.0) continue;
    worst = std::max(
        worst, (row.state.head<3>() - row.reference.head<3>()).norm());
  }
  CHECK(worst < 1e-3);
  CHECK(std::abs(r.final_xi_e) < 1e-3);
}

TEST_CASE("same seed reproduces the trace byte for byte") {
  const Scenario sc = make_scenario("hover", 7);
  SimConfig cfg = default_sim_config(sc);
  cfg.duration = 2.0;
  const auto render = [&]() {
    const TrialResult r =
        run_trial(sc, ControllerType::kAqsmc,
                  sc.default_gains(ControllerType::kAqsmc), cfg,
                  VehicleParams::crazyflie());
    return trace_csv(r.trace);
  };
  const std::string a = render();
  const std::string b = render();
  CHECK(a == b);
  CHECK(a.size() > 1000);
}

TEST_CASE("crash verdict") {
  Scenario sc = make_scenario("hover");
  sc.initial_state.xi = Vec3(0, 0, 20);  // 19 m from the setpoint
  SimConfig cfg = default_sim_config(sc);
  cfg.duration = 1.0;
  const TrialResult r = run_trial(sc, ControllerType::kQsmc,
                                  sc.default_gains(ControllerType::kQsmc), cfg,
                                  VehicleParams::crazyflie());
  CHECK_FALSE(r.success);
  CHECK(r.failure_reason.find("crash") != std::string::npos);
  CHECK(r.failure_time >= 0.0);
  REQUIRE_FALSE(r.trace.empty());
  CHECK((r.trace.back().flags & kFlagFailed) != 0);
}

TEST_CASE("aggressive gimbal reference defeats the euler benchmark") {
  const Scenario mild = make_scenario("gimbal1");
  const Scenario aggressive = make_scenario("gimbal2");
  const VehicleParams p = VehicleParams::crazyflie();

  const TrialResult ok =
      run_trial(mild, ControllerType::kEsmc,
                mild.default_gains(ControllerType::kEsmc),
                default_sim_config(mild), p);
  CHECK(ok.success);

  const TrialResult esmc =
      run_trial(aggressive, ControllerType::kEsmc,
                aggressive.default_gains(ControllerType::kEsmc),
                default_sim_config(aggressive), p);
  const TrialResult qsmc =
      run_trial(aggressive, ControllerType::kQsmc,
                aggressive.default_gains(ControllerType::kQsmc),
                default_sim_config(aggressive), p);
  REQUIRE(qsmc.success);
  const bool esmc_breaks =
      !esmc.success || esmc.metrics.q_e_rms >= 2.0 * qsmc.metrics.q_e_rms;
  CHECK(esmc_breaks);
}

TEST_CASE("sim config validation") {
  SimConfig cfg;
  cfg.position_every = 6;  // not a multiple of 4
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.position_every = 8;
  cfg.dt_physics = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
