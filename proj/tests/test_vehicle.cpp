#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "quadsmc/rng.hpp"
#include "quadsmc/vehicle.hpp"

using namespace quadsmc;

TEST_CASE("hover equilibrium has zero derivative") {
  const VehicleParams p = VehicleParams::crazyflie();
  VehicleState s;
  s.xi = Vec3(0, 0, 1);
  const WrenchCommand w{p.m * kGravity, Vec3::Zero()};
  const VehicleState::Flat dx = state_derivative(s, w, Disturbance{}, p);
  CHECK(dx.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("free fall") {
  const VehicleParams p = VehicleParams::crazyflie();
  VehicleState s;
  const VehicleState::Flat dx =
      state_derivative(s, WrenchCommand{0.0, Vec3::Zero()}, Disturbance{}, p);
  CHECK(dx(3) == doctest::Approx(0.0));
  CHECK(dx(4) == doctest::Approx(0.0));
  CHECK(dx(5) == doctest::Approx(-kGravity));
}

TEST_CASE("gyroscopic term matches componentwise expansion") {
  const VehicleParams p = VehicleParams::crazyflie();
  VehicleState s;
  s.omega = Vec3(1, 2, 3);
  const VehicleState::Flat dx =
      state_derivative(s, WrenchCommand{p.m * kGravity, Vec3::Zero()},
                       Disturbance{}, p);
  // Independent oracle: omega_dot_i = -(J_kk - J_jj) w_j w_k / J_ii
  // written out by hand from the cross product.
  const Vec3 J = p.J_diag;
  const Vec3 w = s.omega;
  const Vec3 expect(-(J(2) - J(1)) * w(1) * w(2) / J(0),
                    -(J(0) - J(2)) * w(2) * w(0) / J(1),
                    -(J(1) - J(0)) * w(0) * w(1) / J(2));
  CHECK((dx.tail<3>() - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("allocation matrix geometry") {
  const VehicleParams p = VehicleParams::crazyflie();
  const Mat4 G = build_allocation_matrix(p);
  const double arm = p.l * std::sin(p.beta);
  CHECK(arm == doctest::Approx(0.06505).epsilon(1e-3));
  for (int j = 0; j < 4; ++j) {
    CHECK(std::abs(G(1, j)) == doctest::Approx(arm).epsilon(1e-12));
    CHECK(std::abs(G(2, j)) == doctest::Approx(arm).epsilon(1e-12));
    CHECK(G(0, j) == doctest::Approx(1.0));
  }
  // Symmetric hover: equal thrusts produce pure force.
  const double F = 0.3;
  const Vec4 u = Vec4::Constant(F / 4);
  const Vec4 w = G * u;
  CHECK(w(0) == doctest::Approx(F).epsilon(1e-12));
  CHECK(std::abs(w(1)) < 1e-15);
  CHECK(std::abs(w(2)) < 1e-15);
  CHECK(std::abs(w(3)) < 1e-15);
}

TEST_CASE("allocate round trip and saturation") {
  const VehicleParams p = VehicleParams::crazyflie();
  const Mat4 G = build_allocation_matrix(p);
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    WrenchCommand w;
    w.f = rng.uniform(0.1, 3.5 * p.u_max());
    const double tm = 0.1 * p.u_max() * p.l;
    w.tau = Vec3(rng.uniform(-tm, tm), rng.uniform(-tm, tm),
                 rng.uniform(-tm, tm) * 0.1);
    const MotorCommand mc = allocate(w, p);
    if (mc.saturated) continue;
    const Vec4 back = G * mc.u;
    CHECK((back - Vec4(w.f, w.tau.x(), w.tau.y(), w.tau.z()))
              .cwiseAbs().maxCoeff() < 1e-12);
  }
  // Negative demand clamps to zero with the flag set.
  const MotorCommand neg = allocate({-1.0, Vec3::Zero()}, p);
  CHECK(neg.saturated);
  CHECK(neg.u.minCoeff() == 0.0);
}

TEST_CASE("hover allocation is symmetric") {
  const VehicleParams p = VehicleParams::crazyflie();
  const MotorCommand mc = allocate({p.hover_thrust(), Vec3::Zero()}, p);
  for (int i = 0; i < 4; ++i) {
    CHECK(mc.u(i) == doctest::Approx(p.hover_thrust() / 4).epsilon(1e-12));
    CHECK(std::abs(mc.npwm(i) - mc.npwm(0)) < 1e-15);
  }
  CHECK(mc.npwm(0) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("yaw torque splits diagonal motor pairs") {
  const VehicleParams p = VehicleParams::crazyflie();
  const Mat4 G = build_allocation_matrix(p);
  WrenchCommand w{p.hover_thrust(), Vec3(0, 0, 2e-4)};
  const MotorCommand mc = allocate(w, p);
  // Generic linear-solve oracle.
  const Vec4 u_ref =
      G.fullPivLu().solve(Vec4(w.f, w.tau.x(), w.tau.y(), w.tau.z()));
  CHECK((mc.u - u_ref).cwiseAbs().maxCoeff() < 1e-12);
  // Pairs split following the sign pattern of the reaction-torque row.
  for (int j = 0; j < 4; ++j) {
    const double dev = mc.u(j) - p.hover_thrust() / 4;
    CHECK(dev * G(3, j) > 0.0);
  }
}

TEST_CASE("wind drag model") {
  CHECK(wind_disturbance(Vec3::Zero(), Vec3::Zero(), Vec3::Constant(0.4)).norm() == 0.0);
  const Vec3 d = wind_disturbance(Vec3(5.6, 0, 0), Vec3::Zero(), Vec3::Constant(0.4));
  CHECK(d.x() == doctest::Approx(2.24).epsilon(1e-12));
  CHECK(d.y() == 0.0);
  CHECK(d.z() == 0.0);
  const Vec3 still = wind_disturbance(Vec3(5.6, 0, 0), Vec3(5.6, 0, 0),
                                      Vec3::Constant(0.4));
  CHECK(still.norm() == 0.0);
}

TEST_CASE("flat state round trip renormalizes") {
  VehicleState s;
  s.xi = Vec3(1, 2, 3);
  s.nu = Vec3(-1, 0.5, 0);
  s.q = UnitQuaternion::from_axis_angle(Vec3::UnitY(), 0.7);
  s.omega = Vec3(0.1, 0.2, 0.3);
  VehicleState::Flat x = s.to_flat();
  x.segment<4>(6) *= 1.5;  // scale the quaternion block
  const VehicleState back = VehicleState::from_flat(x);
  CHECK(back.q.coeffs().norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((back.xi - s.xi).norm() < 1e-15);
  CHECK(std::abs(back.q.dot(s.q)) == doctest::Approx(1.0).epsilon(1e-12));
}
