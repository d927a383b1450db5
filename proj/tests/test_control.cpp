#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>

#include "quadsmc/control_qsmc.hpp"
#include "quadsmc/rng.hpp"
#include "quadsmc/trajectory.hpp"

using namespace quadsmc;

namespace {
UnitQuaternion random_q(Rng& rng) {
  return UnitQuaternion::from_axis_angle(rng.unit_vector<Vec3>(),
                                         rng.uniform(0.0, 2 * M_PI));
}
}  // namespace

TEST_CASE("attitude error") {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const UnitQuaternion q = random_q(rng);
    const UnitQuaternion same = attitude_error(q, q);
    CHECK(std::abs(same.w()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(same.vec().norm() < 1e-12);
    CHECK(attitude_error(UnitQuaternion(), q).dot(q) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // Matrix oracle, up to representation sign.
    const UnitQuaternion qd = random_q(rng);
    const UnitQuaternion qe = attitude_error(qd, q);
    const Mat3 Re = qd.to_rotation_matrix().transpose() * q.to_rotation_matrix();
    const UnitQuaternion qe_ref = UnitQuaternion::from_rotation_matrix(Re);
    CHECK(std::abs(qe.dot(qe_ref)) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("error quaternion rate against propagation oracle") {
  Rng rng(22);
  for (int i = 0; i < 50; ++i) {
    const UnitQuaternion qe = random_q(rng);
    const Vec3 we(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    const Vec3 analytic = qdot_vec_e(qe, we);
    const double h = 1e-6;
    const UnitQuaternion qp =
        qe * UnitQuaternion::from_axis_angle(we.normalized(), we.norm() * h);
    const UnitQuaternion qm =
        qe * UnitQuaternion::from_axis_angle(we.normalized(), -we.norm() * h);
    const Vec3 fd = (qp.coeffs().tail<3>() - qm.coeffs().tail<3>()) / (2 * h);
    CHECK((analytic - fd).norm() < 1e-7);
  }
}

TEST_CASE("attitude sliding surface") {
  AttitudeGains g;
  ErrorState e;
  CHECK(sliding_surface_attitude(e, g).norm() == 0.0);

  // Double-cover invariance is bitwise.
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    e.q_e = random_q(rng);
    e.omega_e = Vec3(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
    const Vec3 s1 = sliding_surface_attitude(e, g);
    ErrorState em = e;
    em.q_e = -e.q_e;
    const Vec3 s2 = sliding_surface_attitude(em, g);
    CHECK(std::memcmp(s1.data(), s2.data(), sizeof s1) == 0);
  }

  // Negative-hemisphere representation, evaluated on both signs.
  g.Lambda_q = Vec3::Constant(8.0);
  e.q_e = UnitQuaternion(-0.999, Vec3(-0.04, 0, 0));
  e.omega_e = Vec3(0.1, 0, 0);
  const Vec3 s = sliding_surface_attitude(e, g);
  const double qx = e.q_e.x();  // renormalized component
  CHECK(s.x() == doctest::Approx(0.1 + 8.0 * (-1.0) * qx).epsilon(1e-12));
  ErrorState ep = e;
  ep.q_e = -e.q_e;
  CHECK((sliding_surface_attitude(ep, g) - s).norm() == 0.0);
}

TEST_CASE("attitude law limits") {
  const VehicleParams p = VehicleParams::crazyflie();
  AttitudeGains g;
  ErrorState e;
  CHECK(attitude_control(e, Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), g, p)
            .norm() == 0.0);

  // Switching term saturates at J_hat_ii * K_ii per axis.
  e.omega_e = Vec3(1e6, 0, 0);  // s enormous along axis 1, omega itself zero
  const Vec3 tau = attitude_control(e, Vec3::Zero(), Vec3::Zero(), Vec3::Zero(),
                                    g, p);
  CHECK(std::abs(tau.x()) ==
        doctest::Approx(p.J_hat_diag(0) * g.K_q(0)).epsilon(1e-9));
  // Boundedness of the switching contribution.
  CHECK(std::abs(tau.x()) <= p.J_hat_diag(0) * g.K_q.maxCoeff() * (1 + 1e-12));
}

TEST_CASE("attitude regulation reaches the boundary layer") {
  const VehicleParams p = VehicleParams::crazyflie();
  AttitudeGains g;
  g.K_q = Vec3(679.9, 501.6, 99.9);
  g.Lambda_q = Vec3(11.3, 9.8, 13.3);
  g.phi_q = Vec3(1.901, 1.818, 1.136);
  g.pi_q = Vec3::Constant(1e-3);
  const Vec3 s_star = boundary_layer_threshold(
      Vec3::Zero(), Vec3::Constant(1e-4), g.pi_q, g.phi_q);

  UnitQuaternion q = UnitQuaternion::from_axis_angle(Vec3::UnitX(), M_PI / 6);
  Vec3 omega = Vec3::Zero();
  const double dt = 1e-4;
  for (int step = 0; step < 30000; ++step) {
    ErrorState e;
    e.q_e = q;
    e.omega_e = omega;
    const Vec3 tau = attitude_control(e, qdot_vec_e(e.q_e, e.omega_e), omega,
                                      Vec3::Zero(), g, p);
    const Vec3 wd = p.J_diag.cwiseInverse().cwiseProduct(
        tau - omega.cross(p.J_diag.cwiseProduct(omega)));
    const Vec3 wm = omega + 0.5 * dt * wd;
    if (wm.norm() > 0) {
      q = q * UnitQuaternion::from_axis_angle(wm.normalized(), wm.norm() * dt);
    }
    omega += dt * wd;
  }
  ErrorState e;
  e.q_e = q;
  e.omega_e = omega;
  const Vec3 s_end = sliding_surface_attitude(e, g);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(s_end(i)) < s_star(i));
}

TEST_CASE("position law") {
  const VehicleParams p = VehicleParams::crazyflie();
  PositionGains g;
  ErrorState e;
  const Vec3 hover = position_control(e, Vec3::Zero(), g, p);
  CHECK((hover - p.m_hat * kGravity * Vec3::UnitZ()).norm() < 1e-12);

  // Switching contribution saturates at m_hat * K_xi per axis.
  ErrorState big;
  big.xi_e = Vec3(0, 0, 1e6);  // drives s_xi through Lambda only
  const Vec3 k = position_control(big, Vec3::Zero(), g, p);
  CHECK(k.z() == doctest::Approx(p.m_hat * (kGravity - g.K_xi(2))).epsilon(1e-9));

  // Peak acceleration of the default figure-eight demands above-gravity
  // thrust magnitude.
  const Lemniscate lem;
  double peak = 0.0, worst_kappa = 1e9;
  for (double t = 0.0; t <= lem.duration(); t += 0.01) {
    const ReferenceSample r = lem.sample(t);
    peak = std::max(peak, r.xi_d_ddot.norm());
    ErrorState ze;
    worst_kappa = std::min(
        worst_kappa, position_control(ze, r.xi_d_ddot, g, p).norm() / p.m_hat);
  }
  CHECK(peak == doctest::Approx(5.84).epsilon(0.01));
  CHECK(worst_kappa >= kGravity - 5.84);
}

TEST_CASE("thrust floor rescales along direction") {
  const VehicleParams p = VehicleParams::crazyflie();
  PositionGains g;
  ErrorState e;
  // Free-fall demand would null the thrust vector.
  const Vec3 k = position_control(e, -kGravity * Vec3::UnitZ(), g, p);
  CHECK(k.norm() >= g.kappa_floor * (1 - 1e-12));
}

TEST_CASE("thrust projection") {
  const UnitQuaternion id;
  CHECK(thrust_from_kappa(Vec3(0, 0, 0.4), id) == doctest::Approx(0.4));
  const UnitQuaternion q90 = UnitQuaternion::from_axis_angle(Vec3::UnitX(), M_PI / 2);
  CHECK(thrust_from_kappa(Vec3(0, 0, 0.4), q90) == doctest::Approx(0.0).epsilon(1e-12));
  Rng rng(24);
  for (int i = 0; i < 100; ++i) {
    const UnitQuaternion q = random_q(rng);
    const Vec3 kappa(rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0.2, 1));
    const double f = thrust_from_kappa(kappa, q);
    const double oracle = std::max(0.0, kappa.dot(q.rotate(Vec3::UnitZ())));
    CHECK(f == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("adaptation step regimes") {
  const VehicleParams p = VehicleParams::crazyflie();
  AttitudeGains gq;
  PositionGains gxi;
  AdaptParams aq, axi;
  aq.K_th = Vec3::Constant(100.0);
  axi.K_th = Vec3::Constant(4.0);
  const double dt = 2e-3;

  AdaptiveState st;
  st.K_q_diag = Vec3::Constant(150.0);  // above the floor
  st.K_xi_diag = Vec3::Constant(6.0);

  // |s| = 0 freezes the attitude gains.
  AdaptiveState a0 = adapt_step(st, Vec3::Zero(), Vec3::Zero(), Vec3::Zero(),
                                aq, axi, gq, gxi, p, dt);
  CHECK((a0.K_q_diag - st.K_q_diag).norm() == 0.0);

  // Small |s| (inside epsilon * phi) decreases the gain.
  const Vec3 s_small = 0.1 * gq.phi_q.cwiseProduct(aq.epsilon);
  AdaptiveState a1 = adapt_step(st, s_small, Vec3::Zero(), Vec3::Zero(), aq,
                                axi, gq, gxi, p, dt);
  for (int i = 0; i < 3; ++i) CHECK(a1.K_q_diag(i) < st.K_q_diag(i));

  // Large |s| increases it.
  const Vec3 s_big = 3.0 * gq.phi_q.cwiseProduct(aq.epsilon);
  AdaptiveState a2 = adapt_step(st, s_big, Vec3::Zero(), Vec3::Zero(), aq, axi,
                                gq, gxi, p, dt);
  for (int i = 0; i < 3; ++i) CHECK(a2.K_q_diag(i) > st.K_q_diag(i));

  // At the floor the rate is exactly mu.
  AdaptiveState floor = st;
  floor.K_q_diag = aq.K_th;
  floor.K_xi_diag = axi.K_th;
  AdaptiveState a3 = adapt_step(floor, s_small, s_small, Vec3::Zero(), aq, axi,
                                gq, gxi, p, dt);
  for (int i = 0; i < 3; ++i) {
    CHECK(a3.K_q_diag(i) == doctest::Approx(aq.K_th(i) + aq.mu(i) * dt).epsilon(1e-15));
    CHECK(a3.K_xi_diag(i) == doctest::Approx(axi.K_th(i) + axi.mu(i) * dt).epsilon(1e-15));
  }
}

TEST_CASE("minimum switching gains") {
  UncertaintyBounds b;
  const Vec3 pi1 = Vec3::Constant(1.0);
  CHECK((gain_condition_attitude(b, pi1, Vec3::Constant(1.0)) - Vec3::Constant(1.0))
            .norm() < 1e-15);

  b.delta_q_bar = Vec3::Zero();
  b.d_alpha_bar = Vec3::Zero();
  const Vec3 J = VehicleParams::crazyflie().J_hat_diag;
  const Vec3 k =
      gain_condition_attitude(b, Vec3::Constant(0.001), J);
  CHECK(k(2) == doctest::Approx(0.001 / 2.93e-5).epsilon(1e-6));
  CHECK(k(2) == doctest::Approx(34.1).epsilon(0.01));

  UncertaintyBounds bx;
  bx.delta_xi_bar = Vec3::Constant(1.0);
  bx.d_a_bar = Vec3::Constant(2.0);
  bx.rho_xi = 1.0;
  CHECK((gain_condition_position(bx, Vec3::Constant(1.0)) - Vec3::Constant(4.0))
            .norm() < 1e-12);
}

TEST_CASE("boundary layer threshold") {
  const Vec3 s = boundary_layer_threshold(Vec3::Constant(0.5), Vec3::Constant(0.5),
                                          Vec3::Constant(1.0), Vec3::Constant(2.0));
  // r = 1/2, s* = 2 atanh(0.5)
  CHECK(s(0) == doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-12));
}

TEST_CASE("thrust vector derivative chain against finite differences") {
  const VehicleParams p = VehicleParams::crazyflie();
  PositionGains g;
  // Smooth synthetic error/reference trajectories with analytic chains.
  const auto xi_e_at = [](double t) -> Vec3 {
    return 0.1 * Vec3(std::sin(t), std::cos(t), std::sin(2 * t));
  };
  const auto nu_e_at = [](double t) -> Vec3 {
    return 0.1 * Vec3(std::cos(t), -std::sin(t), 2 * std::cos(2 * t));
  };
  const auto a_e_at = [](double t) -> Vec3 {
    return 0.1 * Vec3(-std::sin(t), -std::cos(t), -4 * std::sin(2 * t));
  };
  const auto j_e_at = [](double t) -> Vec3 {
    return 0.1 * Vec3(-std::cos(t), std::sin(t), -8 * std::cos(2 * t));
  };
  const auto xidd_at = [](double t) -> Vec3 {
    return 0.5 * Vec3(std::sin(3 * t), std::cos(3 * t), std::sin(t));
  };
  const auto xi3_at = [](double t) -> Vec3 {
    return 0.5 * Vec3(3 * std::cos(3 * t), -3 * std::sin(3 * t), std::cos(t));
  };
  const auto xi4_at = [](double t) -> Vec3 {
    return 0.5 * Vec3(-9 * std::sin(3 * t), -9 * std::cos(3 * t), -std::sin(t));
  };
  const auto kappa_at = [&](double t) {
    ErrorState e;
    e.xi_e = xi_e_at(t);
    e.nu_e = nu_e_at(t);
    return position_control(e, xidd_at(t), g, p);
  };
  const double t0 = 0.8;
  ErrorState e;
  e.xi_e = xi_e_at(t0);
  e.nu_e = nu_e_at(t0);
  const Vec3 s_xi = sliding_surface_position(e, g);
  const Vec3 sdot = a_e_at(t0) + g.Lambda_xi.cwiseProduct(nu_e_at(t0));
  const Vec3 sddot = j_e_at(t0) + g.Lambda_xi.cwiseProduct(a_e_at(t0));
  Vec3 kd, kdd;
  kappa_derivatives(xi3_at(t0), xi4_at(t0), a_e_at(t0), j_e_at(t0), s_xi, sdot,
                    sddot, g, p, g.K_xi, Vec3::Zero(), Vec3::Zero(), &kd, &kdd);
  const double h = 1e-4;
  const Vec3 fd1 = (kappa_at(t0 + h) - kappa_at(t0 - h)) / (2 * h);
  const Vec3 fd2 =
      (kappa_at(t0 + h) - 2 * kappa_at(t0) + kappa_at(t0 - h)) / (h * h);
  CHECK((kd - fd1).norm() < 1e-6);
  CHECK((kdd - fd2).norm() < 1e-4);
}
