#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "quadsmc/csvio.hpp"
#include "quadsmc/trajectory.hpp"

using namespace quadsmc;

TEST_CASE("gimbal sinusoid") {
  // Post-hold start: reference steps to (0, A, 0).
  const AttitudeOnlyReference r = gimbal_sinusoid(0.2, 10.0, 10.0);
  CHECK(r.eta_d.x() == doctest::Approx(0.0));
  CHECK(r.eta_d.y() == doctest::Approx(0.2));
  CHECK(r.eta_d.z() == doctest::Approx(0.0));

  // Zero amplitude is identically zero.
  for (double t : {0.0, 5.0, 12.0, 30.0}) {
    const AttitudeOnlyReference z = gimbal_sinusoid(0.0, t);
    CHECK(z.eta_d.norm() == 0.0);
    CHECK(z.eta_dot_d.norm() == 0.0);
    CHECK(z.eta_ddot_d.norm() == 0.0);
  }

  // During the hold everything is zero.
  CHECK(gimbal_sinusoid(0.5, 9.99).eta_d.norm() == 0.0);

  // Analytic derivatives vs central differences.
  for (double t : {11.0, 17.3, 25.0}) {
    const double h = 1e-5;
    const AttitudeOnlyReference c = gimbal_sinusoid(0.5, t);
    const AttitudeOnlyReference p = gimbal_sinusoid(0.5, t + h);
    const AttitudeOnlyReference m = gimbal_sinusoid(0.5, t - h);
    CHECK(((p.eta_d - m.eta_d) / (2 * h) - c.eta_dot_d).norm() < 1e-8);
    CHECK(((p.eta_dot_d - m.eta_dot_d) / (2 * h) - c.eta_ddot_d).norm() < 1e-7);
  }
}

TEST_CASE("figure eight boundary conditions and amplitude") {
  const Lemniscate lem;
  const double T = lem.duration();
  for (double t : {0.0, T}) {
    const ReferenceSample r = lem.sample(t);
    CHECK(r.xi_d_dot.norm() < 1e-12);
    CHECK(r.xi_d_ddot.norm() < 1e-10);
  }
  // Loop closure: the path returns to its start.
  CHECK((lem.sample(0.0).xi_d - lem.sample(T).xi_d).norm() < 1e-9);

  double peak = 0.0;
  for (double t = 0.0; t <= T; t += T / 8000) {
    peak = std::max(peak, lem.sample(t).xi_d_ddot.norm());
  }
  CHECK(peak == doctest::Approx(5.84).epsilon(0.05 / 5.84));
}

TEST_CASE("figure eight derivative chain converges at second order") {
  const Lemniscate lem;
  // Worst case over a spread of interior times, so the order estimate
  // is not taken where the controlling derivative happens to vanish.
  const auto fd_err = [&](double h) {
    Eigen::Vector4d errs = Eigen::Vector4d::Zero();
    for (double t0 : {7.0, 16.2, 21.7, 24.0, 33.3}) {
      const ReferenceSample c = lem.sample(t0);
      const ReferenceSample p = lem.sample(t0 + h);
      const ReferenceSample m = lem.sample(t0 - h);
      errs(0) = std::max(errs(0), ((p.xi_d - m.xi_d) / (2 * h) - c.xi_d_dot).norm());
      errs(1) = std::max(
          errs(1), ((p.xi_d_dot - m.xi_d_dot) / (2 * h) - c.xi_d_ddot).norm());
      errs(2) = std::max(
          errs(2), ((p.xi_d_ddot - m.xi_d_ddot) / (2 * h) - c.xi_d_d3).norm());
      errs(3) = std::max(
          errs(3), ((p.xi_d_d3 - m.xi_d_d3) / (2 * h) - c.xi_d_d4).norm());
    }
    return errs;
  };
  const Eigen::Vector4d a = fd_err(2e-3);
  const Eigen::Vector4d b = fd_err(1e-3);
  for (int k = 0; k < 4; ++k) {
    CHECK(std::log2(a(k) / b(k)) > 1.9);
  }
}

TEST_CASE("reported bounds dominate the dense grid") {
  const Lemniscate lem;
  double m0 = 0, m1 = 0, m2 = 0;
  for (double t = 0.0; t <= lem.duration(); t += 0.005) {
    const ReferenceSample r = lem.sample(t);
    m0 = std::max(m0, r.xi_d.norm());
    m1 = std::max(m1, r.xi_d_dot.norm());
    m2 = std::max(m2, r.xi_d_ddot.norm());
  }
  CHECK(lem.bounds_xi()[0] >= m0);
  CHECK(lem.bounds_xi()[1] >= m1);
  CHECK(lem.bounds_xi()[2] >= m2);
}

TEST_CASE("throw initial conditions") {
  ThrowConfig cfg;
  const VehicleState a = throw_launch_initial(77, cfg);
  const VehicleState b = throw_launch_initial(77, cfg);
  CHECK((a.to_flat() - b.to_flat()).norm() == 0.0);  // determinism
  CHECK(a.nu.norm() == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(a.nu.z() >= 0.0);  // upward bias

  cfg.upside_down = true;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const VehicleState s = throw_launch_initial(seed, cfg);
    CHECK(s.q.rotate(Vec3::UnitZ()).z() < 0.0);
    CHECK(s.omega.norm() <= cfg.omega_max + 1e-12);
  }
}

TEST_CASE("sampled trajectory load and validation") {
  const Lemniscate lem;
  const std::string path = "test_traj_tmp.csv";
  {
    std::ofstream f(path);
    f << "t,x,y,z,vx,vy,vz,ax,ay,az,jx,jy,jz,sx,sy,sz,psi,psid,psidd\n";
    for (double t = 0.0; t <= 10.0 + 1e-9; t += 0.01) {
      const ReferenceSample r = lem.sample(t);
      f << format_full(t);
      const auto put3 = [&](const Vec3& v) {
        f << ',' << format_full(v.x()) << ',' << format_full(v.y()) << ','
          << format_full(v.z());
      };
      put3(r.xi_d);
      put3(r.xi_d_dot);
      put3(r.xi_d_ddot);
      put3(r.xi_d_d3);
      put3(r.xi_d_d4);
      f << ',' << format_full(r.psi_d) << ',' << format_full(r.psi_dot_d)
        << ',' << format_full(r.psi_ddot_d) << '\n';
    }
  }
  const SampledTrajectory traj = SampledTrajectory::load_csv(path);
  const ReferenceSample got = traj.sample(4.005);
  const ReferenceSample want = lem.sample(4.005);
  CHECK((got.xi_d - want.xi_d).norm() < 1e-4);
  std::remove(path.c_str());

  // A file whose stored derivatives contradict the position column
  // (moving position, zero velocity) fails the smoothness validation.
  const std::string bad = "test_traj_bad.csv";
  {
    std::ofstream f(bad);
    f << "t,x,y,z,vx,vy,vz,ax,ay,az,jx,jy,jz,sx,sy,sz,psi,psid,psidd\n";
    for (int i = 0; i <= 50; ++i) {
      const double t = 0.1 * i;
      const double x = 0.5 * t;
      f << format_full(t) << ',' << format_full(x)
        << ",0,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n";
    }
  }
  CHECK_THROWS_AS(SampledTrajectory::load_csv(bad), std::runtime_error);
  std::remove(bad.c_str());
}

TEST_CASE("euler reference conversion is kinematically consistent") {
  AttitudeOnlyReference r;
  r.eta_d = Vec3(0.2, -0.3, 0.5);
  r.eta_dot_d = Vec3(0.4, 0.1, -0.2);
  r.eta_ddot_d = Vec3(-0.1, 0.2, 0.3);
  const AttitudeReference ar = attitude_reference_from_euler(r);
  // Oracle: difference quaternions built from perturbed Euler angles.
  const double h = 1e-6;
  AttitudeOnlyReference rp = r, rm = r;
  rp.eta_d += h * r.eta_dot_d + 0.5 * h * h * r.eta_ddot_d;
  rm.eta_d -= h * r.eta_dot_d - 0.5 * h * h * r.eta_ddot_d;
  const UnitQuaternion qp = attitude_reference_from_euler(rp).q_d;
  const UnitQuaternion qm = attitude_reference_from_euler(rm).q_d;
  const UnitQuaternion q0 = ar.q_d;
  const Vec4 qdot = (qp.coeffs() - qm.coeffs()) / (2 * h);
  const Vec3 v0 = q0.vec();
  const Vec3 qv(qdot(1), qdot(2), qdot(3));
  const Vec3 omega_fd = 2.0 * (q0.w() * qv - qdot(0) * v0 - v0.cross(qv));
  CHECK((ar.omega_d - omega_fd).norm() < 1e-6);
}
