#include "quadsmc/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <ostream>
#include <sstream>

#include "quadsmc/control_qsmc.hpp"
#include "quadsmc/csvio.hpp"
#include "quadsmc/harness.hpp"
#include "quadsmc/refgen.hpp"
#include "quadsmc/rng.hpp"
#include "quadsmc/scenario.hpp"
#include "quadsmc/sim.hpp"

namespace quadsmc {
namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

UnitQuaternion random_quaternion(Rng& rng) {
  const Vec3 axis = rng.unit_vector<Vec3>();
  return UnitQuaternion::from_axis_angle(axis, rng.uniform(0.0, 2.0 * M_PI));
}

// ---------------------------------------------------------------- 1

CheckResult check_quaternion_core(double ts) {
  const double tol_iso = 1e-12 * ts;
  const double tol_comp = 1e-11 * ts;
  const double tol_mat = 1e-12 * ts;
  Rng rng(42);
  double worst_iso = 0, worst_comp = 0, worst_mat = 0;
  bool double_cover_ok = true;
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 100000; ++i) {
    const UnitQuaternion q = random_quaternion(rng);
    const UnitQuaternion p = random_quaternion(rng);
    const Vec3 v = rng.uniform(0.1, 10.0) * rng.unit_vector<Vec3>();
    const double a = rng.uniform(-3.0, 3.0);

    const Vec3 r = q.rotate(v);
    worst_iso = std::max(worst_iso,
                         std::abs(r.norm() - v.norm()) / std::max(1.0, v.norm()));
    worst_iso = std::max(worst_iso,
                         (q.rotate(a * v) - a * r).norm() / std::max(1.0, v.norm()));
    worst_comp = std::max(
        worst_comp,
        ((q * p).rotate(v) - q.rotate(p.rotate(v))).norm() / std::max(1.0, v.norm()));
    const Vec3 rm = (-q).rotate(v);
    double_cover_ok = double_cover_ok && std::memcmp(r.data(), rm.data(),
                                                     3 * sizeof(double)) == 0;
    worst_mat = std::max(worst_mat,
                         (q.to_rotation_matrix() * v - r).norm() /
                             std::max(1.0, v.norm()));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  CheckResult res;
  res.pass = worst_iso < tol_iso && worst_comp < tol_comp &&
             worst_mat < tol_mat && double_cover_ok && secs < 5.0;
  res.detail = "isometry/homog err " + fmt(worst_iso) + " (tol " +
               fmt(tol_iso) + "), composition err " + fmt(worst_comp) +
               ", matrix-oracle err " + fmt(worst_mat) + ", double cover " +
               (double_cover_ok ? "bitwise" : "MISMATCH") + ", " + fmt(secs) +
               " s";
  return res;
}

// ---------------------------------------------------------------- 2

// Attitude-only regulation toward identity; returns the integrated
// total rotation. `naive` drops sgn+ from the surface and the law.
double regulation_rotation(const UnitQuaternion& q0, bool naive) {
  const VehicleParams p = VehicleParams::crazyflie();
  AttitudeGains g;
  g.Lambda_q = Vec3::Constant(8.0);
  g.K_q = Vec3::Constant(400.0);
  g.phi_q = Vec3::Constant(0.5);
  UnitQuaternion q = q0;
  Vec3 omega = Vec3::Zero();
  const double dt = 1e-4;
  double integral = 0.0;
  for (int step = 0; step < 60000; ++step) {
    ErrorState e;
    e.q_e = q;  // q_d = identity
    e.omega_e = omega;
    Vec3 tau;
    if (naive) {
      const Vec3 s = omega + g.Lambda_q.cwiseProduct(q.vec());
      const Vec3 qve = qdot_vec_e(e.q_e, e.omega_e);
      Vec3 sw;
      for (int i = 0; i < 3; ++i) sw(i) = std::tanh(s(i) / g.phi_q(i));
      tau = omega.cross(p.J_hat_diag.cwiseProduct(omega)) -
            p.J_hat_diag.cwiseProduct(g.Lambda_q.cwiseProduct(qve)) -
            p.J_hat_diag.cwiseProduct(g.K_q.cwiseProduct(sw));
    } else {
      const Vec3 qve = qdot_vec_e(e.q_e, e.omega_e);
      tau = attitude_control(e, qve, omega, Vec3::Zero(), g, p);
    }
    // Midpoint exponential update is adequate at dt = 1e-4.
    const Vec3 wd = p.J_diag.cwiseInverse().cwiseProduct(
        tau - omega.cross(p.J_diag.cwiseProduct(omega)));
    const Vec3 w_mid = omega + 0.5 * dt * wd;
    integral += w_mid.norm() * dt;
    const double ang = w_mid.norm() * dt;
    if (ang > 0.0) {
      q = q * UnitQuaternion::from_axis_angle(w_mid.normalized(), ang);
    }
    omega += dt * wd;
    const double err_angle = 2.0 * std::asin(std::min(1.0, q.vec().norm()));
    if (err_angle < 5e-3 && omega.norm() < 5e-3) break;
  }
  return integral;
}

CheckResult check_unwinding_free(double ts) {
  // Part A: bitwise symmetry of the law under q_e -> -q_e.
  const VehicleParams p = VehicleParams::crazyflie();
  AttitudeGains g;
  Rng rng(7);
  bool bitwise = true;
  for (int i = 0; i < 10000; ++i) {
    const UnitQuaternion q_d = random_quaternion(rng);
    const UnitQuaternion q = random_quaternion(rng);
    ErrorState e;
    e.q_e = attitude_error(q_d, q);
    e.omega_e = Vec3(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
    const Vec3 omega = e.omega_e;
    const Vec3 alpha_d(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    const Vec3 t1 = attitude_control(e, qdot_vec_e(e.q_e, e.omega_e), omega,
                                     alpha_d, g, p);
    ErrorState em = e;
    em.q_e = -e.q_e;
    const Vec3 t2 = attitude_control(em, qdot_vec_e(em.q_e, em.omega_e), omega,
                                     alpha_d, g, p);
    bitwise = bitwise && std::memcmp(t1.data(), t2.data(), 3 * sizeof(double)) == 0;
  }

  // Part B: short-path regulation from a 179 deg error vs the sign-naive
  // law started on the antipodal representation of a 2 deg error.
  const UnitQuaternion q179 =
      UnitQuaternion::from_axis_angle(Vec3::UnitX(), 179.0 * M_PI / 180.0);
  const double rot_qsmc = regulation_rotation(q179, false);
  const UnitQuaternion q2 =
      -UnitQuaternion::from_axis_angle(Vec3::UnitX(), 2.0 * M_PI / 180.0);
  const double rot_naive = regulation_rotation(q2, true);

  CheckResult res;
  const double lim_short = 1.2 * M_PI * ts;
  const double lim_long = 1.8 * M_PI / ts;
  res.pass = bitwise && rot_qsmc <= lim_short && rot_naive > lim_long;
  res.detail = std::string("tau(-q_e) ") +
               (bitwise ? "bitwise equal" : "MISMATCH") +
               "; 179deg rotation integral " + fmt(rot_qsmc / M_PI) +
               "pi (limit 1.2pi), naive antipodal " + fmt(rot_naive / M_PI) +
               "pi (must exceed 1.8pi)";
  return res;
}

// ---------------------------------------------------------------- 3

CheckResult check_attitude_reaching(double ts) {
  const auto t0 = std::chrono::steady_clock::now();
  const VehicleParams p = VehicleParams::crazyflie();
  UncertaintyBounds b;
  b.delta_q_bar = Vec3::Zero();           // exact model
  b.d_alpha_bar = Vec3::Constant(2e-4);   // injected torque bound, N m
  AttitudeGains g;
  g.Lambda_q = Vec3::Constant(8.0);
  g.phi_q = Vec3::Constant(0.5);
  g.pi_q = Vec3::Constant(1e-3);          // torque-scale reaching margin
  g.K_q = gain_condition_attitude(b, g.pi_q, p.J_hat_diag);
  const LyapunovConstants lc = lyapunov_constants(b, g, PositionGains{}, p);

  UnitQuaternion q = UnitQuaternion::from_axis_angle(
      Vec3(1, 1, 0.5).normalized(), 1.5);
  Vec3 omega(1.0, -1.0, 0.5);
  const double dt = 1e-4;
  const double duration = 4.0;

  double Vq0 = -1.0, prev_V = 0.0;
  bool prev_reach = false, have_prev = false;
  long violations = 0, checks = 0;
  double last_above = 0.0;
  for (long step = 0; step * dt <= duration; ++step) {
    const double t = step * dt;
    ErrorState e;
    e.q_e = q;
    e.omega_e = omega;
    const Vec3 s = sliding_surface_attitude(e, g);
    const double V = 0.5 * s.dot(p.J_diag.cwiseProduct(s));
    if (Vq0 < 0.0) Vq0 = V;
    const bool reach = (s.cwiseAbs().array() >= lc.s_star_q.array()).all();
    if (have_prev && prev_reach && reach) {
      ++checks;
      if (V > prev_V) ++violations;
    }
    if ((s.cwiseAbs().array() >= 1.05 * lc.s_star_q.array()).any()) {
      last_above = t;
    }
    prev_V = V;
    prev_reach = reach;
    have_prev = true;

    const Vec3 tau =
        attitude_control(e, qdot_vec_e(e.q_e, e.omega_e), omega, Vec3::Zero(),
                         g, p);
    const Vec3 d = b.d_alpha_bar.cwiseProduct(
        Vec3(std::sin(40 * t), std::cos(37 * t), std::sin(53 * t + 1)));
    const Vec3 wd = p.J_diag.cwiseInverse().cwiseProduct(
        tau + d - omega.cross(p.J_diag.cwiseProduct(omega)));
    const Vec3 w_mid = omega + 0.5 * dt * wd;
    const double ang = w_mid.norm() * dt;
    if (ang > 0.0) {
      q = q * UnitQuaternion::from_axis_angle(w_mid.normalized(), ang);
    }
    omega += dt * wd;
  }
  const double t_star = lc.t_star_attitude(Vq0);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  CheckResult res;
  res.pass = violations == 0 && last_above <= 1.2 * t_star * ts && secs < 10.0;
  res.detail = "V_q monotone in reaching region: " + std::to_string(violations) +
               "/" + std::to_string(checks) + " violations; settled at t=" +
               fmt(last_above) + " s vs t*(+20%)=" + fmt(1.2 * t_star) +
               " s; " + fmt(secs) + " s";
  return res;
}

// ---------------------------------------------------------------- 4

CheckResult check_reference_derivatives(double ts) {
  const Lemniscate lem{LemniscateConfig{}};
  const VehicleParams p = VehicleParams::crazyflie();
  const auto flat_at = [&](double t) {
    const ReferenceSample r = lem.sample(t);
    FlatInput in;
    in.kappa = p.m_hat * (kGravity * Vec3::UnitZ() + r.xi_d_ddot);
    in.kappa_dot = p.m_hat * r.xi_d_d3;
    in.kappa_ddot = p.m_hat * r.xi_d_d4;
    in.psi_d = r.psi_d;
    in.psi_dot_d = r.psi_dot_d;
    in.psi_ddot_d = r.psi_ddot_d;
    return in;
  };
  const double floor = 0.025 * p.m_hat * kGravity;

  // Aggregate the worst finite-difference residual over several interior
  // times before estimating the order, so the estimate is never taken at
  // a time where the controlling derivative vanishes and roundoff wins.
  double worst_skew = 0.0;
  const auto max_errs = [&](double h) {
    std::array<double, 3> e{0.0, 0.0, 0.0};
    for (double t : {6.0, 13.0, 18.4, 22.7, 31.0}) {
      const RotationReference r0 = build_rotation_reference(flat_at(t), floor);
      const RotationReference rp = build_rotation_reference(flat_at(t + h), floor);
      const RotationReference rm = build_rotation_reference(flat_at(t - h), floor);
      const Mat3 fd1 = (rp.R - rm.R) / (2 * h);
      const Mat3 fd2 = (rp.R - 2.0 * r0.R + rm.R) / (h * h);
      e[0] = std::max(e[0], (fd1 - r0.R_dot).cwiseAbs().maxCoeff());
      e[1] = std::max(e[1], (fd2 - r0.R_ddot).cwiseAbs().maxCoeff());

      // omega_d / alpha_d through the tangent remap, differentiated
      // along R(t) = R exp(hat(omega) t).
      const Mat3 R = UnitQuaternion::from_axis_angle(
                         Vec3(0.3, -0.2, 0.9).normalized(), 0.7)
                         .to_rotation_matrix();
      const Vec3 omega(0.4, 0.2, -0.3);
      const auto omega_d_at = [&](double hh) {
        const Mat3 Rh = R * UnitQuaternion::from_axis_angle(
                                omega.normalized(), omega.norm() * hh)
                                .to_rotation_matrix();
        const RotationReference rr = build_rotation_reference(flat_at(t + hh), floor);
        return remap_to_body_tangent(Rh, rr, omega);
      };
      const AttitudeReference ar = omega_d_at(0.0);
      e[2] = std::max(
          e[2], ((omega_d_at(h).omega_d - omega_d_at(-h).omega_d) / (2 * h) -
                 ar.alpha_d)
                    .norm());
    }
    return e;
  };
  for (double t : {6.0, 13.0, 18.4, 22.7, 31.0}) {
    const RotationReference r0 = build_rotation_reference(flat_at(t), floor);
    Vec3 w0, a0;
    poisson_rates(r0, &w0, &a0);
    const Mat3 A = r0.R.transpose() * r0.R_dot;
    worst_skew = std::max(worst_skew, (A + A.transpose()).cwiseAbs().maxCoeff());
  }
  const std::array<double, 3> ea = max_errs(2e-3);
  const std::array<double, 3> eb = max_errs(1e-3);
  double worst_order = 10.0;
  for (int k = 0; k < 3; ++k) {
    worst_order = std::min(worst_order, std::log2(ea[k] / eb[k]));
  }
  CheckResult res;
  res.pass = worst_order >= 1.9 / ts && worst_skew < 1e-8 * ts;
  res.detail = "min observed convergence order " + fmt(worst_order) +
               " (need 1.9); max skew residual " + fmt(worst_skew) +
               " (tol 1e-8)";
  return res;
}

// ---------------------------------------------------------------- 5

CheckResult check_allocation(double ts) {
  const VehicleParams p = VehicleParams::crazyflie();
  const Mat4 G = build_allocation_matrix(p);
  Rng rng(11);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    WrenchCommand w;
    w.f = rng.uniform(0.1, 4.0 * p.u_max() * 0.9);
    const double tmax = 0.2 * p.u_max() * p.l;
    w.tau = Vec3(rng.uniform(-tmax, tmax), rng.uniform(-tmax, tmax),
                 rng.uniform(-tmax, tmax) * p.c_q / (p.c_t * p.l));
    const MotorCommand mc = allocate(w, p);
    if (mc.saturated) continue;
    const Vec4 back = G * mc.u;
    const Vec4 want(w.f, w.tau.x(), w.tau.y(), w.tau.z());
    worst = std::max(worst, (back - want).cwiseAbs().maxCoeff());
  }
  const MotorCommand hover = allocate({p.hover_thrust(), Vec3::Zero()}, p);
  double spread = 0.0;
  for (int i = 1; i < 4; ++i) {
    spread = std::max(spread, std::abs(hover.npwm(i) - hover.npwm(0)));
  }
  CheckResult res;
  res.pass = worst < 1e-10 * ts && spread < 1e-12 * ts;
  res.detail = "round-trip residual " + fmt(worst) +
               " (tol 1e-10); hover npwm spread " + fmt(spread) +
               " at npwm=" + fmt(hover.npwm(0)) + " (tol 1e-12)";
  return res;
}

// ------------------------------------------------------- 6 and 11

struct LemniscateRuns {
  TrialResult qsmc, aqsmc;
  double qsmc_wall = 0.0, aqsmc_wall = 0.0;
};

const LemniscateRuns& lemniscate_runs() {
  static const LemniscateRuns runs = [] {
    LemniscateRuns r;
    const Scenario sc = make_scenario("lemniscate_wind");
    const VehicleParams p = VehicleParams::crazyflie();
    SimConfig cfg = default_sim_config(sc);
    const auto timed = [&](ControllerType t, double* wall) {
      const auto t0 = std::chrono::steady_clock::now();
      TrialResult res = run_trial(sc, t, sc.default_gains(t), cfg, p);
      *wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                  .count();
      return res;
    };
    r.qsmc = timed(ControllerType::kQsmc, &r.qsmc_wall);
    r.aqsmc = timed(ControllerType::kAqsmc, &r.aqsmc_wall);
    return r;
  }();
  return runs;
}

CheckResult check_trajectory_tracking(double ts) {
  const LemniscateRuns& r = lemniscate_runs();
  double max_xi_e = 0.0;
  for (const TraceRow& row : r.qsmc.trace) {
    max_xi_e = std::max(max_xi_e,
                        (row.state.head<3>() - row.reference.head<3>()).norm());
  }
  CheckResult res;
  res.pass = r.qsmc.success && r.aqsmc.success &&
             r.aqsmc.metrics.xi_e_rms <= r.qsmc.metrics.xi_e_rms * ts &&
             r.qsmc_wall < 30.0 && r.aqsmc_wall < 30.0;
  res.detail = "windy figure-eight: qsmc " +
               std::string(r.qsmc.success ? "ok" : "FAILED(" + r.qsmc.failure_reason + ")") +
               " xi_e_rms=" + fmt(r.qsmc.metrics.xi_e_rms) + " m (max " +
               fmt(max_xi_e) + "), aqsmc " +
               std::string(r.aqsmc.success ? "ok" : "FAILED(" + r.aqsmc.failure_reason + ")") +
               " xi_e_rms=" + fmt(r.aqsmc.metrics.xi_e_rms) +
               " m; walls " + fmt(r.qsmc_wall) + "/" + fmt(r.aqsmc_wall) + " s";
  return res;
}

// ---------------------------------------------------------------- 7

CheckResult check_adaptation_laws(double ts) {
  const VehicleParams p = VehicleParams::crazyflie();
  AttitudeGains gq;
  PositionGains gxi;
  AdaptParams aq;
  aq.Gamma = Vec3::Constant(5e7);
  aq.K_th = Vec3::Constant(200.0);
  AdaptParams axi;
  axi.Gamma = Vec3::Constant(5.0);
  axi.K_th = Vec3::Constant(4.0);
  const double dt = 2e-3;

  // (a) per-step sign/floor contract under a random surface stream.
  Rng rng(3);
  AdaptiveState st;
  st.K_q_diag = aq.K_th + Vec3(5, 0, 40);
  st.K_xi_diag = axi.K_th;
  bool sign_ok = true, floor_ok = true;
  for (int i = 0; i < 2000; ++i) {
    Vec3 s_q, s_xi;
    for (int k = 0; k < 3; ++k) {
      s_q(k) = rng.uniform(-6, 6);
      s_xi(k) = rng.uniform(-3, 3);
    }
    const AdaptiveState next =
        adapt_step(st, s_q, s_xi, Vec3::Zero(), aq, axi, gq, gxi, p, dt);
    for (int k = 0; k < 3; ++k) {
      const double dK = next.K_q_diag(k) - st.K_q_diag(k);
      if (st.K_q_diag(k) > aq.K_th(k)) {
        const double regime = std::abs(s_q(k)) / gq.phi_q(k) - aq.epsilon(k);
        if (regime > 1e-9 && dK < 0) sign_ok = false;
        if (regime < -1e-9 && dK > std::abs(aq.mu(k)) * dt) sign_ok = false;
      } else if (dK < 0) {
        sign_ok = false;  // at the floor the law climbs at rate mu
      }
      if (next.K_q_diag(k) < aq.K_th(k) - aq.mu(k) * dt) floor_ok = false;
      if (next.K_xi_diag(k) < axi.K_th(k) - axi.mu(k) * dt) floor_ok = false;
    }
    st = next;
  }

  // (b) closed-loop step response on the single-axis stand. The stock
  // dead zone is sized for flight noise and swallows the stand's step,
  // so narrow it (and speed the learning rate up) for a visible response.
  const Scenario sc = make_scenario("gimbal_hold");
  const SimConfig cfg = default_sim_config(sc);
  ControllerGains ag = sc.default_gains(ControllerType::kAqsmc);
  ag.adapt_q.epsilon = Vec3::Constant(0.05);
  ag.adapt_q.Gamma = Vec3::Constant(5e8);
  const TrialResult tr = run_trial(sc, ControllerType::kAqsmc, ag, cfg, p);
  const auto K_at = [&](double t) {
    double best = 0.0, bd = 1e9;
    for (const TraceRow& row : tr.trace) {
      if (std::abs(row.t - t) < bd) {
        bd = std::abs(row.t - t);
        best = row.K_q(1);
      }
    }
    return best;
  };
  double K_peak = 0.0;
  for (const TraceRow& row : tr.trace) {
    if (row.t >= 2.0 && row.t <= 7.5) K_peak = std::max(K_peak, row.K_q(1));
  }
  const double K_onset = K_at(2.0), K_early = K_at(2.5), K_end = K_at(cfg.duration);
  const bool rises = tr.success && K_early > K_onset * 1.02;
  const bool decays = tr.success && K_end < K_peak * 0.98;

  // (c) growth contrast in closed loop: scalar pitch channel with a
  // persistent, slowly drifting disturbance torque.
  const auto scalar_run = [&](bool legacy, double horizon) {
    const double J = p.J_hat_diag(1);
    const double lambda = 10.0, phi = 1.0, Kth = 50.0;
    double theta = 0.0, thetad = 0.0, K = legacy ? 0.0 : Kth;
    double Kmax = 0.0;
    const double h = 5e-4;
    bool monotone = true;
    for (double t = 0.0; t < horizon; t += h) {
      const double d = 2e-4 * (1.0 + 0.01 * t) * (0.7 + 0.3 * std::sin(3 * t));
      const double s = thetad + lambda * theta;
      const double tau = J * (-lambda * thetad - K * std::tanh(s / phi));
      const double thetadd = (tau + d) / J;
      double Knew;
      if (legacy) {
        Knew = legacy_adaptation_step(K, s, /*gamma=*/100.0, h);
        if (Knew < K) monotone = false;
      } else {
        const double regime = std::tanh(std::abs(s) / phi - 0.8);
        Knew = K > Kth ? K + 5e7 * J * std::abs(s) * regime * h : K + 0.02 * h;
        Knew = std::max(Knew, Kth);
      }
      K = Knew;
      Kmax = std::max(Kmax, K);
      theta += h * thetad + 0.5 * h * h * thetadd;
      thetad += h * thetadd;
    }
    return std::tuple<double, double, bool>(K, Kmax, monotone);
  };
  // The legacy integrator never stops: under the persistent disturbance
  // its gain keeps climbing (~sqrt(t) once the loop tightens), while the
  // dead-zone law parks at the floor. Contrast over a 1 s vs 300 s horizon.
  const auto [K_leg_1, Km_leg_1, mono1] = scalar_run(true, 1.0);
  const auto [K_leg_10, Km_leg_10, mono10] = scalar_run(true, 300.0);
  const auto [K_66_1, Km_66_1, m661] = scalar_run(false, 1.0);
  const auto [K_66_10, Km_66_10, m6610] = scalar_run(false, 300.0);
  (void)Km_leg_1; (void)Km_leg_10; (void)K_66_1; (void)K_66_10;
  (void)m661; (void)m6610;
  const bool contrast =
      mono1 && mono10 && K_leg_10 >= 10.0 * K_leg_1 / ts &&
      Km_66_10 <= 2.0 * Km_66_1 * ts;

  CheckResult res;
  res.pass = sign_ok && floor_ok && rises && decays && contrast;
  res.detail = std::string("sign ") + (sign_ok ? "ok" : "BAD") + ", floor " +
               (floor_ok ? "ok" : "BAD") + "; step response K: " +
               fmt(K_onset) + " -> " + fmt(K_early) + " (0.5 s), peak " +
               fmt(K_peak) + ", end " + fmt(K_end) +
               (tr.success ? "" : " [trial FAILED: " + tr.failure_reason + "]") +
               "; contrast growth x" + fmt(K_leg_10 / std::max(1e-12, K_leg_1)) +
               " (need 10), bounded-law peak ratio " +
               fmt(Km_66_10 / std::max(1e-12, Km_66_1)) + " (limit 2)";
  return res;
}

// ---------------------------------------------------------------- 8

CheckResult check_euler_smc_limitation(double ts) {
  const VehicleParams p = VehicleParams::crazyflie();
  const auto run = [&](const std::string& scen, ControllerType t) {
    const Scenario sc = make_scenario(scen);
    return run_trial(sc, t, sc.default_gains(t), default_sim_config(sc), p);
  };
  const TrialResult esmc_small = run("gimbal1", ControllerType::kEsmc);
  const TrialResult esmc_big = run("gimbal2", ControllerType::kEsmc);
  const TrialResult qsmc_big = run("gimbal2", ControllerType::kQsmc);
  const TrialResult gtc_big = run("gimbal2", ControllerType::kGtc);
  const TrialResult qpd_big = run("gimbal2", ControllerType::kQpd);

  const bool esmc_breaks =
      !esmc_big.success ||
      esmc_big.metrics.q_e_rms >= 2.0 * esmc_small.metrics.q_e_rms / ts;
  CheckResult res;
  res.pass = esmc_small.success && esmc_breaks && qsmc_big.success &&
             gtc_big.success && qpd_big.success;
  res.detail =
      "esmc amp 0.2: " + std::string(esmc_small.success ? "ok" : "FAILED") +
      " (q_e_rms " + fmt(esmc_small.metrics.q_e_rms) + "); amp 0.5: " +
      (esmc_big.success ? "completed, q_e_rms " + fmt(esmc_big.metrics.q_e_rms)
                        : "failed at t=" + fmt(esmc_big.failure_time) + " (" +
                              esmc_big.failure_reason + ")") +
      "; qsmc/gtc/qpd at 0.5: " + (qsmc_big.success ? "ok" : "FAIL") + "/" +
      (gtc_big.success ? "ok" : "FAIL") + "/" +
      (qpd_big.success ? "ok" : "FAIL");
  return res;
}

// ---------------------------------------------------------------- 9

CheckResult check_sweep_determinism(double) {
  SweepSpec spec;
  spec.scenario = "lemniscate_wind";
  spec.n_trials = 10;
  spec.seed = 2024;
  const SweepSummary a = run_sweep(spec);
  const SweepSummary b = run_sweep(spec);
  const std::string csv_a = a.to_csv(), csv_b = b.to_csv();
  int qsmc_failures = -1;
  for (const ControllerSweep& cs : a.per_controller) {
    if (cs.controller == ControllerType::kQsmc) qsmc_failures = cs.failures;
  }
  CheckResult res;
  res.pass = csv_a == csv_b && qsmc_failures == 0;
  std::string fails;
  for (const ControllerSweep& cs : a.per_controller) {
    fails += to_string(cs.controller) + "=" + std::to_string(cs.failures) + " ";
  }
  res.detail = std::string("rerun ") +
               (csv_a == csv_b ? "byte-identical" : "DIFFERS") +
               "; failures per controller: " + fails;
  return res;
}

// --------------------------------------------------------------- 10

CheckResult check_throw_recovery(double ts) {
  const VehicleParams p = VehicleParams::crazyflie();
  int aq_recovered = 0, q_recovered = 0;
  double aq_time = 0.0, q_time = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Scenario sc = make_scenario("throw_upsidedown", seed);
    SimConfig cfg = default_sim_config(sc);
    cfg.record_trace = false;
    const TrialResult aq =
        run_trial(sc, ControllerType::kAqsmc,
                  sc.default_gains(ControllerType::kAqsmc), cfg, p);
    const TrialResult qs =
        run_trial(sc, ControllerType::kQsmc,
                  sc.default_gains(ControllerType::kQsmc), cfg, p);
    if (aq.recovery_time >= 0.0) {
      ++aq_recovered;
      aq_time += aq.recovery_time;
    }
    if (qs.recovery_time >= 0.0) {
      ++q_recovered;
      q_time += qs.recovery_time;
    }
  }
  const double aq_mean = aq_recovered ? aq_time / aq_recovered : 1e9;
  const double q_mean = q_recovered ? q_time / q_recovered : 1e9;
  CheckResult res;
  res.pass = aq_recovered >= 18 && aq_mean <= q_mean * ts;
  res.detail = "aqsmc recovered " + std::to_string(aq_recovered) +
               "/20 (mean " + fmt(aq_mean) + " s), qsmc " +
               std::to_string(q_recovered) + "/20 (mean " + fmt(q_mean) +
               " s)";
  return res;
}

// --------------------------------------------------------------- 11

CheckResult check_performance(double ts) {
  const LemniscateRuns& r = lemniscate_runs();
  CheckResult res;
  res.pass = r.qsmc_wall < 5.0 * ts && r.aqsmc_wall < 5.0 * ts &&
             r.aqsmc.controller_us_mean < 10.0 * ts;
  res.detail = "40 s trial walls: qsmc " + fmt(r.qsmc_wall) + " s, aqsmc " +
               fmt(r.aqsmc_wall) + " s (limit 5); aqsmc controller step " +
               fmt(r.aqsmc.controller_us_mean) + " us mean / " +
               fmt(r.aqsmc.controller_us_max) + " us max (limit 10 mean)";
  return res;
}

}  // namespace

const std::vector<Check>& verification_checks() {
  static const std::vector<Check> checks = {
      {"quaternion_core", check_quaternion_core},
      {"unwinding_free", check_unwinding_free},
      {"attitude_reaching_time", check_attitude_reaching},
      {"reference_derivatives", check_reference_derivatives},
      {"allocation", check_allocation},
      {"trajectory_tracking", check_trajectory_tracking},
      {"adaptation_laws", check_adaptation_laws},
      {"euler_smc_limitation", check_euler_smc_limitation},
      {"sweep_determinism", check_sweep_determinism},
      {"throw_recovery", check_throw_recovery},
      {"performance", check_performance},
  };
  return checks;
}

int run_verification(double tol_scale, std::ostream& out) {
  int failed = 0;
  for (const Check& c : verification_checks()) {
    CheckResult r;
    try {
      r = c.fn(tol_scale);
      r.name = c.name;
    } catch (const std::exception& e) {
      r.name = c.name;
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail
        << "\n";
    if (!r.pass) ++failed;
  }
  return failed;
}

}  // namespace quadsmc
