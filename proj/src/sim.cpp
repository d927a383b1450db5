#include "quadsmc/sim.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "quadsmc/euler.hpp"
#include "quadsmc/scenario.hpp"

namespace quadsmc {

void SimConfig::validate() const {
  if (!(dt_physics > 0.0) || !(duration > 0.0)) {
    throw std::invalid_argument("sim: dt_physics and duration must be > 0");
  }
  if (attitude_every < 1 || position_every < 1 ||
      position_every % attitude_every != 0) {
    throw std::invalid_argument(
        "sim: loop divisors must be >= 1 with the position loop a "
        "multiple of the attitude loop");
  }
  if (record_stride < 1) {
    throw std::invalid_argument("sim: record_stride must be >= 1");
  }
}

Disturbance DisturbanceModel::eval(double t, const VehicleState& s) const {
  Disturbance d;
  d.d_a = d_a_const;
  d.d_alpha = d_alpha_const;
  if (t >= step_on && t < step_off) d.d_alpha += d_alpha_step;
  if (wind.squaredNorm() > 0.0) {
    const bool active =
        !wind_gated || (s.xi - gate_center).norm() <= gate_radius;
    if (active) d.d_a += wind_disturbance(wind, s.nu, c_d);
  }
  return d;
}

void DisturbanceModel::bounds(Vec3* d_a_bar, Vec3* d_alpha_bar,
                              double nu_max) const {
  *d_a_bar = d_a_const.cwiseAbs() +
             c_d.cwiseProduct(wind.cwiseAbs() + Vec3::Constant(nu_max));
  *d_alpha_bar = d_alpha_const.cwiseAbs() + d_alpha_step.cwiseAbs();
}

LyapunovConstants lyapunov_constants(const UncertaintyBounds& b,
                                     const AttitudeGains& gq,
                                     const PositionGains& gxi,
                                     const VehicleParams& p) {
  LyapunovConstants lc;
  const Vec3 Dq = b.delta_q_bar + b.d_alpha_bar;  // torque scale
  const Vec3 Dxi = b.delta_xi_bar + b.d_a_bar;    // acceleration scale
  double min_q = 1e300, min_xi = 1e300;
  lc.c2 = lc.c4 = 0.0;
  for (int i = 0; i < 3; ++i) {
    lc.r_q(i) = Dq(i) / (Dq(i) + gq.pi_q(i));
    lc.s_star_q(i) = gq.phi_q(i) * std::atanh(lc.r_q(i));
    min_q = std::min(min_q, (Dq(i) + gq.pi_q(i)) * (1.0 - lc.r_q(i)));
    lc.c2 += lc.s_star_q(i) * (Dq(i) + gq.pi_q(i));

    lc.r_xi(i) = Dxi(i) / (Dxi(i) + gxi.pi_xi(i));
    lc.s_star_xi(i) = gxi.phi_xi(i) * std::atanh(lc.r_xi(i));
    min_xi = std::min(min_xi, (Dxi(i) + gxi.pi_xi(i)) * (1.0 - lc.r_xi(i)));
    lc.c4 += lc.s_star_xi(i) * (Dxi(i) + gxi.pi_xi(i));
  }
  lc.c1 = min_q * std::sqrt(2.0) / std::sqrt(p.J_diag.maxCoeff());
  lc.c3 = min_xi * std::sqrt(2.0);
  lc.c5 = 0.5 * std::min(lc.c1, lc.c3);
  lc.c6 = lc.c2 + lc.c4;
  return lc;
}

double lyapunov_c7(const AdaptParams& aq, const AdaptParams& axi,
                   const Vec3& K_q_star, const Vec3& K_xi_star) {
  double c7 = 0.0;
  for (int i = 0; i < 3; ++i) {
    c7 += aq.mu(i) / aq.Gamma(i) * std::abs(aq.K_th(i) - K_q_star(i));
    c7 += axi.mu(i) / axi.Gamma(i) * std::abs(axi.K_th(i) - K_xi_star(i));
  }
  return c7;
}

double LyapunovConstants::t_star_attitude(double Vq0) const {
  return std::max(0.0, 2.0 / c1 * (std::sqrt(Vq0) - c2 / c1));
}

VehicleState rk4_step(
    const VehicleState& s,
    const std::function<VehicleState::Flat(const VehicleState&)>& deriv,
    double dt) {
  const VehicleState::Flat x0 = s.to_flat();
  const VehicleState::Flat k1 = deriv(s);
  const VehicleState::Flat k2 =
      deriv(VehicleState::from_flat(x0 + 0.5 * dt * k1));
  const VehicleState::Flat k3 =
      deriv(VehicleState::from_flat(x0 + 0.5 * dt * k2));
  const VehicleState::Flat k4 = deriv(VehicleState::from_flat(x0 + dt * k3));
  const VehicleState::Flat x1 =
      x0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!x1.allFinite()) throw NonFinite("integration produced NaN/Inf");
  return VehicleState::from_flat(x1);  // renormalizes the quaternion
}

double legacy_adaptation_step(double k, double s, double gamma, double dt) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  return k + gamma * std::abs(s) * dt;
}

namespace {

// Rotation vector (angle * axis) of the short rotation represented by q.
Vec3 rotation_vector(const UnitQuaternion& q) {
  const double vn = q.vec().norm();
  if (vn < 1e-12) return Vec3::Zero();
  const double angle = 2.0 * std::atan2(vn, std::abs(q.w()));
  return sgn_plus(q.w()) * angle / vn * q.vec();
}

Vec3 gimbal_moment(const GimbalConfig& g, const VehicleState& s) {
  Vec3 tau = -g.spring * rotation_vector(s.q) - g.damping * s.omega;
  for (int i = 0; i < 3; ++i) {
    tau(i) -= g.friction * std::tanh(s.omega(i) / 0.05);
  }
  return tau;
}

double yaw_of(const UnitQuaternion& q) {
  const Mat3 R = q.to_rotation_matrix();
  return std::atan2(R(1, 0), R(0, 0));
}

}  // namespace

TrialResult run_trial(const Scenario& scenario, ControllerType type,
                      const ControllerGains& gains, const SimConfig& cfg,
                      const VehicleParams& params) {
  cfg.validate();
  params.validate();
  TrialResult res;
  const double dt = cfg.dt_physics;
  const long n_steps = std::lround(cfg.duration / dt);
  const bool gimbal = cfg.mode != SimMode::kFreeFlight;
  const bool single_axis = cfg.mode == SimMode::kGimbalSingleAxis;
  const int axis = scenario.gimbal.single_axis;

  const LyapunovConstants lc = lyapunov_constants(
      scenario.bounds, gains.attitude,
      type == ControllerType::kQpd ? gains.qpd.position : gains.position,
      params);

  std::unique_ptr<Controller> controller;
  VehicleState state = scenario.initial_state;
  MetricsAccumulator acc;
  MotorCommand mc;
  double t = 0.0;
  double prev_Vq = 0.0;
  bool prev_reaching = false;
  bool have_prev_V = false;
  double last_above_105 = 0.0;
  double last_not_recovered = 0.0;
  bool recovered_now = false;
  double ctrl_us_sum = 0.0;
  long ctrl_ticks = 0;

  const auto fail = [&](const std::string& why) {
    res.success = false;
    res.failure_reason = why;
    res.failure_time = t;
    if (!res.trace.empty()) res.trace.back().flags |= kFlagFailed;
  };

  try {
    controller = make_controller(type, gains, params);
    for (long step = 0; step <= n_steps; ++step) {
      t = step * dt;

      // Control loops (ZOH between their boundaries).
      if (step % cfg.attitude_every == 0) {
        const auto tick_start = std::chrono::steady_clock::now();
        if (gimbal) {
          controller->set_gimbal_reference(scenario.attitude_reference(t));
        } else if (step % cfg.position_every == 0) {
          controller->position_tick(state, scenario.position_reference(t),
                                    dt * cfg.position_every);
        }
        controller->attitude_tick(state, dt * cfg.attitude_every);
        const double us =
            std::chrono::duration<double, std::micro>(
                std::chrono::steady_clock::now() - tick_start)
                .count();
        ctrl_us_sum += us;
        res.controller_us_max = std::max(res.controller_us_max, us);
        ++ctrl_ticks;
      }
      const ControlDiagnostics& diag = controller->diagnostics();
      const WrenchCommand cmd = controller->command();
      mc = allocate(cmd, params);
      if (mc.saturated) ++res.saturation_steps;
      const WrenchCommand actual = wrench_from_motors(mc, params);

      // Per-tick bookkeeping at the attitude rate.
      if (step % cfg.attitude_every == 0) {
        const Vec3 xi_e =
            gimbal ? Vec3::Zero().eval()
                   : Vec3(state.xi - diag.pos_ref.xi_d);
        const double psi_e =
            wrap_angle(yaw_of(state.q) - diag.pos_ref.psi_d);
        acc.add(diag.q_e, xi_e, psi_e, mc.npwm);

        const double V_q =
            0.5 * diag.s_q.dot(params.J_diag.cwiseProduct(diag.s_q));
        const bool reaching =
            (diag.s_q.cwiseAbs().array() >= lc.s_star_q.array()).all();
        if (have_prev_V && prev_reaching && reaching) {
          ++res.lyap_checks_q;
          if (V_q > prev_Vq * (1.0 + 1e-12) + 1e-15) ++res.lyap_violations_q;
        }
        if ((diag.s_q.cwiseAbs().array() >= 1.05 * lc.s_star_q.array())
                .any()) {
          last_above_105 = t;
        }
        prev_Vq = V_q;
        prev_reaching = reaching;
        have_prev_V = true;
      }

      if (cfg.record_trace && step % cfg.record_stride == 0) {
        TraceRow row;
        row.t = t;
        row.state = state.to_flat();
        VehicleState ref_state;
        ref_state.xi = diag.pos_ref.xi_d;
        ref_state.nu = diag.pos_ref.xi_d_dot;
        ref_state.q = diag.att_ref.q_d;
        ref_state.omega = diag.att_ref.omega_d;
        row.reference = ref_state.to_flat();
        row.q_e = diag.q_e.coeffs();
        row.s_q = diag.s_q;
        row.s_xi = diag.s_xi;
        row.f = cmd.f;
        row.tau = cmd.tau;
        row.npwm = mc.npwm;
        row.K_q = diag.K_q;
        row.K_xi = diag.K_xi;
        row.V_q = 0.5 * diag.s_q.dot(params.J_diag.cwiseProduct(diag.s_q));
        row.V_xi = 0.5 * diag.s_xi.squaredNorm();
        row.V_2 = row.V_q + row.V_xi;
        if (mc.saturated) row.flags |= kFlagSaturated;
        if ((diag.s_q.cwiseAbs().array() >= lc.s_star_q.array()).all()) {
          row.flags |= kFlagReachingQ;
        }
        if ((diag.s_xi.cwiseAbs().array() >= lc.s_star_xi.array()).all()) {
          row.flags |= kFlagReachingXi;
        }
        res.trace.push_back(row);
      }

      if (step == n_steps) break;

      // Plant step.
      Disturbance d = scenario.disturbance.eval(t, state);
      if (gimbal) {
        const Vec3 tau_g = gimbal_moment(scenario.gimbal, state);
        d.d_alpha += params.J_diag.cwiseInverse().cwiseProduct(tau_g);
      }
      auto deriv = [&](const VehicleState& x) {
        VehicleState xc = x;
        if (single_axis) {
          for (int i = 0; i < 3; ++i) {
            if (i != axis) xc.omega(i) = 0.0;
          }
        }
        VehicleState::Flat dx = state_derivative(xc, actual, d, params);
        if (gimbal) dx.head<6>().setZero();
        if (single_axis) {
          for (int i = 0; i < 3; ++i) {
            if (i != axis) dx(10 + i) = 0.0;
          }
        }
        return dx;
      };
      state = rk4_step(state, deriv, dt);
      if (gimbal) {
        state.xi.setZero();
        state.nu.setZero();
      }
      if (single_axis) {
        for (int i = 0; i < 3; ++i) {
          if (i != axis) state.omega(i) = 0.0;
        }
      }

      // Failure checks.
      if (!gimbal) {
        const Vec3 ref_xi = controller->diagnostics().pos_ref.xi_d;
        if ((state.xi - ref_xi).norm() > cfg.crash_threshold) {
          fail("crash: position error exceeded threshold");
          break;
        }
      }
      if (scenario.kind == ScenarioKind::kThrow) {
        recovered_now = (state.xi - scenario.throw_cfg.target).norm() < 0.1 &&
                        state.nu.norm() < 0.2;
        if (!recovered_now) last_not_recovered = t + dt;
      }
    }
    if (res.failure_reason.empty()) res.success = true;
  } catch (const std::exception& e) {
    fail(e.what());
  }

  if (acc.count() > 0) res.metrics = acc.finalize();
  if (ctrl_ticks > 0) res.controller_us_mean = ctrl_us_sum / ctrl_ticks;
  res.reach_time_q = last_above_105;
  if (scenario.kind == ScenarioKind::kThrow && res.success && recovered_now) {
    res.recovery_time = last_not_recovered;
  }
  if (!gimbal && controller) {
    res.final_xi_e =
        (state.xi - controller->diagnostics().pos_ref.xi_d).norm();
  }
  return res;
}

}  // namespace quadsmc
