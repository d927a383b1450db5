#include "quadsmc/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace quadsmc {
namespace {

// Shared lemniscate instance; construction runs the amplitude
// calibration sweep, so cache per default config.
std::shared_ptr<const Lemniscate> default_lemniscate() {
  static const std::shared_ptr<const Lemniscate> lem =
      std::make_shared<Lemniscate>(LemniscateConfig{});
  return lem;
}

void apply_aqsmc_defaults(ControllerGains& g) {
  // Learning rates: the attitude law scales by J_hat (~1.7e-5), so the
  // attitude rate must be large for the gains to move at all.
  g.adapt_q.Gamma = Vec3::Constant(5e7);
  g.adapt_q.epsilon = Vec3::Constant(0.8);
  g.adapt_q.mu = Vec3::Constant(0.02);
  g.adapt_q.K_th = g.attitude.K_q;
  g.adapt_xi.Gamma = Vec3::Constant(5.0);
  g.adapt_xi.epsilon = Vec3::Constant(0.8);
  g.adapt_xi.mu = Vec3::Constant(0.02);
  g.adapt_xi.K_th = g.position.K_xi;
  g.K_q0 = g.attitude.K_q;
  g.K_xi0 = g.position.K_xi;
}

}  // namespace

ReferenceSample Scenario::position_reference(double t) const {
  switch (kind) {
    case ScenarioKind::kLemniscate:
      return lemniscate->sample(t);
    case ScenarioKind::kThrow:
      return hover_setpoint(throw_cfg.target);
    default:
      return hover_setpoint(hover_target);
  }
}

AttitudeOnlyReference Scenario::attitude_reference(double t) const {
  if (kind == ScenarioKind::kGimbalHold) {
    AttitudeOnlyReference r;
    r.eta_d = gimbal_hold_eta;
    return r;
  }
  return gimbal_sinusoid(gimbal_amplitude, t, gimbal_hold);
}

ControllerGains Scenario::default_gains(ControllerType t) const {
  ControllerGains g;  // struct defaults are the lemniscate tuning
  const bool gimbal1 = (name == "gimbal1" || kind == ScenarioKind::kGimbalHold);
  const bool gimbal2 = (name == "gimbal2");
  if (gimbal1) {
    g.attitude.K_q = Vec3(679.9, 501.6, 99.9);
    g.attitude.Lambda_q = Vec3(11.3, 9.8, 13.3);
    g.attitude.phi_q = Vec3(1.901, 1.818, 1.136);
    g.esmc.K_eta = Vec3(10, 10, 10);
    g.esmc.Lambda_eta = Vec3(7, 7, 7);
    g.esmc.phi_eta = Vec3(4, 4, 2);
    g.gtc.K_R = Vec3(752.1, 834.7, 156.0);
    g.gtc.K_omega = Vec3(202.1, 209.9, 222.1);
    g.qpd.K_P = Vec3(2251.2, 2166.9, 729.9);
    g.qpd.K_D = Vec3(232.3, 196.0, 127.1);
  } else if (gimbal2) {
    g.attitude.K_q = Vec3(4502.3, 1083.5, 121.7);
    g.attitude.Lambda_q = Vec3(11.62, 9.80, 8.48);
    g.attitude.phi_q = Vec3(4.878, 4.424, 4.484);
    // No stable tuning was found for this scenario; reuse the
    // small-amplitude values.
    g.esmc.K_eta = Vec3(10, 10, 10);
    g.esmc.Lambda_eta = Vec3(7, 7, 7);
    g.esmc.phi_eta = Vec3(4, 4, 2);
    g.gtc.K_R = Vec3(794.0, 826.3, 150.0);
    g.gtc.K_omega = Vec3(215.8, 232.8, 237.3);
    g.qpd.K_P = Vec3(1926.1, 1644.3, 1003.9);
    g.qpd.K_D = Vec3(366.0, 392.1, 138.2);
  }
  if (kind == ScenarioKind::kHover) {
    // Setpoint regulation benefits from a stiffer position loop than
    // the trajectory tuning.
    g.position.Lambda_xi = Vec3::Constant(6.0);
    g.position.K_xi = Vec3::Constant(10.0);
    g.position.phi_xi = Vec3::Constant(0.5);
  }
  if (t == ControllerType::kAqsmc) apply_aqsmc_defaults(g);
  return g;
}

std::vector<std::string> scenario_names() {
  return {"hover",      "gimbal1",         "gimbal2",
          "gimbal_hold", "lemniscate",      "lemniscate_wind",
          "throw",      "throw_upsidedown"};
}

Scenario make_scenario(const std::string& name, std::uint64_t seed) {
  Scenario s;
  s.name = name;
  s.seed = seed;
  // Nominal-model trials: only small unstructured residue declared.
  s.bounds.delta_q_bar = Vec3::Constant(1e-4);
  s.bounds.delta_xi_bar = Vec3::Constant(0.05);
  s.bounds.rho_xi = 1.0;

  if (name == "hover") {
    s.kind = ScenarioKind::kHover;
    s.duration = 10.0;
    s.hover_target = Vec3(0, 0, 1);
    s.initial_state.xi = Vec3(0.1, -0.1, 0.8);
    return s;
  }
  if (name == "gimbal1" || name == "gimbal2") {
    s.kind = ScenarioKind::kGimbal;
    s.mode = SimMode::kGimbal;
    s.duration = 40.0;
    s.gimbal_amplitude = (name == "gimbal1") ? 0.2 : 0.5;
    s.gimbal_hold = 10.0;
    s.gimbal.spring = 1e-2;    // N m / rad
    s.gimbal.damping = 2e-4;   // N m s / rad
    s.gimbal.friction = 5e-4;  // N m
    // Torque-scale rotational bound from the stand model.
    s.bounds.d_alpha_bar =
        Vec3::Constant(s.gimbal.spring * (s.gimbal_amplitude + 0.3) +
                       s.gimbal.damping * 5.0 + s.gimbal.friction);
    return s;
  }
  if (name == "gimbal_hold") {
    s.kind = ScenarioKind::kGimbalHold;
    s.mode = SimMode::kGimbalSingleAxis;
    s.duration = 12.0;
    s.gimbal_hold_eta = Vec3::Zero();
    s.gimbal.spring = 0.0;
    s.gimbal.damping = 1e-4;
    s.gimbal.friction = 0.0;
    s.gimbal.single_axis = 1;
    // Pitch-axis disturbance step during the hold, over a small
    // persistent wobble that keeps the surface from settling to exactly
    // zero (so the adaptive gain can leak back toward its floor).
    s.disturbance.d_alpha_const = Vec3(0, 5.0, 0);  // rad/s^2
    s.disturbance.d_alpha_step = Vec3(0, 60.0, 0);
    s.disturbance.step_on = 2.0;
    s.disturbance.step_off = 7.0;
    s.bounds.d_alpha_bar = Vec3(0, 65.0 * 1.66e-5, 0);
    return s;
  }
  if (name == "lemniscate" || name == "lemniscate_wind") {
    s.kind = ScenarioKind::kLemniscate;
    s.duration = 40.0;
    s.lemniscate = default_lemniscate();
    s.initial_state.xi = s.lemniscate->sample(0.0).xi_d;
    if (name == "lemniscate_wind") {
      s.disturbance.wind = Vec3(5.6, 0, 0);
      s.disturbance.c_d = Vec3::Constant(0.4);
      s.disturbance.wind_gated = true;
      s.disturbance.gate_center = Vec3(0, 0, 1);
      s.disturbance.gate_radius = 1.5;
    }
    Vec3 da, dal;
    s.disturbance.bounds(&da, &dal);
    s.bounds.d_a_bar = da;
    return s;
  }
  if (name == "throw" || name == "throw_upsidedown") {
    s.kind = ScenarioKind::kThrow;
    s.duration = 8.0;
    s.throw_cfg.upside_down = (name == "throw_upsidedown");
    s.initial_state = throw_launch_initial(seed, s.throw_cfg);
    return s;
  }
  throw std::invalid_argument("unknown scenario: " + name);
}

SimConfig default_sim_config(const Scenario& s) {
  SimConfig c;
  c.duration = s.duration;
  c.mode = s.mode;
  return c;
}

}  // namespace quadsmc
