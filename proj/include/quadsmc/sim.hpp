#pragma once

#include <functional>
#include <string>
#include <vector>

#include "quadsmc/controller.hpp"
#include "quadsmc/metrics.hpp"
#include "quadsmc/vehicle.hpp"

namespace quadsmc {

struct NonFinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SimMode { kFreeFlight, kGimbal, kGimbalSingleAxis };

struct SimConfig {
  double dt_physics = 5e-4;  // 2 kHz plant
  int attitude_every = 4;    // 500 Hz attitude loop
  int position_every = 8;    // 250 Hz position loop
  double duration = 40.0;
  SimMode mode = SimMode::kFreeFlight;
  double crash_threshold = 5.0;  // m of position error
  int record_stride = 4;         // trace rows every this many steps
  bool record_trace = true;
  void validate() const;  // throws std::invalid_argument
};

/// Unmodeled support moment of the attitude test stand: spring toward
/// the upright attitude plus viscous and (smoothed) Coulomb friction.
struct GimbalConfig {
  double spring = 0.0;     // N m / rad
  double damping = 0.0;    // N m s / rad
  double friction = 0.0;   // N m
  int single_axis = 1;     // constrained axis in single-axis mode (pitch)
};

/// Declarative disturbance description so config snapshots reproduce it.
struct DisturbanceModel {
  Vec3 d_a_const = Vec3::Zero();      // m/s^2
  Vec3 d_alpha_const = Vec3::Zero();  // rad/s^2
  Vec3 d_alpha_step = Vec3::Zero();   // active on [step_on, step_off)
  double step_on = 0.0;
  double step_off = 0.0;
  Vec3 wind = Vec3::Zero();  // m/s
  Vec3 c_d = Vec3::Zero();   // per-axis drag gain
  bool wind_gated = false;   // restrict wind to a sphere around gate_center
  Vec3 gate_center = Vec3::Zero();
  double gate_radius = 0.0;

  Disturbance eval(double t, const VehicleState& s) const;
  /// Componentwise bounds over all states/times (for gain conditions).
  void bounds(Vec3* d_a_bar, Vec3* d_alpha_bar, double nu_max = 3.0) const;
};

/// Constants of the reaching/boundedness bounds, computed from the
/// configured uncertainty bounds and gains.
struct LyapunovConstants {
  Vec3 r_q, s_star_q;
  Vec3 r_xi, s_star_xi;
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0, c6 = 0, c7 = 0;

  /// Attitude reaching time from V_q(0).
  double t_star_attitude(double Vq0) const;
};

LyapunovConstants lyapunov_constants(const UncertaintyBounds& b,
                                     const AttitudeGains& gq,
                                     const PositionGains& gxi,
                                     const VehicleParams& p);

/// c7 needs the adaptation parameters and the ideal gains K*.
double lyapunov_c7(const AdaptParams& aq, const AdaptParams& axi,
                   const Vec3& K_q_star, const Vec3& K_xi_star);

// Trace flags.
inline constexpr unsigned kFlagSaturated = 1u;
inline constexpr unsigned kFlagReachingQ = 2u;   // all |s_q_i| >= s*_i
inline constexpr unsigned kFlagReachingXi = 4u;  // all |s_xi_i| >= s*_i
inline constexpr unsigned kFlagFailed = 8u;

struct TraceRow {
  double t = 0.0;
  VehicleState::Flat state = VehicleState::Flat::Zero();
  VehicleState::Flat reference = VehicleState::Flat::Zero();
  Vec4 q_e = Vec4(1, 0, 0, 0);
  Vec3 s_q = Vec3::Zero();
  Vec3 s_xi = Vec3::Zero();
  double f = 0.0;
  Vec3 tau = Vec3::Zero();
  Vec4 npwm = Vec4::Zero();
  Vec3 K_q = Vec3::Zero();
  Vec3 K_xi = Vec3::Zero();
  double V_q = 0.0, V_xi = 0.0, V_2 = 0.0;
  unsigned flags = 0;
};

struct TrialResult {
  std::vector<TraceRow> trace;
  TrialMetrics metrics;
  bool success = false;
  std::string failure_reason;
  double failure_time = -1.0;
  long saturation_steps = 0;
  // Attitude Lyapunov monitor: V_q increases across an attitude-tick
  // interval whose both endpoints sit in the reaching region.
  long lyap_violations_q = 0;
  long lyap_checks_q = 0;
  double reach_time_q = -1.0;  // first time all |s_q_i| < 1.05 s*_i for good
  double controller_us_mean = 0.0;
  double controller_us_max = 0.0;
  double recovery_time = -1.0;  // throw scenario
  double final_xi_e = 0.0;
};

/// RK4 with post-step quaternion renormalization.
/// Throws NonFinite when the step produces NaN/Inf.
VehicleState rk4_step(
    const VehicleState& s,
    const std::function<VehicleState::Flat(const VehicleState&)>& deriv,
    double dt);

/// Divergent textbook adaptation, kept as a contrast oracle:
/// k' = k + gamma |s| dt.
double legacy_adaptation_step(double k, double s, double gamma, double dt);

struct Scenario;  // scenario.hpp

TrialResult run_trial(const Scenario& scenario, ControllerType type,
                      const ControllerGains& gains, const SimConfig& cfg,
                      const VehicleParams& params);

}  // namespace quadsmc
