#pragma once

#include "quadsmc/math3d.hpp"

namespace quadsmc {

/// Physical vehicle parameters. The true mass/inertia (m, J) drive the
/// plant; the nominal values (m_hat, J_hat) are what the controllers see.
struct VehicleParams {
  double m = 0.032;        // kg, true mass
  Vec3 J_diag{1.66e-5, 1.66e-5, 2.93e-5};  // kg m^2, true inertia diagonal
  double m_hat = 0.032;    // kg, nominal mass
  Vec3 J_hat_diag{1.66e-5, 1.66e-5, 2.93e-5};
  double c_t = 2.88e-8;    // N s^2, rotor thrust coefficient
  double c_q = 7.24e-10;   // N m s^2, rotor torque coefficient
  double l = 0.092;        // m, arm length
  double beta = M_PI / 4;  // rad, arm geometry angle
  // Rotor speed saturation. Default rounds sqrt(m_hat*g/c_t) so hover
  // sits near NPWM 0.5 per motor.
  double omega_rotor_max = 3300.0;  // rad/s

  static VehicleParams crazyflie();

  Mat3 J() const { return J_diag.asDiagonal(); }
  Mat3 J_hat() const { return J_hat_diag.asDiagonal(); }
  double u_max() const { return c_t * omega_rotor_max * omega_rotor_max; }
  double hover_thrust() const { return m_hat * kGravity; }
  void validate() const;  // throws std::invalid_argument
};

struct VehicleState {
  Vec3 xi = Vec3::Zero();    // position, m
  Vec3 nu = Vec3::Zero();    // velocity, m/s
  UnitQuaternion q;          // attitude, body->inertial
  Vec3 omega = Vec3::Zero(); // body rates, rad/s

  using Flat = Eigen::Matrix<double, 13, 1>;
  Flat to_flat() const;
  /// Quaternion part is renormalized.
  static VehicleState from_flat(const Flat& x);
};

struct WrenchCommand {
  double f = 0.0;  // N, total thrust along body z
  Vec3 tau = Vec3::Zero();  // N m, body moments
};

struct MotorCommand {
  Vec4 u = Vec4::Zero();     // N, per-rotor thrust inputs (c_t * varpi^2)
  Vec4 npwm = Vec4::Zero();  // varpi / varpi_max, in [0, 1]
  bool saturated = false;    // any clamp fired
};

struct Disturbance {
  Vec3 d_a = Vec3::Zero();      // m/s^2, translational
  Vec3 d_alpha = Vec3::Zero();  // rad/s^2, rotational
};

/// Mixer matrix G mapping per-rotor inputs to [f; tau].
/// Throws std::runtime_error if G is near-singular (cond > 1e12).
Mat4 build_allocation_matrix(const VehicleParams& p);

/// Invert the mixer, clamp to [0, u_max], report saturation.
MotorCommand allocate(const WrenchCommand& w, const VehicleParams& p);

/// The wrench actually delivered after motor saturation.
WrenchCommand wrench_from_motors(const MotorCommand& mc, const VehicleParams& p);

/// Continuous rigid-body dynamics. Quaternion derivative left
/// unnormalized; integrators renormalize after the step.
VehicleState::Flat state_derivative(const VehicleState& s, const WrenchCommand& w,
                                    const Disturbance& d, const VehicleParams& p);

/// First-order relative-velocity drag: d_a = c_d o (wind - nu).
Vec3 wind_disturbance(const Vec3& wind, const Vec3& nu, const Vec3& c_d);

}  // namespace quadsmc
