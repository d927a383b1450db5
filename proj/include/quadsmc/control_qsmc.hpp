#pragma once

#include "quadsmc/math3d.hpp"
#include "quadsmc/vehicle.hpp"

namespace quadsmc {

/// Tracking errors: xi_e = xi - xi_d, nu_e = nu - nu_d,
/// q_e = q_d* (x) q, omega_e = omega - omega_d.
struct ErrorState {
  Vec3 xi_e = Vec3::Zero();
  Vec3 nu_e = Vec3::Zero();
  UnitQuaternion q_e;
  Vec3 omega_e = Vec3::Zero();
};

struct AttitudeGains {
  Vec3 Lambda_q{8, 8, 8};
  Vec3 K_q{400, 400, 400};
  Vec3 phi_q{3.33, 3.33, 5};
  Vec3 pi_q{1, 1, 1};
  void validate() const;
};

struct PositionGains {
  Vec3 Lambda_xi{3, 3, 2};
  Vec3 K_xi{4, 4, 3.5};
  Vec3 phi_xi{1.25, 1.25, 1.25};
  Vec3 pi_xi{1, 1, 1};
  double kappa_floor = 0.05 * 0.032 * kGravity;  // N
  void validate() const;
};

/// Adaptation parameters for one channel group (attitude or position).
struct AdaptParams {
  Vec3 Gamma{100, 100, 100};  // learning rates
  Vec3 epsilon{0.8, 0.8, 0.8};
  Vec3 mu{0.02, 0.02, 0.02};
  Vec3 K_th{400, 400, 400};  // minimum allowable gain
  void validate() const;
};

struct AdaptiveState {
  Vec3 K_q_diag = Vec3::Zero();
  Vec3 K_xi_diag = Vec3::Zero();
  Vec3 dK_xi = Vec3::Zero();   // K_xi rate, consumed by the reference chain
  Vec3 ddK_xi = Vec3::Zero();
};

struct UncertaintyBounds {
  Vec3 delta_q_bar = Vec3::Zero();
  Vec3 delta_xi_bar = Vec3::Zero();
  Vec3 d_a_bar = Vec3::Zero();
  Vec3 d_alpha_bar = Vec3::Zero();
  double rho_xi = 1.0;  // m_hat / m
};

/// q_e = q_d* (x) q, no sign normalization.
UnitQuaternion attitude_error(const UnitQuaternion& q_d, const UnitQuaternion& q);

/// Vector part of qdot_e for the quaternion error kinematics.
Vec3 qdot_vec_e(const UnitQuaternion& q_e, const Vec3& omega_e);

/// s_q = omega_e + Lambda_q sgn+(q_we) qvec_e.
Vec3 sliding_surface_attitude(const ErrorState& e, const AttitudeGains& g);

/// s_xi = nu_e + Lambda_xi xi_e.
Vec3 sliding_surface_position(const ErrorState& e, const PositionGains& g);

/// QSMC attitude law:
/// tau = Jh wd_dot + w x Jh w - Jh Lq sgn+(qwe) qdot_vec_e
///       - Jh Kq tanh(s_q / phi_q).
/// K_q_diag overrides g.K_q when adaptive gains are active.
Vec3 attitude_control(const ErrorState& e, const Vec3& qdot_vec_e_in,
                      const Vec3& omega, const Vec3& omega_dot_d,
                      const AttitudeGains& g, const VehicleParams& p,
                      const Vec3* K_q_diag = nullptr);

/// Position law producing the thrust vector demand kappa, with the
/// non-vanishing-thrust floor enforced by rescaling along direction.
Vec3 position_control(const ErrorState& e, const Vec3& xi_dd_d,
                      const PositionGains& g, const VehicleParams& p,
                      const Vec3* K_xi_diag = nullptr);

/// f = kappa . L_q(e3), evaluated via the explicit quadratic form;
/// clamped below at zero.
double thrust_from_kappa(const Vec3& kappa, const UnitQuaternion& q);

/// One forward-Euler step of the adaptive switching-gain laws.
/// Attitude channels scale by J_hat_ii, position channels by the
/// nominal mass ratio (1). Also refreshes dK_xi / ddK_xi.
AdaptiveState adapt_step(const AdaptiveState& a, const Vec3& s_q, const Vec3& s_xi,
                         const Vec3& sdot_xi, const AdaptParams& params_q,
                         const AdaptParams& params_xi, const AttitudeGains& gq,
                         const PositionGains& gxi, const VehicleParams& p,
                         double dt);

/// Minimum switching gains satisfying the robustness conditions.
Vec3 gain_condition_attitude(const UncertaintyBounds& b, const Vec3& pi,
                             const Vec3& J_hat_diag);
Vec3 gain_condition_position(const UncertaintyBounds& b, const Vec3& pi);

/// Boundary-layer threshold s*_i = phi_i atanh(r_i) with
/// r_i = Delta_i / (Delta_i + pi_i), Delta = delta_bar + d_bar.
Vec3 boundary_layer_threshold(const Vec3& delta_bar, const Vec3& d_bar,
                              const Vec3& pi, const Vec3& phi);

/// Feedforward thrust-vector derivatives for the reference chain.
/// a_e, j_e are acceleration/jerk errors; dK/ddK are zero for fixed gains.
void kappa_derivatives(const Vec3& xi_d3, const Vec3& xi_d4, const Vec3& a_e,
                       const Vec3& j_e, const Vec3& s_xi, const Vec3& sdot_xi,
                       const Vec3& sddot_xi, const PositionGains& g,
                       const VehicleParams& p, const Vec3& K_xi_diag,
                       const Vec3& dK_xi, const Vec3& ddK_xi, Vec3* kappa_dot,
                       Vec3* kappa_ddot);

}  // namespace quadsmc
