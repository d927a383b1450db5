#pragma once

#include "quadsmc/control_qsmc.hpp"
#include "quadsmc/euler.hpp"
#include "quadsmc/math3d.hpp"
#include "quadsmc/vehicle.hpp"

namespace quadsmc {

/// Raised when the ESMC arcsin setpoint arguments leave [-1, 1]
/// (aggressive reference beyond the method's reach).
struct ArcsinDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ESMCGains {
  Vec3 K_eta{8, 8, 8};
  Vec3 Lambda_eta{4, 4, 4};
  Vec3 phi_eta{2, 2, 2};
  Vec3 K_xi{5, 5, 8};
  Vec3 Lambda_xi{2, 2, 1};
  Vec3 phi_xi{1.11, 1.11, 1.11};
};

struct GTCGains {
  // The rate/attitude gains multiply J_hat (stored here as the raw
  // diagonal factors).
  Vec3 K_R{414.43, 345.56, 246.42};
  Vec3 K_omega{59.08, 69.54, 63.90};
  Vec3 K_xi{7.70, 6.91, 7.37};
  Vec3 K_nu{2.34, 1.67, 4.18};
};

struct QPDGains {
  Vec3 K_P{1045.54, 881.97, 678.06};  // x J_hat
  Vec3 K_D{97.97, 106.79, 118.29};    // x J_hat
  PositionGains position;             // QSMC position law
};

/// Euler-SMC attitude setpoint from the position loop:
/// phi_d = asin(u_x sin psi_d - u_y cos psi_d),
/// theta_d = asin((u_x cos psi_d + u_y sin psi_d) / cos phi_d).
/// Throws ArcsinDomain when an argument leaves [-1, 1].
Vec3 esmc_attitude_setpoint(double u_x, double u_y, double psi_d);

/// f = m_hat / (cos phi cos theta) * (xi_dd_d3 + g - Lambda_33 nu_e3
///     - K_33 tanh(s_xi3 / phi_3)); also emits u_x, u_y.
/// Throws GimbalLock when cos phi cos theta <= guard.
double esmc_thrust(const Vec3& eta, const Vec3& nu_e, const Vec3& xi_dd_d,
                   const Vec3& s_xi, const ESMCGains& g, const VehicleParams& p,
                   double* u_x, double* u_y);

/// s_eta = omega_e + Lambda_eta eta_e, with omega_e = omega - eta_dot_d
/// (the method's small-angle surrogate for the desired body rate).
Vec3 esmc_sliding_surface(const Vec3& eta_e, const Vec3& omega,
                          const Vec3& eta_dot_d, const ESMCGains& g);

/// tau_i = J_hat_ii (eta_dd_di - Lambda_ii eta_ei - K_ii tanh(s_i/phi_i)
///         - a_i prod_{j != i} eta_dot_j), with the inertia ratios
/// a1 = (J22 - J33)/J11 etc.
Vec3 esmc_attitude_control(const Vec3& eta, const Vec3& eta_dot,
                           const Vec3& omega, const Vec3& eta_d,
                           const Vec3& eta_dot_d, const Vec3& eta_ddot_d,
                           const ESMCGains& g, const VehicleParams& p,
                           Vec3* s_eta_out = nullptr);

/// The small-angle second-order rotational model the ESMC was derived
/// from: eta_ddot_i = a_i prod_{j != i} eta_dot_j + tau_i / J_ii.
Vec3 esmc_simplified_dynamics(const Vec3& eta_dot, const Vec3& tau,
                              const VehicleParams& p);

/// kappa = m_hat (xi_dd_d + g e3 - K_xi xi_e - K_nu nu_e); f = kappa . R e3.
Vec3 gtc_position_control(const Vec3& xi_e, const Vec3& nu_e,
                          const Vec3& xi_dd_d, const GTCGains& g,
                          const VehicleParams& p);

/// tau = omega x J_hat omega - J_hat (hat(omega) R^T R_d omega_d
///       - R^T R_d alpha_d) - K_omega omega_e - K_R e_R,
/// with e_R = 0.5 vee(R_d^T R - R^T R_d) and omega_e = omega - R^T R_d omega_d.
/// omega_d, alpha_d are expressed in the desired frame.
Vec3 gtc_attitude_control(const Mat3& R, const Vec3& omega, const Mat3& R_d,
                          const Vec3& omega_d, const Vec3& alpha_d,
                          const GTCGains& g, const VehicleParams& p);

/// tau = -K_D omega_e - K_P sgn+(q_we) qvec_e (gains x J_hat).
Vec3 qpd_attitude_control(const ErrorState& e, const QPDGains& g,
                          const VehicleParams& p);

}  // namespace quadsmc
