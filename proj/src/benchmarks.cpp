#include "quadsmc/benchmarks.hpp"

#include <cmath>

namespace quadsmc {
namespace {

double asin_checked(double x, const char* what) {
  if (std::abs(x) > 1.0) {
    throw ArcsinDomain(std::string("esmc setpoint: ") + what +
                       " argument outside [-1, 1]");
  }
  return std::asin(x);
}

}  // namespace

Vec3 esmc_attitude_setpoint(double u_x, double u_y, double psi_d) {
  const double sp = std::sin(psi_d), cp = std::cos(psi_d);
  const double phi_d = asin_checked(u_x * sp - u_y * cp, "roll");
  const double theta_d =
      asin_checked((u_x * cp + u_y * sp) / std::cos(phi_d), "pitch");
  return Vec3(phi_d, theta_d, psi_d);
}

double esmc_thrust(const Vec3& eta, const Vec3& nu_e, const Vec3& xi_dd_d,
                   const Vec3& s_xi, const ESMCGains& g, const VehicleParams& p,
                   double* u_x, double* u_y) {
  const double cc = std::cos(eta(0)) * std::cos(eta(1));
  if (cc <= kGimbalGuard) {
    throw GimbalLock("esmc thrust: cos(roll) cos(pitch) vanished");
  }
  const double f =
      p.m_hat / cc *
      (xi_dd_d(2) + kGravity - g.Lambda_xi(2) * nu_e(2) -
       g.K_xi(2) * std::tanh(s_xi(2) / g.phi_xi(2)));
  for (int i = 0; i < 2; ++i) {
    const double u = p.m_hat / f *
                     (xi_dd_d(i) - g.Lambda_xi(i) * nu_e(i) -
                      g.K_xi(i) * std::tanh(s_xi(i) / g.phi_xi(i)));
    (i == 0 ? *u_x : *u_y) = u;
  }
  return f;
}

Vec3 esmc_sliding_surface(const Vec3& eta_e, const Vec3& omega,
                          const Vec3& eta_dot_d, const ESMCGains& g) {
  return (omega - eta_dot_d) + g.Lambda_eta.cwiseProduct(eta_e);
}

Vec3 esmc_attitude_control(const Vec3& eta, const Vec3& eta_dot,
                           const Vec3& omega, const Vec3& eta_d,
                           const Vec3& eta_dot_d, const Vec3& eta_ddot_d,
                           const ESMCGains& g, const VehicleParams& p,
                           Vec3* s_eta_out) {
  Vec3 eta_e;
  for (int i = 0; i < 3; ++i) eta_e(i) = wrap_angle(eta(i) - eta_d(i));
  const Vec3 s = esmc_sliding_surface(eta_e, omega, eta_dot_d, g);
  if (s_eta_out) *s_eta_out = s;
  const Vec3& J = p.J_hat_diag;
  const Vec3 a((J(1) - J(2)) / J(0), (J(2) - J(0)) / J(1),
               (J(0) - J(1)) / J(2));
  Vec3 tau;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    tau(i) = J(i) * (eta_ddot_d(i) - g.Lambda_eta(i) * eta_e(i) -
                     g.K_eta(i) * std::tanh(s(i) / g.phi_eta(i)) -
                     a(i) * eta_dot(j) * eta_dot(k));
  }
  return tau;
}

Vec3 esmc_simplified_dynamics(const Vec3& eta_dot, const Vec3& tau,
                              const VehicleParams& p) {
  const Vec3& J = p.J_diag;
  const Vec3 a((J(1) - J(2)) / J(0), (J(2) - J(0)) / J(1),
               (J(0) - J(1)) / J(2));
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    out(i) = a(i) * eta_dot(j) * eta_dot(k) + tau(i) / J(i);
  }
  return out;
}

Vec3 gtc_position_control(const Vec3& xi_e, const Vec3& nu_e,
                          const Vec3& xi_dd_d, const GTCGains& g,
                          const VehicleParams& p) {
  return p.m_hat * (xi_dd_d + kGravity * Vec3::UnitZ() -
                    g.K_xi.cwiseProduct(xi_e) - g.K_nu.cwiseProduct(nu_e));
}

Vec3 gtc_attitude_control(const Mat3& R, const Vec3& omega, const Mat3& R_d,
                          const Vec3& omega_d, const Vec3& alpha_d,
                          const GTCGains& g, const VehicleParams& p) {
  const Mat3 Q = R.transpose() * R_d;
  const Mat3 E = 0.5 * (R_d.transpose() * R - Q);
  const Vec3 e_R(E(2, 1), E(0, 2), E(1, 0));
  const Vec3 omega_e = omega - Q * omega_d;
  const Vec3& Jh = p.J_hat_diag;
  return omega.cross(Jh.cwiseProduct(omega)) -
         Jh.cwiseProduct(hat(omega) * (Q * omega_d) - Q * alpha_d) -
         Jh.cwiseProduct(g.K_omega.cwiseProduct(omega_e)) -
         Jh.cwiseProduct(g.K_R.cwiseProduct(e_R));
}

Vec3 qpd_attitude_control(const ErrorState& e, const QPDGains& g,
                          const VehicleParams& p) {
  const Vec3& Jh = p.J_hat_diag;
  const Vec3 qv = sgn_plus(e.q_e.w()) * e.q_e.vec();
  return -Jh.cwiseProduct(g.K_D.cwiseProduct(e.omega_e)) -
         Jh.cwiseProduct(g.K_P.cwiseProduct(qv));
}

}  // namespace quadsmc
