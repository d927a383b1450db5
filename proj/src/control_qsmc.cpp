#include "quadsmc/control_qsmc.hpp"

#include <cmath>
#include <stdexcept>

namespace quadsmc {
namespace {

void require_positive(const Vec3& v, const char* what) {
  if (!(v.minCoeff() > 0.0) || !v.allFinite()) {
    throw std::invalid_argument(std::string(what) + " must be positive");
  }
}

Vec3 tanh3(const Vec3& x) {
  return Vec3(std::tanh(x.x()), std::tanh(x.y()), std::tanh(x.z()));
}

Vec3 sech2(const Vec3& x) {
  Vec3 t = tanh3(x);
  return Vec3::Ones() - t.cwiseProduct(t);
}

}  // namespace

void AttitudeGains::validate() const {
  require_positive(Lambda_q, "Lambda_q");
  require_positive(K_q, "K_q");
  require_positive(phi_q, "phi_q");
  require_positive(pi_q, "pi_q");
}

void PositionGains::validate() const {
  require_positive(Lambda_xi, "Lambda_xi");
  require_positive(K_xi, "K_xi");
  require_positive(phi_xi, "phi_xi");
  require_positive(pi_xi, "pi_xi");
  if (!(kappa_floor > 0.0)) {
    throw std::invalid_argument("kappa_floor must be positive");
  }
}

void AdaptParams::validate() const {
  require_positive(Gamma, "Gamma");
  require_positive(epsilon, "epsilon");
  require_positive(mu, "mu");
  require_positive(K_th, "K_th");
}

UnitQuaternion attitude_error(const UnitQuaternion& q_d, const UnitQuaternion& q) {
  return q_d.conjugate() * q;
}

Vec3 qdot_vec_e(const UnitQuaternion& q_e, const Vec3& omega_e) {
  return 0.5 * (q_e.w() * omega_e + q_e.vec().cross(omega_e));
}

Vec3 sliding_surface_attitude(const ErrorState& e, const AttitudeGains& g) {
  return e.omega_e +
         g.Lambda_q.cwiseProduct(sgn_plus(e.q_e.w()) * e.q_e.vec());
}

Vec3 sliding_surface_position(const ErrorState& e, const PositionGains& g) {
  return e.nu_e + g.Lambda_xi.cwiseProduct(e.xi_e);
}

Vec3 attitude_control(const ErrorState& e, const Vec3& qdot_vec_e_in,
                      const Vec3& omega, const Vec3& omega_dot_d,
                      const AttitudeGains& g, const VehicleParams& p,
                      const Vec3* K_q_diag) {
  const Vec3& K = K_q_diag ? *K_q_diag : g.K_q;
  const Vec3& Jh = p.J_hat_diag;
  const Vec3 s_q = sliding_surface_attitude(e, g);
  const double sgn = sgn_plus(e.q_e.w());
  return Jh.cwiseProduct(omega_dot_d) + omega.cross(Jh.cwiseProduct(omega)) -
         Jh.cwiseProduct(g.Lambda_q.cwiseProduct(sgn * qdot_vec_e_in)) -
         Jh.cwiseProduct(K.cwiseProduct(tanh3(s_q.cwiseQuotient(g.phi_q))));
}

Vec3 position_control(const ErrorState& e, const Vec3& xi_dd_d,
                      const PositionGains& g, const VehicleParams& p,
                      const Vec3* K_xi_diag) {
  const Vec3& K = K_xi_diag ? *K_xi_diag : g.K_xi;
  const Vec3 s_xi = sliding_surface_position(e, g);
  Vec3 kappa =
      p.m_hat * (kGravity * Vec3::UnitZ() + xi_dd_d -
                 g.Lambda_xi.cwiseProduct(e.nu_e) -
                 K.cwiseProduct(tanh3(s_xi.cwiseQuotient(g.phi_xi))));
  const double n = kappa.norm();
  if (n < g.kappa_floor) {
    kappa = (n == 0.0) ? Vec3(0, 0, g.kappa_floor) : Vec3(kappa * (g.kappa_floor / n));
  }
  return kappa;
}

double thrust_from_kappa(const Vec3& kappa, const UnitQuaternion& q) {
  const double qw = q.w(), qx = q.x(), qy = q.y(), qz = q.z();
  const Vec3 body_z(2.0 * (qx * qz + qw * qy), 2.0 * (qy * qz - qw * qx),
                    qw * qw - qx * qx - qy * qy + qz * qz);
  return std::max(0.0, kappa.dot(body_z));
}

AdaptiveState adapt_step(const AdaptiveState& a, const Vec3& s_q, const Vec3& s_xi,
                         const Vec3& sdot_xi, const AdaptParams& params_q,
                         const AdaptParams& params_xi, const AttitudeGains& gq,
                         const PositionGains& gxi, const VehicleParams& p,
                         double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("adapt_step: dt must be > 0");
  AdaptiveState out = a;
  // Attitude channels, scaled by nominal inertia.
  for (int i = 0; i < 3; ++i) {
    const double K = a.K_q_diag(i);
    if (K > params_q.K_th(i)) {
      const double rate = params_q.Gamma(i) * p.J_hat_diag(i) *
                          std::abs(s_q(i)) *
                          std::tanh(std::abs(s_q(i)) / gq.phi_q(i) -
                                    params_q.epsilon(i));
      // The continuous law switches at K_th; do not step past the floor.
      out.K_q_diag(i) = std::max(params_q.K_th(i), K + rate * dt);
    } else {
      out.K_q_diag(i) = K + params_q.mu(i) * dt;
    }
  }
  // Position channels. The true mass ratio is unknown online; the
  // controller uses the nominal belief m = m_hat, i.e. rho = 1.
  const double rho_hat = 1.0;
  for (int i = 0; i < 3; ++i) {
    const double K = a.K_xi_diag(i);
    const double abs_s = std::abs(s_xi(i));
    const double arg = abs_s / gxi.phi_xi(i) - params_xi.epsilon(i);
    if (K > params_xi.K_th(i)) {
      const double rate = params_xi.Gamma(i) * rho_hat * abs_s * std::tanh(arg);
      out.K_xi_diag(i) = std::max(params_xi.K_th(i), K + rate * dt);
      out.dK_xi(i) = rate;
      const double sgn_s = s_xi(i) >= 0.0 ? 1.0 : -1.0;
      const double sech_sq = 1.0 - std::tanh(arg) * std::tanh(arg);
      out.ddK_xi(i) =
          params_xi.Gamma(i) * rho_hat * sgn_s * sdot_xi(i) *
          (std::tanh(arg) + abs_s / gxi.phi_xi(i) * sech_sq);
    } else {
      out.K_xi_diag(i) = K + params_xi.mu(i) * dt;
      out.dK_xi(i) = params_xi.mu(i);
      out.ddK_xi(i) = 0.0;
    }
  }
  return out;
}

Vec3 gain_condition_attitude(const UncertaintyBounds& b, const Vec3& pi,
                             const Vec3& J_hat_diag) {
  return (b.delta_q_bar + b.d_alpha_bar + pi).cwiseQuotient(J_hat_diag);
}

Vec3 gain_condition_position(const UncertaintyBounds& b, const Vec3& pi) {
  return (b.delta_xi_bar + b.d_a_bar + pi) / b.rho_xi;
}

Vec3 boundary_layer_threshold(const Vec3& delta_bar, const Vec3& d_bar,
                              const Vec3& pi, const Vec3& phi) {
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    const double delta = delta_bar(i) + d_bar(i);
    const double r = delta / (delta + pi(i));
    out(i) = phi(i) * std::atanh(r);
  }
  return out;
}

void kappa_derivatives(const Vec3& xi_d3, const Vec3& xi_d4, const Vec3& a_e,
                       const Vec3& j_e, const Vec3& s_xi, const Vec3& sdot_xi,
                       const Vec3& sddot_xi, const PositionGains& g,
                       const VehicleParams& p, const Vec3& K_xi_diag,
                       const Vec3& dK_xi, const Vec3& ddK_xi, Vec3* kappa_dot,
                       Vec3* kappa_ddot) {
  const Vec3 arg = s_xi.cwiseQuotient(g.phi_xi);
  const Vec3 th = tanh3(arg);
  const Vec3 sh2 = sech2(arg);
  const Vec3 sdot_phi = sdot_xi.cwiseQuotient(g.phi_xi);
  const Vec3 sddot_phi = sddot_xi.cwiseQuotient(g.phi_xi);
  *kappa_dot = p.m_hat * (xi_d3 - g.Lambda_xi.cwiseProduct(a_e) -
                          dK_xi.cwiseProduct(th) -
                          K_xi_diag.cwiseProduct(sh2.cwiseProduct(sdot_phi)));
  *kappa_ddot =
      p.m_hat *
      (xi_d4 - g.Lambda_xi.cwiseProduct(j_e) - ddK_xi.cwiseProduct(th) -
       sh2.cwiseProduct(2.0 * dK_xi.cwiseProduct(sdot_phi) +
                        K_xi_diag.cwiseProduct(sddot_phi) -
                        2.0 * K_xi_diag.cwiseProduct(
                                  th.cwiseProduct(sdot_phi.cwiseProduct(sdot_phi)))));
}

}  // namespace quadsmc
