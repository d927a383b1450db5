#include "quadsmc/vehicle.hpp"

#include <cmath>
#include <stdexcept>

namespace quadsmc {

VehicleParams VehicleParams::crazyflie() { return VehicleParams{}; }

void VehicleParams::validate() const {
  auto pos = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!pos(m) || !pos(m_hat) || !pos(c_t) || !pos(c_q) || !pos(l) ||
      !pos(beta) || !pos(omega_rotor_max) || J_diag.minCoeff() <= 0.0 ||
      J_hat_diag.minCoeff() <= 0.0) {
    throw std::invalid_argument("VehicleParams: all parameters must be positive");
  }
}

VehicleState::Flat VehicleState::to_flat() const {
  Flat x;
  x.segment<3>(0) = xi;
  x.segment<3>(3) = nu;
  x.segment<4>(6) = q.coeffs();
  x.segment<3>(10) = omega;
  return x;
}

VehicleState VehicleState::from_flat(const Flat& x) {
  VehicleState s;
  s.xi = x.segment<3>(0);
  s.nu = x.segment<3>(3);
  s.q = UnitQuaternion(x(6), Vec3(x(7), x(8), x(9)));
  s.omega = x.segment<3>(10);
  return s;
}

Mat4 build_allocation_matrix(const VehicleParams& p) {
  const double ls = p.l * std::sin(p.beta);
  const double lc = p.l * std::cos(p.beta);
  const double cr = p.c_q / p.c_t;
  Mat4 G;
  G << 1, 1, 1, 1,
       ls, -ls, -ls, ls,
       -lc, lc, -lc, lc,
       -cr, -cr, cr, cr;
  Eigen::JacobiSVD<Mat4> svd(G);
  const double cond = svd.singularValues()(0) / svd.singularValues()(3);
  if (!std::isfinite(cond) || cond > 1e12) {
    throw std::runtime_error("build_allocation_matrix: mixer is singular");
  }
  return G;
}

MotorCommand allocate(const WrenchCommand& w, const VehicleParams& p) {
  const Mat4 G = build_allocation_matrix(p);
  Vec4 rhs;
  rhs << w.f, w.tau.x(), w.tau.y(), w.tau.z();
  Vec4 u = G.partialPivLu().solve(rhs);
  MotorCommand mc;
  const double umax = p.u_max();
  for (int i = 0; i < 4; ++i) {
    double ui = u(i);
    if (ui < 0.0) { ui = 0.0; mc.saturated = true; }
    if (ui > umax) { ui = umax; mc.saturated = true; }
    mc.u(i) = ui;
    mc.npwm(i) = std::sqrt(ui / p.c_t) / p.omega_rotor_max;
  }
  return mc;
}

WrenchCommand wrench_from_motors(const MotorCommand& mc, const VehicleParams& p) {
  const Vec4 ft = build_allocation_matrix(p) * mc.u;
  WrenchCommand w;
  w.f = ft(0);
  w.tau = ft.tail<3>();
  return w;
}

VehicleState::Flat state_derivative(const VehicleState& s, const WrenchCommand& w,
                                    const Disturbance& d, const VehicleParams& p) {
  VehicleState::Flat dx;
  dx.segment<3>(0) = s.nu;
  dx.segment<3>(3) =
      -kGravity * Vec3::UnitZ() + s.q.rotate(Vec3(0, 0, w.f)) / p.m + d.d_a;
  // qdot = 1/2 q (x) [0, omega]
  const double qw = s.q.w();
  const Vec3 qv = s.q.vec();
  dx(6) = -0.5 * qv.dot(s.omega);
  dx.segment<3>(7) = 0.5 * (qw * s.omega + qv.cross(s.omega));
  const Vec3 Jw = p.J_diag.cwiseProduct(s.omega);
  dx.segment<3>(10) =
      (-s.omega.cross(Jw) + w.tau).cwiseQuotient(p.J_diag) + d.d_alpha;
  return dx;
}

Vec3 wind_disturbance(const Vec3& wind, const Vec3& nu, const Vec3& c_d) {
  return c_d.cwiseProduct(wind - nu);
}

}  // namespace quadsmc
