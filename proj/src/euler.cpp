#include "quadsmc/euler.hpp"

#include <cmath>

namespace quadsmc {
namespace {

void check_pitch(double theta) {
  if (std::abs(theta) >= M_PI / 2 - kGimbalGuard) {
    throw GimbalLock("pitch within gimbal-lock guard band");
  }
}

}  // namespace

double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a < 0.0) a += 2.0 * M_PI;
  a -= M_PI;
  // fmod puts exact +pi at -pi; keep it on the (-pi, pi] side.
  return (a == -M_PI) ? M_PI : a;
}

Mat3 euler_rate_matrix(const Vec3& eta) {
  const double phi = eta(0), theta = eta(1);
  check_pitch(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  const double tt = std::tan(theta), ct = std::cos(theta);
  Mat3 H;
  H << 1.0, sp * tt, cp * tt,
       0.0, cp, -sp,
       0.0, sp / ct, cp / ct;
  return H;
}

Mat3 body_rate_matrix(const Vec3& eta) {
  const double phi = eta(0), theta = eta(1);
  check_pitch(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  const double st = std::sin(theta), ct = std::cos(theta);
  Mat3 W;
  W << 1.0, 0.0, -st,
       0.0, cp, sp * ct,
       0.0, -sp, cp * ct;
  return W;
}

Mat3 body_rate_matrix_dot(const Vec3& eta, const Vec3& eta_dot) {
  const double phi = eta(0), theta = eta(1);
  const double dphi = eta_dot(0), dtheta = eta_dot(1);
  const double sp = std::sin(phi), cp = std::cos(phi);
  const double st = std::sin(theta), ct = std::cos(theta);
  Mat3 Wd;
  Wd << 0.0, 0.0, -ct * dtheta,
        0.0, -sp * dphi, cp * dphi * ct - sp * st * dtheta,
        0.0, -cp * dphi, -sp * dphi * ct - cp * st * dtheta;
  return Wd;
}

Vec3 euler_kinematics(const Vec3& eta, const Vec3& omega) {
  return euler_rate_matrix(eta) * omega;
}

Vec3 euler_from_quaternion(const UnitQuaternion& q) {
  const Mat3 R = q.to_rotation_matrix();
  const double st = -R(2, 0);
  const double theta = std::asin(std::min(1.0, std::max(-1.0, st)));
  check_pitch(theta);
  const double phi = std::atan2(R(2, 1), R(2, 2));
  const double psi = std::atan2(R(1, 0), R(0, 0));
  return Vec3(phi, theta, psi);
}

UnitQuaternion quaternion_from_euler(const Vec3& eta) {
  const UnitQuaternion qx =
      UnitQuaternion::from_axis_angle(Vec3::UnitX(), eta(0));
  const UnitQuaternion qy =
      UnitQuaternion::from_axis_angle(Vec3::UnitY(), eta(1));
  const UnitQuaternion qz =
      UnitQuaternion::from_axis_angle(Vec3::UnitZ(), eta(2));
  return qz * qy * qx;
}

}  // namespace quadsmc
