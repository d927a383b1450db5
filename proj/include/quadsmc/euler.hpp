#pragma once

#include "quadsmc/math3d.hpp"

namespace quadsmc {

/// Raised when pitch approaches +/- pi/2 and the Euler kinematics
/// degenerate.
struct GimbalLock : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kGimbalGuard = 1e-3;  // rad margin from pi/2

/// eta = [roll, pitch, yaw] in the yaw-pitch-roll sequence.
struct EulerState {
  Vec3 eta = Vec3::Zero();
  Vec3 eta_dot = Vec3::Zero();
};

/// Euler-rate matrix H(eta): eta_dot = H(eta) * omega.
/// Throws GimbalLock when |pitch| >= pi/2 - guard.
Mat3 euler_rate_matrix(const Vec3& eta);

/// Body-rate matrix W(eta) = H(eta)^-1: omega = W(eta) * eta_dot.
Mat3 body_rate_matrix(const Vec3& eta);

/// Time derivative of W(eta) given eta_dot.
Mat3 body_rate_matrix_dot(const Vec3& eta, const Vec3& eta_dot);

Vec3 euler_kinematics(const Vec3& eta, const Vec3& omega);

/// ZYX extraction; angles wrapped to (-pi, pi].
/// Throws GimbalLock inside the guard band.
Vec3 euler_from_quaternion(const UnitQuaternion& q);

/// q = qz(psi) (x) qy(theta) (x) qx(phi).
UnitQuaternion quaternion_from_euler(const Vec3& eta);

double wrap_angle(double a);  // to (-pi, pi]

}  // namespace quadsmc
