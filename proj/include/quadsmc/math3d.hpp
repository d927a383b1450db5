#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace quadsmc {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

inline constexpr double kGravity = 9.80665;  // m/s^2

/// Sign function with sgn_plus(0) = +1. Selects the short rotation when
/// applied to the error quaternion scalar part.
inline double sgn_plus(double x) { return x >= 0.0 ? 1.0 : -1.0; }

/// Skew-symmetric (cross-product) matrix: hat(v) * w == v x w.
Mat3 hat(const Vec3& v);

/// Inverse of hat(). Throws std::invalid_argument if M is not
/// skew-symmetric within tol.
Vec3 vee(const Mat3& M, double tol = 1e-9);

/// Unit quaternion, scalar-first, Hamilton convention.
/// Renormalized on construction and after every multiply.
class UnitQuaternion {
 public:
  UnitQuaternion() : w_(1.0), v_(Vec3::Zero()) {}
  UnitQuaternion(double w, const Vec3& v);
  UnitQuaternion(double w, double x, double y, double z)
      : UnitQuaternion(w, Vec3(x, y, z)) {}

  static UnitQuaternion from_axis_angle(const Vec3& axis, double angle);
  /// Shepperd-style largest-diagonal branch; result has w >= 0.
  /// Throws std::invalid_argument when R violates orthonormality/det
  /// beyond tol.
  static UnitQuaternion from_rotation_matrix(const Mat3& R, double tol = 1e-6);

  double w() const { return w_; }
  const Vec3& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  Vec4 coeffs() const { return Vec4(w_, v_.x(), v_.y(), v_.z()); }

  UnitQuaternion conjugate() const;
  UnitQuaternion operator-() const;
  /// Hamilton product q (*) p.
  UnitQuaternion operator*(const UnitQuaternion& p) const;
  /// The operator L_q: rotation of v from body to inertial frame,
  /// evaluated with the explicit quadratic form.
  Vec3 rotate(const Vec3& v) const;
  Mat3 to_rotation_matrix() const;

  double dot(const UnitQuaternion& p) const {
    return w_ * p.w_ + v_.dot(p.v_);
  }
  /// Rotation angle in [0, 2*pi) of this exact representation
  /// (antipodal representations report different angles).
  double rotation_angle() const;

 private:
  double w_;
  Vec3 v_;
};

/// Rotation matrix validity check used by from_rotation_matrix.
bool is_rotation_matrix(const Mat3& R, double tol = 1e-9);

}  // namespace quadsmc
