#include "quadsmc/math3d.hpp"

#include <cmath>

namespace quadsmc {

Mat3 hat(const Vec3& v) {
  Mat3 M;
  M << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return M;
}

Vec3 vee(const Mat3& M, double tol) {
  if ((M + M.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("vee: matrix is not skew-symmetric");
  }
  return Vec3(M(2, 1), M(0, 2), M(1, 0));
}

UnitQuaternion::UnitQuaternion(double w, const Vec3& v) : w_(w), v_(v) {
  const double n = std::sqrt(w_ * w_ + v_.squaredNorm());
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("UnitQuaternion: non-normalizable input");
  }
  w_ /= n;
  v_ /= n;
}

UnitQuaternion UnitQuaternion::from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n == 0.0) return UnitQuaternion();
  const double half = 0.5 * angle;
  return UnitQuaternion(std::cos(half), std::sin(half) * (axis / n));
}

UnitQuaternion UnitQuaternion::conjugate() const {
  UnitQuaternion q;
  q.w_ = w_;
  q.v_ = -v_;
  return q;
}

UnitQuaternion UnitQuaternion::operator-() const {
  UnitQuaternion q;
  q.w_ = -w_;
  q.v_ = -v_;
  return q;
}

UnitQuaternion UnitQuaternion::operator*(const UnitQuaternion& p) const {
  const double w = w_ * p.w_ - v_.dot(p.v_);
  const Vec3 v = w_ * p.v_ + p.w_ * v_ + v_.cross(p.v_);
  return UnitQuaternion(w, v);
}

Vec3 UnitQuaternion::rotate(const Vec3& u) const {
  return (w_ * w_ - v_.squaredNorm()) * u + 2.0 * v_.dot(u) * v_ +
         2.0 * w_ * v_.cross(u);
}

Mat3 UnitQuaternion::to_rotation_matrix() const {
  const double qw = w_, qx = v_.x(), qy = v_.y(), qz = v_.z();
  Mat3 R;
  R << 1 - 2 * (qy * qy + qz * qz), 2 * (qx * qy - qw * qz), 2 * (qx * qz + qw * qy),
       2 * (qx * qy + qw * qz), 1 - 2 * (qx * qx + qz * qz), 2 * (qy * qz - qw * qx),
       2 * (qx * qz - qw * qy), 2 * (qy * qz + qw * qx), 1 - 2 * (qx * qx + qy * qy);
  return R;
}

bool is_rotation_matrix(const Mat3& R, double tol) {
  const Mat3 E = R.transpose() * R - Mat3::Identity();
  return E.cwiseAbs().maxCoeff() <= tol && std::abs(R.determinant() - 1.0) <= tol;
}

UnitQuaternion UnitQuaternion::from_rotation_matrix(const Mat3& R, double tol) {
  if (!is_rotation_matrix(R, tol)) {
    throw std::invalid_argument("from_rotation_matrix: input not in SO(3)");
  }
  // Shepperd: branch on the largest of trace and diagonal entries.
  const double tr = R.trace();
  double w, x, y, z;
  if (tr >= R(0, 0) && tr >= R(1, 1) && tr >= R(2, 2)) {
    const double s = std::sqrt(tr + 1.0) * 2.0;
    w = 0.25 * s;
    x = (R(2, 1) - R(1, 2)) / s;
    y = (R(0, 2) - R(2, 0)) / s;
    z = (R(1, 0) - R(0, 1)) / s;
  } else if (R(0, 0) >= R(1, 1) && R(0, 0) >= R(2, 2)) {
    const double s = std::sqrt(1.0 + R(0, 0) - R(1, 1) - R(2, 2)) * 2.0;
    w = (R(2, 1) - R(1, 2)) / s;
    x = 0.25 * s;
    y = (R(0, 1) + R(1, 0)) / s;
    z = (R(0, 2) + R(2, 0)) / s;
  } else if (R(1, 1) >= R(2, 2)) {
    const double s = std::sqrt(1.0 + R(1, 1) - R(0, 0) - R(2, 2)) * 2.0;
    w = (R(0, 2) - R(2, 0)) / s;
    x = (R(0, 1) + R(1, 0)) / s;
    y = 0.25 * s;
    z = (R(1, 2) + R(2, 1)) / s;
  } else {
    const double s = std::sqrt(1.0 + R(2, 2) - R(0, 0) - R(1, 1)) * 2.0;
    w = (R(1, 0) - R(0, 1)) / s;
    x = (R(0, 2) + R(2, 0)) / s;
    y = (R(1, 2) + R(2, 1)) / s;
    z = 0.25 * s;
  }
  UnitQuaternion q(w, Vec3(x, y, z));
  if (q.w() < 0.0) q = -q;
  return q;
}

double UnitQuaternion::rotation_angle() const {
  const double c = std::clamp(w_, -1.0, 1.0);
  return 2.0 * std::acos(c);
}

}  // namespace quadsmc
