#include "quadsmc/refgen.hpp"

#include <cmath>

namespace quadsmc {
namespace {

// d/dt and d2/dt2 of v/||v|| given v, vdot, vddot.
void normalize_chain(const Vec3& v, const Vec3& vd, const Vec3& vdd, Vec3* b,
                     Vec3* bd, Vec3* bdd) {
  const double n = v.norm();
  const double n3 = n * n * n;
  const double n5 = n3 * n * n;
  const double vvd = v.dot(vd);
  *b = v / n;
  *bd = vd / n - vvd / n3 * v;
  *bdd = vdd / n - 2.0 * vvd / n3 * vd -
         (vd.squaredNorm() + v.dot(vdd)) / n3 * v + 3.0 * vvd * vvd / n5 * v;
}

}  // namespace

RotationReference build_rotation_reference(const FlatInput& in,
                                           double kappa_floor, double chi_min) {
  if (in.kappa.norm() < kappa_floor) {
    throw std::invalid_argument(
        "build_rotation_reference: ||kappa|| below thrust floor");
  }
  Vec3 b3, b3d, b3dd;
  normalize_chain(in.kappa, in.kappa_dot, in.kappa_ddot, &b3, &b3d, &b3dd);

  const double c = std::cos(in.psi_d), s = std::sin(in.psi_d);
  const Vec3 h(c, s, 0.0);
  const Vec3 hd = in.psi_dot_d * Vec3(-s, c, 0.0);
  const Vec3 hdd = in.psi_ddot_d * Vec3(-s, c, 0.0) +
                   in.psi_dot_d * in.psi_dot_d * Vec3(-c, -s, 0.0);

  const Vec3 chi = b3.cross(h);
  if (chi.norm() < chi_min) {
    throw SingularHeading("thrust axis parallel to heading vector");
  }
  const Vec3 chid = b3d.cross(h) + b3.cross(hd);
  const Vec3 chidd = b3dd.cross(h) + b3.cross(hdd) + 2.0 * b3d.cross(hd);

  Vec3 b2, b2d, b2dd;
  normalize_chain(chi, chid, chidd, &b2, &b2d, &b2dd);

  const Vec3 b1 = b2.cross(b3);
  const Vec3 b1d = b2d.cross(b3) + b2.cross(b3d);
  const Vec3 b1dd = b2dd.cross(b3) + b2.cross(b3dd) + 2.0 * b2d.cross(b3d);

  RotationReference out;
  out.R.col(0) = b1; out.R.col(1) = b2; out.R.col(2) = b3;
  out.R_dot.col(0) = b1d; out.R_dot.col(1) = b2d; out.R_dot.col(2) = b3d;
  out.R_ddot.col(0) = b1dd; out.R_ddot.col(1) = b2dd; out.R_ddot.col(2) = b3dd;
  return out;
}

void poisson_rates(const RotationReference& ref, Vec3* omega_Rd,
                   Vec3* alpha_Rd) {
  // Poisson: Rd_dot = Rd * wx, so Rd^T Rd_dot is skew up to the accuracy
  // of the derivative chain.
  const Mat3 W = ref.R.transpose() * ref.R_dot;
  *omega_Rd = vee(W, 1e-6);
  const Mat3 A =
      ref.R.transpose() * ref.R_ddot - hat(*omega_Rd) * hat(*omega_Rd);
  *alpha_Rd = vee(A, 1e-6);
}

AttitudeReference remap_to_body_tangent(const Mat3& R,
                                        const RotationReference& ref,
                                        const Vec3& omega) {
  Vec3 omega_Rd, alpha_Rd;
  poisson_rates(ref, &omega_Rd, &alpha_Rd);

  const Mat3 Q = R.transpose() * ref.R;
  AttitudeReference out;
  out.q_d = UnitQuaternion::from_rotation_matrix(ref.R, 1e-6);
  out.omega_d = Q * omega_Rd;
  out.alpha_d = -omega.cross(Q * omega_Rd) + Q * alpha_Rd;
  return out;
}

}  // namespace quadsmc
