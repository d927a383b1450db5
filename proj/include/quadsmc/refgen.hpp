#pragma once

#include "quadsmc/control_qsmc.hpp"
#include "quadsmc/math3d.hpp"

namespace quadsmc {

/// Thrust-vector demand and yaw, with enough derivatives to build a
/// twice-differentiable attitude reference.
struct FlatInput {
  Vec3 kappa = Vec3::Zero();
  Vec3 kappa_dot = Vec3::Zero();
  Vec3 kappa_ddot = Vec3::Zero();
  double psi_d = 0.0;
  double psi_dot_d = 0.0;
  double psi_ddot_d = 0.0;
};

struct AttitudeReference {
  UnitQuaternion q_d;
  Vec3 omega_d = Vec3::Zero();  // expressed in the tangent space at R
  Vec3 alpha_d = Vec3::Zero();
};

struct RotationReference {
  Mat3 R = Mat3::Identity();
  Mat3 R_dot = Mat3::Zero();
  Mat3 R_ddot = Mat3::Zero();
};

/// Raised when the thrust axis is (nearly) parallel to the heading
/// vector and the desired frame is undefined.
struct SingularHeading : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kChiMin = 1e-3;

/// Desired rotation matrix and its first two time derivatives from the
/// thrust-vector demand and yaw chain.
/// Throws SingularHeading when ||b3d x h_d|| < chi_min, and
/// std::invalid_argument when ||kappa|| is below the thrust floor.
RotationReference build_rotation_reference(const FlatInput& in,
                                           double kappa_floor,
                                           double chi_min = kChiMin);

/// Poisson extraction in the desired frame:
/// omega_Rd = vee(R_d^T R_d_dot), alpha_Rd = vee(R_d^T R_d_ddot - hat(omega)^2).
void poisson_rates(const RotationReference& ref, Vec3* omega_Rd, Vec3* alpha_Rd);

/// Poisson extraction of (omega, alpha) in the desired frame, remapped
/// into the tangent space at the current attitude R.
AttitudeReference remap_to_body_tangent(const Mat3& R, const RotationReference& ref,
                                        const Vec3& omega);

}  // namespace quadsmc
