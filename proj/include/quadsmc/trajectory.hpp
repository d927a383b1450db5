#pragma once

#include <array>
#include <string>
#include <vector>

#include "quadsmc/euler.hpp"
#include "quadsmc/math3d.hpp"
#include "quadsmc/refgen.hpp"
#include "quadsmc/rng.hpp"
#include "quadsmc/vehicle.hpp"

namespace quadsmc {

/// Position reference with derivatives through 4th order plus the yaw
/// chain. Everything the position loop and refgen feedforward need.
struct ReferenceSample {
  Vec3 xi_d = Vec3::Zero();
  Vec3 xi_d_dot = Vec3::Zero();
  Vec3 xi_d_ddot = Vec3::Zero();
  Vec3 xi_d_d3 = Vec3::Zero();
  Vec3 xi_d_d4 = Vec3::Zero();
  double psi_d = 0.0;
  double psi_dot_d = 0.0;
  double psi_ddot_d = 0.0;
};

/// Attitude-only reference as Euler angles with two derivatives.
struct AttitudeOnlyReference {
  Vec3 eta_d = Vec3::Zero();
  Vec3 eta_dot_d = Vec3::Zero();
  Vec3 eta_ddot_d = Vec3::Zero();
};

inline ReferenceSample hover_setpoint(const Vec3& xi, double psi = 0.0) {
  ReferenceSample s;
  s.xi_d = xi;
  s.psi_d = psi;
  return s;
}

/// eta_d = A [sin(0.2 pi t'), cos(0.2 pi t'), 0] with t' = t - hold;
/// the vehicle holds at the origin attitude for the first `hold`
/// seconds and the reference steps to (0, A, 0) at the hold end.
AttitudeOnlyReference gimbal_sinusoid(double amplitude, double t,
                                      double hold = 10.0);

/// Convert an Euler reference to a quaternion reference analytically:
/// omega_d = W(eta) eta_dot, alpha_d = W_dot eta_dot + W eta_ddot.
AttitudeReference attitude_reference_from_euler(const AttitudeOnlyReference& r);

struct LemniscateConfig {
  double duration = 40.0;  // s, rest to rest
  int n_loops = 2;
  double amp_x = 1.0;      // m, pre-calibration figure-eight half-width
  double aspect_y = 1.0;   // amp_y = aspect_y * amp_x
  double dive_depth = 0.35;  // m, pre-calibration per-loop dive
  double start_height = 1.0;  // m
  double peak_accel = 5.84;   // m/s^2 target; <= 0 disables calibration
  double psi_d = 0.0;
};

/// C^4 figure-eight (Gerono) with a per-loop dive, driven through a
/// degree-9 smoothstep phase so the path is rest-to-rest with four
/// vanishing end derivatives. Spatial amplitudes are scaled at
/// construction so the peak reference acceleration hits the target.
class Lemniscate {
 public:
  explicit Lemniscate(const LemniscateConfig& cfg = LemniscateConfig());

  ReferenceSample sample(double t) const;
  double duration() const { return cfg_.duration; }
  double amplitude_scale() const { return scale_; }

  /// Max over a dense grid of ||xi_d^(i)|| for i = 0..4 and
  /// |psi_d^(i)| for i = 0..2, with a small margin.
  const std::array<double, 5>& bounds_xi() const { return b_xi_; }
  const std::array<double, 3>& bounds_psi() const { return b_psi_; }

 private:
  ReferenceSample raw_sample(double t, double scale) const;

  LemniscateConfig cfg_;
  double scale_ = 1.0;
  std::array<double, 5> b_xi_{};
  std::array<double, 3> b_psi_{};
};

struct ThrowConfig {
  double speed = 2.5;        // m/s
  bool upside_down = false;  // force rotate(q, e3) . e3 < 0
  double omega_max = 10.0;   // rad/s tumble cap
  Vec3 target{0.0, 0.0, 1.0};
};

/// Seed-deterministic throw initial condition: random attitude,
/// `speed` m/s along a random upward-biased direction, random tumble.
VehicleState throw_launch_initial(std::uint64_t seed,
                                  const ThrowConfig& cfg = ThrowConfig());

/// Externally planned trajectory, loaded from CSV with columns
/// t, xi_d(3), xi_d_dot(3), xi_d_ddot(3), xi_d_d3(3), xi_d_d4(3),
/// psi_d, psi_dot_d, psi_ddot_d. Load validates monotone time and
/// that stored derivatives are consistent with finite differences of
/// the level below (rejects piecewise-linear files).
class SampledTrajectory {
 public:
  static SampledTrajectory load_csv(const std::string& path);

  /// Linear interpolation in t; clamped at the ends.
  ReferenceSample sample(double t) const;
  double duration() const { return t_.empty() ? 0.0 : t_.back(); }

 private:
  std::vector<double> t_;
  std::vector<ReferenceSample> rows_;
};

}  // namespace quadsmc
