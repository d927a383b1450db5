#include "quadsmc/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace quadsmc {
namespace {

constexpr double kGimbalFreq = 0.2 * M_PI;  // rad/s

// Degree-9 smoothstep: S(0)=0, S(1)=1, four vanishing derivatives at
// both ends, so a phase driven by S is rest-to-rest through 4th order.
void smoothstep9(double u, double out[5]) {
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
  out[0] = 126.0 * u5 - 420.0 * u5 * u + 540.0 * u5 * u2 -
           315.0 * u5 * u3 + 70.0 * u5 * u4;
  out[1] = 630.0 * u4 - 2520.0 * u5 + 3780.0 * u5 * u - 2520.0 * u5 * u2 +
           630.0 * u5 * u3;
  out[2] = 2520.0 * u3 - 12600.0 * u4 + 22680.0 * u5 - 17640.0 * u5 * u +
           5040.0 * u5 * u2;
  out[3] = 7560.0 * u2 - 50400.0 * u3 + 113400.0 * u4 - 105840.0 * u5 +
           35280.0 * u5 * u;
  out[4] = 15120.0 * u - 151200.0 * u2 + 453600.0 * u3 - 529200.0 * u4 +
           211680.0 * u5;
}

}  // namespace

AttitudeOnlyReference gimbal_sinusoid(double amplitude, double t, double hold) {
  AttitudeOnlyReference r;
  if (t < hold || amplitude == 0.0) return r;
  const double tp = t - hold;
  const double w = kGimbalFreq;
  const double s = std::sin(w * tp), c = std::cos(w * tp);
  r.eta_d = amplitude * Vec3(s, c, 0.0);
  r.eta_dot_d = amplitude * w * Vec3(c, -s, 0.0);
  r.eta_ddot_d = -amplitude * w * w * Vec3(s, c, 0.0);
  return r;
}

AttitudeReference attitude_reference_from_euler(const AttitudeOnlyReference& r) {
  AttitudeReference out;
  out.q_d = quaternion_from_euler(r.eta_d);
  const Mat3 W = body_rate_matrix(r.eta_d);
  const Mat3 Wd = body_rate_matrix_dot(r.eta_d, r.eta_dot_d);
  out.omega_d = W * r.eta_dot_d;
  out.alpha_d = Wd * r.eta_dot_d + W * r.eta_ddot_d;
  return out;
}

Lemniscate::Lemniscate(const LemniscateConfig& cfg) : cfg_(cfg) {
  if (!(cfg_.duration > 0.0) || cfg_.n_loops < 1) {
    throw std::invalid_argument("Lemniscate: bad duration or loop count");
  }
  const int n = 4000;
  if (cfg_.peak_accel > 0.0) {
    double peak = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double t = cfg_.duration * i / n;
      peak = std::max(peak, raw_sample(t, 1.0).xi_d_ddot.norm());
    }
    // All acceleration terms scale linearly with the spatial amplitudes.
    scale_ = cfg_.peak_accel / peak;
  }
  b_xi_.fill(0.0);
  b_psi_.fill(0.0);
  for (int i = 0; i <= n; ++i) {
    const double t = cfg_.duration * i / n;
    const ReferenceSample s = raw_sample(t, scale_);
    b_xi_[0] = std::max(b_xi_[0], s.xi_d.norm());
    b_xi_[1] = std::max(b_xi_[1], s.xi_d_dot.norm());
    b_xi_[2] = std::max(b_xi_[2], s.xi_d_ddot.norm());
    b_xi_[3] = std::max(b_xi_[3], s.xi_d_d3.norm());
    b_xi_[4] = std::max(b_xi_[4], s.xi_d_d4.norm());
    b_psi_[0] = std::max(b_psi_[0], std::abs(s.psi_d));
    b_psi_[1] = std::max(b_psi_[1], std::abs(s.psi_dot_d));
    b_psi_[2] = std::max(b_psi_[2], std::abs(s.psi_ddot_d));
  }
  // Grid maxima underestimate the continuous suprema slightly.
  for (double& b : b_xi_) b *= 1.001;
  for (double& b : b_psi_) b *= 1.001;
}

ReferenceSample Lemniscate::sample(double t) const {
  return raw_sample(std::clamp(t, 0.0, cfg_.duration), scale_);
}

ReferenceSample Lemniscate::raw_sample(double t, double scale) const {
  const double T = cfg_.duration;
  const double Theta = 2.0 * M_PI * cfg_.n_loops;
  double S[5];
  smoothstep9(t / T, S);
  // Phase and its time derivatives.
  double th[5];
  double Tk = 1.0;
  for (int k = 0; k < 5; ++k) {
    th[k] = Theta * S[k] / Tk;
    Tk *= T;
  }

  const double Ax = scale * cfg_.amp_x;
  const double Ay = scale * cfg_.aspect_y * cfg_.amp_x;
  const double D = scale * cfg_.dive_depth;

  // Geometry derivatives with respect to the phase, orders 0..4.
  // x = Ax sin(th); y = (Ay/2) sin(2 th); z = z0 - (D/2)(1 - cos(th)).
  const double s1 = std::sin(th[0]), c1 = std::cos(th[0]);
  const double s2 = std::sin(2.0 * th[0]), c2 = std::cos(2.0 * th[0]);
  Vec3 g[5];
  g[0] = Vec3(Ax * s1, 0.5 * Ay * s2,
              cfg_.start_height - 0.5 * D * (1.0 - c1));
  g[1] = Vec3(Ax * c1, Ay * c2, -0.5 * D * s1);
  g[2] = Vec3(-Ax * s1, -2.0 * Ay * s2, -0.5 * D * c1);
  g[3] = Vec3(-Ax * c1, -4.0 * Ay * c2, 0.5 * D * s1);
  g[4] = Vec3(Ax * s1, 8.0 * Ay * s2, 0.5 * D * c1);

  ReferenceSample out;
  out.xi_d = g[0];
  out.xi_d_dot = g[1] * th[1];
  out.xi_d_ddot = g[2] * th[1] * th[1] + g[1] * th[2];
  out.xi_d_d3 = g[3] * th[1] * th[1] * th[1] + 3.0 * g[2] * th[1] * th[2] +
                g[1] * th[3];
  out.xi_d_d4 = g[4] * th[1] * th[1] * th[1] * th[1] +
                6.0 * g[3] * th[1] * th[1] * th[2] +
                g[2] * (3.0 * th[2] * th[2] + 4.0 * th[1] * th[3]) +
                g[1] * th[4];
  out.psi_d = cfg_.psi_d;
  return out;
}

VehicleState throw_launch_initial(std::uint64_t seed, const ThrowConfig& cfg) {
  Rng rng(seed);
  VehicleState s;

  const Vec3 axis = rng.unit_vector<Vec3>();
  const double angle = rng.uniform(0.0, M_PI);
  UnitQuaternion q = UnitQuaternion::from_axis_angle(axis, angle);
  if (cfg.upside_down && q.rotate(Vec3::UnitZ()).z() >= 0.0) {
    // Composing a 180-degree body roll negates the body z axis.
    q = q * UnitQuaternion::from_axis_angle(Vec3::UnitX(), M_PI);
  }
  s.q = q;

  Vec3 dir = rng.unit_vector<Vec3>();
  dir.z() = std::abs(dir.z());  // upward bias
  s.nu = cfg.speed * dir;

  s.omega = rng.uniform(0.0, cfg.omega_max) * rng.unit_vector<Vec3>();

  s.xi = cfg.target + Vec3(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                           rng.uniform(-0.2, 0.5));
  return s;
}

SampledTrajectory SampledTrajectory::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trajectory file: " + path);
  SampledTrajectory traj;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::vector<double> vals;
    std::string tok;
    bool numeric = true;
    while (std::getline(ss, tok, ',')) {
      try {
        size_t pos = 0;
        vals.push_back(std::stod(tok, &pos));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (traj.t_.empty()) continue;  // header row
      throw std::runtime_error("non-numeric row in trajectory file");
    }
    if (vals.size() != 19) {
      throw std::runtime_error("trajectory rows need 19 columns");
    }
    if (!traj.t_.empty() && vals[0] <= traj.t_.back()) {
      throw std::runtime_error("trajectory time must be strictly increasing");
    }
    ReferenceSample r;
    r.xi_d = Vec3(vals[1], vals[2], vals[3]);
    r.xi_d_dot = Vec3(vals[4], vals[5], vals[6]);
    r.xi_d_ddot = Vec3(vals[7], vals[8], vals[9]);
    r.xi_d_d3 = Vec3(vals[10], vals[11], vals[12]);
    r.xi_d_d4 = Vec3(vals[13], vals[14], vals[15]);
    r.psi_d = vals[16];
    r.psi_dot_d = vals[17];
    r.psi_ddot_d = vals[18];
    traj.t_.push_back(vals[0]);
    traj.rows_.push_back(r);
  }
  const size_t n = traj.t_.size();
  if (n < 5) throw std::runtime_error("trajectory file too short");

  // Smoothness gate: each stored derivative must agree with a central
  // difference of the level below. Piecewise-linear files fail here.
  auto level = [&](int k, size_t i) -> Vec3 {
    const ReferenceSample& r = traj.rows_[i];
    switch (k) {
      case 0: return r.xi_d;
      case 1: return r.xi_d_dot;
      case 2: return r.xi_d_ddot;
      case 3: return r.xi_d_d3;
      default: return r.xi_d_d4;
    }
  };
  for (int k = 0; k < 4; ++k) {
    double max_err = 0.0, max_mag = 0.0;
    for (size_t i = 1; i + 1 < n; ++i) {
      const double dt = traj.t_[i + 1] - traj.t_[i - 1];
      const Vec3 fd = (level(k, i + 1) - level(k, i - 1)) / dt;
      max_err = std::max(max_err, (fd - level(k + 1, i)).norm());
      max_mag = std::max(max_mag, level(k + 1, i).norm());
    }
    if (max_err > 0.05 * max_mag + 1e-9) {
      throw std::runtime_error(
          "trajectory file fails the smoothness check at derivative order " +
          std::to_string(k + 1));
    }
  }
  return traj;
}

ReferenceSample SampledTrajectory::sample(double t) const {
  if (t <= t_.front()) return rows_.front();
  if (t >= t_.back()) return rows_.back();
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const size_t i = static_cast<size_t>(it - t_.begin());
  const double a = (t - t_[i - 1]) / (t_[i] - t_[i - 1]);
  const ReferenceSample& r0 = rows_[i - 1];
  const ReferenceSample& r1 = rows_[i];
  ReferenceSample out;
  out.xi_d = (1 - a) * r0.xi_d + a * r1.xi_d;
  out.xi_d_dot = (1 - a) * r0.xi_d_dot + a * r1.xi_d_dot;
  out.xi_d_ddot = (1 - a) * r0.xi_d_ddot + a * r1.xi_d_ddot;
  out.xi_d_d3 = (1 - a) * r0.xi_d_d3 + a * r1.xi_d_d3;
  out.xi_d_d4 = (1 - a) * r0.xi_d_d4 + a * r1.xi_d_d4;
  out.psi_d = (1 - a) * r0.psi_d + a * r1.psi_d;
  out.psi_dot_d = (1 - a) * r0.psi_dot_d + a * r1.psi_dot_d;
  out.psi_ddot_d = (1 - a) * r0.psi_ddot_d + a * r1.psi_ddot_d;
  return out;
}

}  // namespace quadsmc
