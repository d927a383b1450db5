#pragma once

#include <stdexcept>
#include <vector>

#include "quadsmc/math3d.hpp"

namespace quadsmc {

struct EmptySeries : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// sqrt(mean of squares). Throws EmptySeries on an empty input.
double rms(const std::vector<double>& xs);

struct TrialMetrics {
  double q_e_rms = 0.0;        // RMS of ||sgn+(q_we) qvec_e||
  double xi_e_rms = 0.0;       // m
  double psi_e_rms = 0.0;      // deg
  double npwm_rms = 0.0;       // sum of per-motor RMS, <= 4
  Vec3 q_e_rms_axis = Vec3::Zero();  // per-component RMS, for reference
};

/// Streaming accumulator so long trials need not retain sample buffers.
class MetricsAccumulator {
 public:
  void add(const UnitQuaternion& q_e, const Vec3& xi_e, double psi_e_rad,
           const Vec4& npwm);
  /// Throws EmptySeries when no samples were added.
  TrialMetrics finalize() const;
  std::size_t count() const { return n_; }

 private:
  std::size_t n_ = 0;
  double sum_qe_ = 0.0;
  Vec3 sum_qe_axis_ = Vec3::Zero();
  double sum_xie_ = 0.0;
  double sum_psie_ = 0.0;
  Vec4 sum_npwm_ = Vec4::Zero();
};

}  // namespace quadsmc
