#include "quadsmc/metrics.hpp"

#include <cmath>

namespace quadsmc {

double rms(const std::vector<double>& xs) {
  if (xs.empty()) throw EmptySeries("rms of empty series");
  double s = 0.0;
  for (double x : xs) s += x * x;
  return std::sqrt(s / static_cast<double>(xs.size()));
}

void MetricsAccumulator::add(const UnitQuaternion& q_e, const Vec3& xi_e,
                             double psi_e_rad, const Vec4& npwm) {
  const Vec3 qv = sgn_plus(q_e.w()) * q_e.vec();
  sum_qe_ += qv.squaredNorm();
  sum_qe_axis_ += qv.cwiseProduct(qv);
  sum_xie_ += xi_e.squaredNorm();
  sum_psie_ += psi_e_rad * psi_e_rad;
  sum_npwm_ += npwm.cwiseProduct(npwm);
  ++n_;
}

TrialMetrics MetricsAccumulator::finalize() const {
  if (n_ == 0) throw EmptySeries("metrics over empty trial");
  const double inv = 1.0 / static_cast<double>(n_);
  TrialMetrics m;
  m.q_e_rms = std::sqrt(sum_qe_ * inv);
  m.q_e_rms_axis = (sum_qe_axis_ * inv).cwiseSqrt();
  m.xi_e_rms = std::sqrt(sum_xie_ * inv);
  m.psi_e_rms = std::sqrt(sum_psie_ * inv) * 180.0 / M_PI;
  double npwm = 0.0;
  for (int i = 0; i < 4; ++i) npwm += std::sqrt(sum_npwm_(i) * inv);
  m.npwm_rms = npwm;
  return m;
}

}  // namespace quadsmc
