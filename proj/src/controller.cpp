#include "quadsmc/controller.hpp"

#include <cmath>
#include <stdexcept>

namespace quadsmc {

ControllerType controller_from_string(const std::string& s) {
  if (s == "qsmc") return ControllerType::kQsmc;
  if (s == "aqsmc") return ControllerType::kAqsmc;
  if (s == "esmc") return ControllerType::kEsmc;
  if (s == "gtc") return ControllerType::kGtc;
  if (s == "qpd") return ControllerType::kQpd;
  throw std::invalid_argument("unknown controller: " + s);
}

std::string to_string(ControllerType t) {
  switch (t) {
    case ControllerType::kQsmc: return "qsmc";
    case ControllerType::kAqsmc: return "aqsmc";
    case ControllerType::kEsmc: return "esmc";
    case ControllerType::kGtc: return "gtc";
    case ControllerType::kQpd: return "qpd";
  }
  return "?";
}

std::vector<double*> tunable_scalars(ControllerGains& g, ControllerType t) {
  std::vector<double*> out;
  auto add = [&out](Vec3& v) {
    out.push_back(&v.x());
    out.push_back(&v.y());
    out.push_back(&v.z());
  };
  switch (t) {
    case ControllerType::kAqsmc:
      add(g.K_q0);
      add(g.K_xi0);
      [[fallthrough]];
    case ControllerType::kQsmc:
      add(g.attitude.Lambda_q);
      add(g.attitude.K_q);
      add(g.attitude.phi_q);
      add(g.position.Lambda_xi);
      add(g.position.K_xi);
      add(g.position.phi_xi);
      break;
    case ControllerType::kEsmc:
      add(g.esmc.K_eta);
      add(g.esmc.Lambda_eta);
      add(g.esmc.phi_eta);
      add(g.esmc.K_xi);
      add(g.esmc.Lambda_xi);
      add(g.esmc.phi_xi);
      break;
    case ControllerType::kGtc:
      add(g.gtc.K_R);
      add(g.gtc.K_omega);
      add(g.gtc.K_xi);
      add(g.gtc.K_nu);
      break;
    case ControllerType::kQpd:
      add(g.qpd.K_P);
      add(g.qpd.K_D);
      add(g.qpd.position.Lambda_xi);
      add(g.qpd.position.K_xi);
      add(g.qpd.position.phi_xi);
      break;
  }
  return out;
}

Controller::Controller(const ControllerGains& g, const VehicleParams& p)
    : gains_(g), params_(p) {
  diag_.f = p.hover_thrust();
}

void Controller::set_gimbal_reference(const AttitudeOnlyReference& ref) {
  diag_.att_ref = attitude_reference_from_euler(ref);
  diag_.pos_ref = ReferenceSample{};
  diag_.pos_ref.psi_d = ref.eta_d(2);
  diag_.f = params_.hover_thrust();
}

namespace {

// Shared position loop + reference-generation pipeline for the
// quaternion controllers (QSMC, AQSMC, QPD).
class QsmcFamilyController : public Controller {
 public:
  QsmcFamilyController(const ControllerGains& g, const VehicleParams& p,
                       const PositionGains& pos, bool adaptive)
      : Controller(g, p), pos_(pos), adaptive_(adaptive) {
    pos_.validate();
    gains_.attitude.validate();
    if (adaptive_) {
      gains_.adapt_q.validate();
      gains_.adapt_xi.validate();
      adapt_.K_q_diag = g.K_q0;
      adapt_.K_xi_diag = g.K_xi0;
    }
    diag_.K_q = adaptive_ ? g.K_q0 : gains_.attitude.K_q;
    diag_.K_xi = adaptive_ ? g.K_xi0 : pos_.K_xi;
  }

  void position_tick(const VehicleState& s, const ReferenceSample& ref,
                     double dt) override {
    ErrorState e;
    e.xi_e = s.xi - ref.xi_d;
    e.nu_e = s.nu - ref.xi_d_dot;
    const Vec3* Kxi_ptr = adaptive_ ? &adapt_.K_xi_diag : nullptr;
    const Vec3 kappa = position_control(e, ref.xi_d_ddot, pos_, params_, Kxi_ptr);
    const double f = thrust_from_kappa(kappa, s.q);
    const double fdot = have_f_ ? (f - prev_f_) / dt : 0.0;
    prev_f_ = f;
    have_f_ = true;

    // Acceleration/jerk errors from the nominal translational model;
    // the feedforward chain only needs estimates, not truth.
    const Vec3 e3b = s.q.rotate(Vec3::UnitZ());
    const Vec3 e3b_dot = s.q.rotate(s.omega.cross(Vec3::UnitZ()));
    const Vec3 a_e = -kGravity * Vec3::UnitZ() + (f / params_.m_hat) * e3b -
                     ref.xi_d_ddot;
    const Vec3 j_e = (fdot / params_.m_hat) * e3b +
                     (f / params_.m_hat) * e3b_dot - ref.xi_d_d3;

    const Vec3 s_xi = sliding_surface_position(e, pos_);
    const Vec3 sdot = a_e + pos_.Lambda_xi.cwiseProduct(e.nu_e);
    const Vec3 sddot = j_e + pos_.Lambda_xi.cwiseProduct(a_e);

    const Vec3 Kxi = adaptive_ ? adapt_.K_xi_diag : pos_.K_xi;
    const Vec3 dK = adaptive_ ? adapt_.dK_xi : Vec3::Zero().eval();
    const Vec3 ddK = adaptive_ ? adapt_.ddK_xi : Vec3::Zero().eval();
    Vec3 kd, kdd;
    kappa_derivatives(ref.xi_d_d3, ref.xi_d_d4, a_e, j_e, s_xi, sdot, sddot,
                      pos_, params_, Kxi, dK, ddK, &kd, &kdd);

    FlatInput in;
    in.kappa = kappa;
    in.kappa_dot = kd;
    in.kappa_ddot = kdd;
    in.psi_d = ref.psi_d;
    in.psi_dot_d = ref.psi_dot_d;
    in.psi_ddot_d = ref.psi_ddot_d;
    const RotationReference rr =
        build_rotation_reference(in, 0.5 * pos_.kappa_floor);
    AttitudeReference ar =
        remap_to_body_tangent(s.q.to_rotation_matrix(), rr, s.omega);
    if (ar.q_d.dot(prev_qd_) < 0.0) ar.q_d = -ar.q_d;
    prev_qd_ = ar.q_d;

    s_xi_ = s_xi;
    sdot_xi_ = sdot;
    diag_.att_ref = ar;
    diag_.pos_ref = ref;
    diag_.f = f;
    diag_.s_xi = s_xi;
    diag_.K_xi = Kxi;
  }

  void set_gimbal_reference(const AttitudeOnlyReference& ref) override {
    Controller::set_gimbal_reference(ref);
    if (diag_.att_ref.q_d.dot(prev_qd_) < 0.0) {
      diag_.att_ref.q_d = -diag_.att_ref.q_d;
    }
    prev_qd_ = diag_.att_ref.q_d;
    s_xi_ = Vec3::Zero();
    sdot_xi_ = Vec3::Zero();
  }

  void attitude_tick(const VehicleState& s, double dt) override {
    ErrorState e;
    e.q_e = attitude_error(diag_.att_ref.q_d, s.q);
    e.omega_e = s.omega - diag_.att_ref.omega_d;
    const Vec3 s_q = sliding_surface_attitude(e, gains_.attitude);
    if (adaptive_) {
      adapt_ = adapt_step(adapt_, s_q, s_xi_, sdot_xi_, gains_.adapt_q,
                          gains_.adapt_xi, gains_.attitude, pos_, params_, dt);
      diag_.K_q = adapt_.K_q_diag;
      diag_.K_xi = adapt_.K_xi_diag;
    }
    diag_.q_e = e.q_e;
    diag_.s_q = s_q;
    diag_.tau = attitude_law(e, s, s_q);
  }

  const AdaptiveState& adaptive_state() const { return adapt_; }

 protected:
  virtual Vec3 attitude_law(const ErrorState& e, const VehicleState& s,
                            const Vec3& /*s_q*/) {
    const Vec3 qve = qdot_vec_e(e.q_e, e.omega_e);
    const Vec3* Kq = adaptive_ ? &adapt_.K_q_diag : nullptr;
    return attitude_control(e, qve, s.omega, diag_.att_ref.alpha_d,
                            gains_.attitude, params_, Kq);
  }

  PositionGains pos_;
  bool adaptive_ = false;
  AdaptiveState adapt_;
  Vec3 s_xi_ = Vec3::Zero();
  Vec3 sdot_xi_ = Vec3::Zero();
  UnitQuaternion prev_qd_;
  double prev_f_ = 0.0;
  bool have_f_ = false;
};

class QpdController : public QsmcFamilyController {
 public:
  QpdController(const ControllerGains& g, const VehicleParams& p)
      : QsmcFamilyController(g, p, g.qpd.position, /*adaptive=*/false) {}

 protected:
  Vec3 attitude_law(const ErrorState& e, const VehicleState&,
                    const Vec3&) override {
    return qpd_attitude_control(e, gains_.qpd, params_);
  }
};

class GtcController : public Controller {
 public:
  GtcController(const ControllerGains& g, const VehicleParams& p)
      : Controller(g, p) {}

  void position_tick(const VehicleState& s, const ReferenceSample& ref,
                     double /*dt*/) override {
    const Vec3 xi_e = s.xi - ref.xi_d;
    const Vec3 nu_e = s.nu - ref.xi_d_dot;
    const GTCGains& g = gains_.gtc;
    const Vec3 kappa =
        gtc_position_control(xi_e, nu_e, ref.xi_d_ddot, g, params_);
    const double f = std::max(0.0, kappa.dot(s.q.rotate(Vec3::UnitZ())));

    const Vec3 e3b = s.q.rotate(Vec3::UnitZ());
    const Vec3 a_e = -kGravity * Vec3::UnitZ() + (f / params_.m_hat) * e3b -
                     ref.xi_d_ddot;
    // Differentiating kappa's own expression; the jerk error reuses the
    // nominal-model estimate.
    const Vec3 e3b_dot = s.q.rotate(s.omega.cross(Vec3::UnitZ()));
    const Vec3 j_e = (f / params_.m_hat) * e3b_dot - ref.xi_d_d3;
    const Vec3 kd = params_.m_hat * (ref.xi_d_d3 - g.K_xi.cwiseProduct(nu_e) -
                                     g.K_nu.cwiseProduct(a_e));
    const Vec3 kdd = params_.m_hat * (ref.xi_d_d4 - g.K_xi.cwiseProduct(a_e) -
                                      g.K_nu.cwiseProduct(j_e));

    FlatInput in;
    in.kappa = kappa;
    in.kappa_dot = kd;
    in.kappa_ddot = kdd;
    in.psi_d = ref.psi_d;
    in.psi_dot_d = ref.psi_dot_d;
    in.psi_ddot_d = ref.psi_ddot_d;
    const RotationReference rr = build_rotation_reference(
        in, 0.5 * 0.05 * params_.m_hat * kGravity);
    R_d_ = rr.R;
    poisson_rates(rr, &omega_Rd_, &alpha_Rd_);

    AttitudeReference ar =
        remap_to_body_tangent(s.q.to_rotation_matrix(), rr, s.omega);
    if (ar.q_d.dot(prev_qd_) < 0.0) ar.q_d = -ar.q_d;
    prev_qd_ = ar.q_d;
    diag_.att_ref = ar;
    diag_.pos_ref = ref;
    diag_.f = f;
  }

  void set_gimbal_reference(const AttitudeOnlyReference& ref) override {
    Controller::set_gimbal_reference(ref);
    R_d_ = diag_.att_ref.q_d.to_rotation_matrix();
    // For a reference fed directly, omega_d is already the desired-frame
    // body rate.
    omega_Rd_ = diag_.att_ref.omega_d;
    alpha_Rd_ = diag_.att_ref.alpha_d;
  }

  void attitude_tick(const VehicleState& s, double /*dt*/) override {
    diag_.q_e = attitude_error(diag_.att_ref.q_d, s.q);
    diag_.tau = gtc_attitude_control(s.q.to_rotation_matrix(), s.omega, R_d_,
                                     omega_Rd_, alpha_Rd_, gains_.gtc, params_);
  }

 private:
  Mat3 R_d_ = Mat3::Identity();
  Vec3 omega_Rd_ = Vec3::Zero();
  Vec3 alpha_Rd_ = Vec3::Zero();
  UnitQuaternion prev_qd_;
};

class EsmcController : public Controller {
 public:
  EsmcController(const ControllerGains& g, const VehicleParams& p)
      : Controller(g, p) {}

  void position_tick(const VehicleState& s, const ReferenceSample& ref,
                     double dt) override {
    const Vec3 xi_e = s.xi - ref.xi_d;
    const Vec3 nu_e = s.nu - ref.xi_d_dot;
    const ESMCGains& g = gains_.esmc;
    const Vec3 s_xi = nu_e + g.Lambda_xi.cwiseProduct(xi_e);
    const Vec3 eta = euler_from_quaternion(s.q);
    double ux = 0.0, uy = 0.0;
    const double f =
        esmc_thrust(eta, nu_e, ref.xi_d_ddot, s_xi, g, params_, &ux, &uy);
    const Vec3 eta_d = esmc_attitude_setpoint(ux, uy, ref.psi_d);

    // The setpoint has no analytic derivatives; difference the stream.
    Vec3 ed = Vec3::Zero(), edd = Vec3::Zero();
    if (hist_ >= 1) {
      for (int i = 0; i < 3; ++i) {
        ed(i) = wrap_angle(eta_d(i) - eta_d1_(i)) / dt;
      }
    }
    if (hist_ >= 2) {
      for (int i = 0; i < 3; ++i) {
        edd(i) = (wrap_angle(eta_d(i) - eta_d1_(i)) -
                  wrap_angle(eta_d1_(i) - eta_d2_(i))) /
                 (dt * dt);
      }
    }
    eta_d2_ = eta_d1_;
    eta_d1_ = eta_d;
    hist_ = std::min(hist_ + 1, 2);
    eta_d_ = eta_d;
    eta_dot_d_ = ed;
    eta_ddot_d_ = edd;

    diag_.f = f;
    diag_.s_xi = s_xi;
    diag_.pos_ref = ref;
    AttitudeOnlyReference ar{eta_d, ed, edd};
    diag_.att_ref = attitude_reference_from_euler(ar);
  }

  void set_gimbal_reference(const AttitudeOnlyReference& ref) override {
    Controller::set_gimbal_reference(ref);
    eta_d_ = ref.eta_d;
    eta_dot_d_ = ref.eta_dot_d;
    eta_ddot_d_ = ref.eta_ddot_d;
  }

  void attitude_tick(const VehicleState& s, double /*dt*/) override {
    const Vec3 eta = euler_from_quaternion(s.q);
    const Vec3 eta_dot = euler_kinematics(eta, s.omega);
    Vec3 s_eta;
    diag_.tau = esmc_attitude_control(eta, eta_dot, s.omega, eta_d_,
                                      eta_dot_d_, eta_ddot_d_, gains_.esmc,
                                      params_, &s_eta);
    diag_.s_q = s_eta;
    diag_.q_e = attitude_error(diag_.att_ref.q_d, s.q);
  }

 private:
  Vec3 eta_d_ = Vec3::Zero();
  Vec3 eta_dot_d_ = Vec3::Zero();
  Vec3 eta_ddot_d_ = Vec3::Zero();
  Vec3 eta_d1_ = Vec3::Zero();
  Vec3 eta_d2_ = Vec3::Zero();
  int hist_ = 0;
};

}  // namespace

std::unique_ptr<Controller> make_controller(ControllerType t,
                                            const ControllerGains& g,
                                            const VehicleParams& p) {
  switch (t) {
    case ControllerType::kQsmc:
      return std::make_unique<QsmcFamilyController>(g, p, g.position, false);
    case ControllerType::kAqsmc:
      return std::make_unique<QsmcFamilyController>(g, p, g.position, true);
    case ControllerType::kQpd:
      return std::make_unique<QpdController>(g, p);
    case ControllerType::kGtc:
      return std::make_unique<GtcController>(g, p);
    case ControllerType::kEsmc:
      return std::make_unique<EsmcController>(g, p);
  }
  throw std::logic_error("unreachable controller type");
}

}  // namespace quadsmc
