#pragma once

#include <memory>
#include <string>
#include <vector>

#include "quadsmc/benchmarks.hpp"
#include "quadsmc/control_qsmc.hpp"
#include "quadsmc/refgen.hpp"
#include "quadsmc/trajectory.hpp"

namespace quadsmc {

enum class ControllerType { kQsmc, kAqsmc, kEsmc, kGtc, kQpd };

ControllerType controller_from_string(const std::string& s);
std::string to_string(ControllerType t);

/// All tunables for every controller family; scenarios fill in the
/// Table-style defaults and the harness perturbs the active subset.
struct ControllerGains {
  AttitudeGains attitude;     // QSMC / AQSMC
  PositionGains position;     // QSMC / AQSMC
  AdaptParams adapt_q;        // AQSMC attitude channels
  AdaptParams adapt_xi;       // AQSMC position channels
  Vec3 K_q0{400, 400, 400};   // adaptive initial gains
  Vec3 K_xi0{4, 4, 3.5};
  ESMCGains esmc;
  GTCGains gtc;
  QPDGains qpd;
};

/// Pointers to every scalar the sensitivity sweep may perturb for the
/// given controller family.
std::vector<double*> tunable_scalars(ControllerGains& g, ControllerType t);

/// Per-tick controller outputs and internals, logged by the simulator.
struct ControlDiagnostics {
  UnitQuaternion q_e;
  Vec3 s_q = Vec3::Zero();
  Vec3 s_xi = Vec3::Zero();
  double f = 0.0;
  Vec3 tau = Vec3::Zero();
  Vec3 K_q = Vec3::Zero();   // active switching gains
  Vec3 K_xi = Vec3::Zero();
  AttitudeReference att_ref;
  ReferenceSample pos_ref;
};

/// Dual-rate controller: position_tick at 250 Hz produces thrust and
/// the attitude reference; attitude_tick at 500 Hz produces moments.
/// In gimbal mode the simulator feeds the attitude reference directly
/// and skips position ticks.
class Controller {
 public:
  Controller(const ControllerGains& g, const VehicleParams& p);
  virtual ~Controller() = default;

  virtual void position_tick(const VehicleState& s, const ReferenceSample& ref,
                             double dt) = 0;
  virtual void set_gimbal_reference(const AttitudeOnlyReference& ref);
  virtual void attitude_tick(const VehicleState& s, double dt) = 0;

  WrenchCommand command() const { return {diag_.f, diag_.tau}; }
  const ControlDiagnostics& diagnostics() const { return diag_; }

 protected:
  ControllerGains gains_;
  VehicleParams params_;
  ControlDiagnostics diag_;
};

std::unique_ptr<Controller> make_controller(ControllerType t,
                                            const ControllerGains& g,
                                            const VehicleParams& p);

}  // namespace quadsmc
