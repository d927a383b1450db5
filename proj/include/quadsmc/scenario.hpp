#pragma once

#include <memory>
#include <string>
#include <vector>

#include "quadsmc/controller.hpp"
#include "quadsmc/sim.hpp"
#include "quadsmc/trajectory.hpp"

namespace quadsmc {

enum class ScenarioKind { kHover, kGimbal, kGimbalHold, kLemniscate, kThrow };

/// Everything run_trial needs besides the controller: the reference
/// stream, initial condition, disturbances, and per-scenario tuning.
struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::kHover;
  SimMode mode = SimMode::kFreeFlight;
  double duration = 20.0;

  // gimbal scenarios
  double gimbal_amplitude = 0.2;
  double gimbal_hold = 10.0;
  Vec3 gimbal_hold_eta = Vec3::Zero();  // constant setpoint for kGimbalHold
  GimbalConfig gimbal;

  Vec3 hover_target{0, 0, 1};
  std::shared_ptr<const Lemniscate> lemniscate;
  ThrowConfig throw_cfg;
  std::uint64_t seed = 1;

  VehicleState initial_state;
  DisturbanceModel disturbance;
  UncertaintyBounds bounds;  // declared, feeds gain conditions/monitors

  ReferenceSample position_reference(double t) const;
  AttitudeOnlyReference attitude_reference(double t) const;
  /// Per-scenario controller defaults (the tuning tables).
  ControllerGains default_gains(ControllerType t) const;
};

/// Registry: hover, gimbal1, gimbal2, gimbal_hold, lemniscate,
/// lemniscate_wind, throw, throw_upsidedown.
Scenario make_scenario(const std::string& name, std::uint64_t seed = 1);
std::vector<std::string> scenario_names();

/// Simulation defaults appropriate for the scenario (duration, mode).
SimConfig default_sim_config(const Scenario& s);

}  // namespace quadsmc
