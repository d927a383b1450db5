#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quadsmc/rng.hpp"
#include "quadsmc/scenario.hpp"
#include "quadsmc/sim.hpp"

namespace quadsmc {

/// Monte-Carlo gain-sensitivity sweep description.
struct SweepSpec {
  std::string scenario = "lemniscate";
  std::vector<ControllerType> controllers{
      ControllerType::kQsmc, ControllerType::kAqsmc, ControllerType::kEsmc,
      ControllerType::kGtc, ControllerType::kQpd};
  double deviation_fraction = 0.20;  // multiplicative, uniform per scalar
  int n_trials = 10;
  std::uint64_t seed = 1;
  /// When set, overrides the scenario's per-controller defaults.
  std::optional<ControllerGains> base_gains;
  std::optional<SimConfig> sim;  // default: scenario's
  bool record_traces = false;    // keep trial traces in memory

  void validate() const;  // throws std::invalid_argument
};

struct Stats {
  double mean = 0.0, sd = 0.0, median = 0.0, iqr = 0.0;
};

/// Sort-based statistics; throws EmptySeries on an empty input.
/// Quartiles use linear interpolation between order statistics.
Stats compute_stats(std::vector<double> xs);

struct ControllerSweep {
  ControllerType controller = ControllerType::kQsmc;
  std::vector<TrialResult> trials;  // index = trial number
  int failures = 0;
  // Over completed trials only; failures are counted, not averaged.
  Stats q_e_rms, xi_e_rms, psi_e_rms, npwm_rms;
};

struct SweepSummary {
  SweepSpec spec;
  std::vector<ControllerSweep> per_controller;

  /// One row per (controller, trial): metrics plus the verdict.
  std::string to_csv() const;
  /// Human-readable statistics table.
  std::string to_text() const;
};

/// Every tunable scalar multiplied by an independent uniform factor in
/// [1 - fraction, 1 + fraction]; draw order is the tunable_scalars order.
ControllerGains perturb_gains(const ControllerGains& base, ControllerType t,
                              double fraction, Rng& rng);

/// Deterministic given (seed, spec): trial i of controller c uses the
/// RNG stream derived from (seed, c * 1000 + i). Trial failures are
/// recorded in the summary, never propagated.
SweepSummary run_sweep(const SweepSpec& spec);

/// One pitch-hold-with-disturbance trial per parameter value on the
/// single-axis gimbal stand, for studying the adaptation knobs.
/// `param` is one of "epsilon", "K0", "mu" (applied to the attitude
/// channels; K0 also moves K_th to keep K(0) = K_th).
struct StudyPoint {
  double value = 0.0;
  TrialResult trial;
};
std::vector<StudyPoint> aqsmc_parameter_study(const std::string& param,
                                              const std::vector<double>& values,
                                              const std::string& scenario_name,
                                              std::uint64_t seed = 1);

}  // namespace quadsmc
