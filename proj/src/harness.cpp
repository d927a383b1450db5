#include "quadsmc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "quadsmc/csvio.hpp"
#include "quadsmc/metrics.hpp"

namespace quadsmc {

void SweepSpec::validate() const {
  if (!(deviation_fraction >= 0.0 && deviation_fraction < 1.0)) {
    throw std::invalid_argument("deviation_fraction must be in [0, 1)");
  }
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
  if (controllers.empty()) {
    throw std::invalid_argument("controller list must not be empty");
  }
}

Stats compute_stats(std::vector<double> xs) {
  if (xs.empty()) throw EmptySeries("compute_stats: empty series");
  Stats st;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) st.mean += x;
  st.mean /= n;
  for (double x : xs) st.sd += (x - st.mean) * (x - st.mean);
  st.sd = xs.size() > 1 ? std::sqrt(st.sd / (n - 1)) : 0.0;
  std::sort(xs.begin(), xs.end());
  const auto quantile = [&](double p) {
    const double h = p * (n - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, xs.size() - 1);
    return xs[lo] + (h - lo) * (xs[hi] - xs[lo]);
  };
  st.median = quantile(0.5);
  st.iqr = quantile(0.75) - quantile(0.25);
  return st;
}

ControllerGains perturb_gains(const ControllerGains& base, ControllerType t,
                              double fraction, Rng& rng) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("fraction must be in [0, 1)");
  }
  ControllerGains g = base;
  for (double* p : tunable_scalars(g, t)) {
    *p *= rng.uniform(1.0 - fraction, 1.0 + fraction);
  }
  return g;
}

SweepSummary run_sweep(const SweepSpec& spec) {
  spec.validate();
  SweepSummary summary;
  summary.spec = spec;
  const Scenario scenario = make_scenario(spec.scenario, spec.seed);
  const VehicleParams params = VehicleParams::crazyflie();
  SimConfig sim = spec.sim ? *spec.sim : default_sim_config(scenario);
  sim.record_trace = spec.record_traces;

  for (std::size_t ci = 0; ci < spec.controllers.size(); ++ci) {
    const ControllerType type = spec.controllers[ci];
    ControllerSweep cs;
    cs.controller = type;
    const ControllerGains base =
        spec.base_gains ? *spec.base_gains : scenario.default_gains(type);
    for (int trial = 0; trial < spec.n_trials; ++trial) {
      Rng rng = Rng::derive(spec.seed, ci * 1000 + trial);
      const ControllerGains gains =
          perturb_gains(base, type, spec.deviation_fraction, rng);
      TrialResult res;
      try {
        res = run_trial(scenario, type, gains, sim, params);
      } catch (const std::exception& e) {
        res.success = false;
        res.failure_reason = e.what();
      }
      if (!res.success) ++cs.failures;
      cs.trials.push_back(std::move(res));
    }
    std::vector<double> qe, xie, psie, npwm;
    for (const TrialResult& r : cs.trials) {
      if (!r.success) continue;
      qe.push_back(r.metrics.q_e_rms);
      xie.push_back(r.metrics.xi_e_rms);
      psie.push_back(r.metrics.psi_e_rms);
      npwm.push_back(r.metrics.npwm_rms);
    }
    if (!qe.empty()) {
      cs.q_e_rms = compute_stats(qe);
      cs.xi_e_rms = compute_stats(xie);
      cs.psi_e_rms = compute_stats(psie);
      cs.npwm_rms = compute_stats(npwm);
    }
    summary.per_controller.push_back(std::move(cs));
  }
  return summary;
}

std::string SweepSummary::to_csv() const {
  std::ostringstream os;
  os << "controller,trial,success,failure_reason,q_e_rms,xi_e_rms,"
        "psi_e_rms,npwm_rms,failure_time\n";
  for (const ControllerSweep& cs : per_controller) {
    for (std::size_t i = 0; i < cs.trials.size(); ++i) {
      const TrialResult& r = cs.trials[i];
      os << to_string(cs.controller) << ',' << i << ',' << (r.success ? 1 : 0)
         << ',' << r.failure_reason << ',';
      if (r.success) {
        os << format_full(r.metrics.q_e_rms) << ','
           << format_full(r.metrics.xi_e_rms) << ','
           << format_full(r.metrics.psi_e_rms) << ','
           << format_full(r.metrics.npwm_rms);
      } else {
        os << ",,,";
      }
      os << ',' << format_full(r.failure_time) << '\n';
    }
  }
  return os.str();
}

std::string SweepSummary::to_text() const {
  std::ostringstream os;
  os << "sweep: scenario=" << spec.scenario
     << " trials=" << spec.n_trials
     << " deviation=" << spec.deviation_fraction << " seed=" << spec.seed
     << "\n\n";
  const auto line = [&](const char* name, const Stats& s) {
    os << "    " << name << ": median=" << s.median << " iqr=" << s.iqr
       << " mean=" << s.mean << " sd=" << s.sd << "\n";
  };
  for (const ControllerSweep& cs : per_controller) {
    os << to_string(cs.controller) << "  (" << cs.trials.size() - cs.failures
       << "/" << cs.trials.size() << " completed, " << cs.failures
       << " failed)\n";
    if (static_cast<int>(cs.trials.size()) > cs.failures) {
      line("q_e_rms  ", cs.q_e_rms);
      line("xi_e_rms ", cs.xi_e_rms);
      line("psi_e_rms", cs.psi_e_rms);
      line("npwm_rms ", cs.npwm_rms);
    }
  }
  return os.str();
}

std::vector<StudyPoint> aqsmc_parameter_study(const std::string& param,
                                              const std::vector<double>& values,
                                              const std::string& scenario_name,
                                              std::uint64_t seed) {
  const Scenario scenario = make_scenario(scenario_name, seed);
  const VehicleParams params = VehicleParams::crazyflie();
  SimConfig sim = default_sim_config(scenario);
  std::vector<StudyPoint> out;
  for (double v : values) {
    ControllerGains g = scenario.default_gains(ControllerType::kAqsmc);
    if (param == "epsilon") {
      g.adapt_q.epsilon = Vec3::Constant(v);
    } else if (param == "K0") {
      g.K_q0 = Vec3::Constant(v);
      g.adapt_q.K_th = Vec3::Constant(v);
    } else if (param == "mu") {
      g.adapt_q.mu = Vec3::Constant(v);
    } else {
      throw std::invalid_argument("unknown study parameter: " + param);
    }
    StudyPoint pt;
    pt.value = v;
    try {
      pt.trial = run_trial(scenario, ControllerType::kAqsmc, g, sim, params);
    } catch (const std::exception& e) {
      pt.trial.success = false;
      pt.trial.failure_reason = e.what();
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace quadsmc
