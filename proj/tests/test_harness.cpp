#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "quadsmc/harness.hpp"

using namespace quadsmc;

TEST_CASE("perturbation is identity at zero deviation") {
  const Scenario sc = make_scenario("lemniscate");
  const ControllerGains base = sc.default_gains(ControllerType::kQsmc);
  Rng rng(5);
  ControllerGains got = perturb_gains(base, ControllerType::kQsmc, 0.0, rng);
  ControllerGains ref = base;
  auto gp = tunable_scalars(got, ControllerType::kQsmc);
  auto rp = tunable_scalars(ref, ControllerType::kQsmc);
  REQUIRE(gp.size() == rp.size());
  for (std::size_t i = 0; i < gp.size(); ++i) CHECK(*gp[i] == *rp[i]);
}

TEST_CASE("perturbation factors are uniform in the band") {
  const Scenario sc = make_scenario("lemniscate");
  const ControllerGains base = sc.default_gains(ControllerType::kQsmc);
  ControllerGains mut = base;
  const auto base_ptrs = tunable_scalars(const_cast<ControllerGains&>(mut),
                                         ControllerType::kQsmc);
  Rng rng(99);
  double sum = 0.0;
  int n = 0;
  for (int rep = 0; rep < 600; ++rep) {
    ControllerGains g = perturb_gains(base, ControllerType::kQsmc, 0.2, rng);
    auto gp = tunable_scalars(g, ControllerType::kQsmc);
    ControllerGains b2 = base;
    auto bp = tunable_scalars(b2, ControllerType::kQsmc);
    for (std::size_t i = 0; i < gp.size(); ++i) {
      if (*bp[i] == 0.0) continue;
      const double f = *gp[i] / *bp[i];
      CHECK(f >= 0.8 - 1e-12);
      CHECK(f <= 1.2 + 1e-12);
      sum += f;
      ++n;
    }
  }
  REQUIRE(n > 5000);
  CHECK(std::abs(sum / n - 1.0) < 0.01);
  (void)base_ptrs;
}

TEST_CASE("perturbation is seed-reproducible") {
  const Scenario sc = make_scenario("lemniscate");
  const ControllerGains base = sc.default_gains(ControllerType::kAqsmc);
  Rng r1 = Rng::derive(11, 3);
  Rng r2 = Rng::derive(11, 3);
  ControllerGains a = perturb_gains(base, ControllerType::kAqsmc, 0.2, r1);
  ControllerGains b = perturb_gains(base, ControllerType::kAqsmc, 0.2, r2);
  auto ap = tunable_scalars(a, ControllerType::kAqsmc);
  auto bp = tunable_scalars(b, ControllerType::kAqsmc);
  for (std::size_t i = 0; i < ap.size(); ++i) CHECK(*ap[i] == *bp[i]);
}

TEST_CASE("statistics on hand-checked series") {
  const Stats s = compute_stats({1, 2, 3, 4, 5});
  CHECK(s.mean == doctest::Approx(3.0));
  CHECK(s.sd == doctest::Approx(std::sqrt(2.5)).epsilon(1e-12));  // sample sd
  CHECK(s.median == doctest::Approx(3.0));
  CHECK(s.iqr == doctest::Approx(2.0));

  const Stats one = compute_stats({7.5});
  CHECK(one.mean == 7.5);
  CHECK(one.median == 7.5);
  CHECK(one.sd == 0.0);
  CHECK(one.iqr == 0.0);

  CHECK_THROWS_AS(compute_stats({}), EmptySeries);

  // Order must not matter.
  const Stats a = compute_stats({5, 1, 4, 2, 3});
  CHECK(a.median == doctest::Approx(3.0));
}

TEST_CASE("degenerate sweep reproduces the single trial exactly") {
  SweepSpec spec;
  spec.scenario = "hover";
  spec.controllers = {ControllerType::kQsmc};
  spec.deviation_fraction = 0.0;
  spec.n_trials = 1;
  spec.seed = 4;
  SimConfig cfg = default_sim_config(make_scenario("hover"));
  cfg.duration = 2.0;
  spec.sim = cfg;
  const SweepSummary sum = run_sweep(spec);
  REQUIRE(sum.per_controller.size() == 1);
  const ControllerSweep& cs = sum.per_controller[0];
  CHECK(cs.failures == 0);
  REQUIRE(cs.trials.size() == 1);

  const Scenario sc = make_scenario("hover", 4);
  const TrialResult direct =
      run_trial(sc, ControllerType::kQsmc,
                sc.default_gains(ControllerType::kQsmc), cfg,
                VehicleParams::crazyflie());
  CHECK(cs.trials[0].metrics.xi_e_rms == direct.metrics.xi_e_rms);
  CHECK(cs.trials[0].metrics.q_e_rms == direct.metrics.q_e_rms);
  CHECK(cs.q_e_rms.mean == direct.metrics.q_e_rms);
  CHECK(cs.q_e_rms.sd == 0.0);
}

TEST_CASE("sweep csv is reproducible and well formed") {
  SweepSpec spec;
  spec.scenario = "hover";
  spec.controllers = {ControllerType::kQsmc, ControllerType::kQpd};
  spec.n_trials = 3;
  spec.seed = 21;
  SimConfig cfg = default_sim_config(make_scenario("hover"));
  cfg.duration = 1.5;
  cfg.record_trace = false;
  spec.sim = cfg;
  const std::string a = run_sweep(spec).to_csv();
  const std::string b = run_sweep(spec).to_csv();
  CHECK(a == b);
  CHECK(a.rfind("controller,trial,success", 0) == 0);
  // header + 2 controllers x 3 trials
  CHECK(std::count(a.begin(), a.end(), '\n') == 7);
}

TEST_CASE("adaptation parameter study endpoints") {
  // Large epsilon keeps the dead zone wide: the gain barely moves.
  // Small epsilon lets the gain rise during the disturbance window and
  // decay back toward the floor afterwards.
  const auto pts = aqsmc_parameter_study("epsilon", {0.05, 8.0}, "gimbal_hold", 3);
  REQUIRE(pts.size() == 2);
  for (const StudyPoint& p : pts) REQUIRE(p.trial.success);

  const auto k_series = [](const TrialResult& r) {
    std::vector<std::pair<double, double>> ks;
    for (const TraceRow& row : r.trace) ks.emplace_back(row.t, row.K_q(1));
    return ks;
  };
  const auto at = [](const std::vector<std::pair<double, double>>& ks,
                     double t) {
    double v = ks.front().second;
    for (const auto& [tt, kk] : ks) {
      if (tt <= t) v = kk;
    }
    return v;
  };

  const auto small_eps = k_series(pts[0].trial);
  const auto big_eps = k_series(pts[1].trial);
  const double k0 = big_eps.front().second;

  // epsilon = 8: within 1% of the initial gain throughout.
  double dev = 0.0;
  for (const auto& [t, k] : big_eps) dev = std::max(dev, std::abs(k - k0));
  CHECK(dev <= 0.01 * k0);

  // epsilon = 0.05: clear rise while the torque step is active...
  CHECK(at(small_eps, 6.9) > 1.03 * small_eps.front().second);
  // ...then decay after it ends.
  const double peak = at(small_eps, 7.0);
  CHECK(at(small_eps, small_eps.back().first) < peak);
}

TEST_CASE("study rejects unknown parameters") {
  CHECK_THROWS_AS(aqsmc_parameter_study("bogus", {1.0}, "gimbal_hold"),
                  std::invalid_argument);
}

TEST_CASE("sweep spec validation") {
  SweepSpec spec;
  spec.n_trials = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.n_trials = 1;
  spec.deviation_fraction = -0.1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
