#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "suntrack/sim_harness.hpp"
#include "suntrack/trace_io.hpp"
#include "suntrack/units.hpp"

using namespace suntrack;

namespace {

Scenario step_scenario() {
  Scenario sc;
  sc.grid.dt = 1e-3;
  sc.grid.t_end = 6.0;
  sc.control_dt = 1e-3;
  ReferenceProfile prof;
  prof.kind = ProfileKind::Step;
  prof.target = deg2rad(0.48);
  prof.t_on = 0.5;
  prof.rise_window = 0.0;
  sc.axes.push_back(prof);
  return sc;
}

}  // namespace

TEST_CASE("disturbance torque piecewise shapes") {
  DisturbanceConfig cfg;
  CHECK(disturbance_torque(cfg, 3.0) == 0.0);

  cfg.kind = DisturbanceKind::Step;
  cfg.amplitude = 0.5;
  cfg.start = 2.0;
  CHECK(disturbance_torque(cfg, 1.9) == 0.0);
  CHECK(disturbance_torque(cfg, 2.0) == 0.5);
  CHECK(disturbance_torque(cfg, 100.0) == 0.5);

  cfg.kind = DisturbanceKind::Square;
  cfg.amplitude = 0.2;
  cfg.start = 1.0;
  cfg.period = 4.0;
  CHECK(disturbance_torque(cfg, 0.5) == 0.0);
  CHECK(disturbance_torque(cfg, 1.0) == 0.2);
  CHECK(disturbance_torque(cfg, 2.9) == 0.2);
  CHECK(disturbance_torque(cfg, 3.0) == -0.2);
  CHECK(disturbance_torque(cfg, 4.9) == -0.2);
  CHECK(disturbance_torque(cfg, 5.0) == 0.2);

  cfg.kind = DisturbanceKind::Sine;
  cfg.amplitude = 1.0;
  cfg.start = 0.0;
  CHECK(disturbance_torque(cfg, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(disturbance_torque(cfg, 3.0) == doctest::Approx(-1.0).epsilon(1e-12));

  cfg.amplitude = -1.0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg.amplitude = 1.0;
  cfg.period = 0.0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("scenario validation") {
  Scenario sc = step_scenario();
  CHECK_NOTHROW(validate(sc));

  sc.control_dt = 2.5e-4;
  CHECK_THROWS_AS(validate(sc), std::invalid_argument);
  sc.control_dt = 0.5e-3;
  CHECK_THROWS_AS(validate(sc), std::invalid_argument);

  sc = step_scenario();
  sc.axes.clear();
  CHECK_THROWS_AS(validate(sc), std::invalid_argument);
  sc = step_scenario();
  sc.axes.assign(3, sc.axes[0]);
  CHECK_THROWS_AS(validate(sc), std::invalid_argument);

  sc = step_scenario();
  sc.axes.push_back(sc.axes[0]);
  sc.axis_mode = AxisMode::Sequential;
  sc.epoch = 1.00005;
  CHECK_THROWS_AS(validate(sc), std::invalid_argument);
  sc.epoch = 1.0;
  CHECK_NOTHROW(validate(sc));

  sc = step_scenario();
  sc.trace_every = 0;
  CHECK_THROWS_AS(validate(sc), std::invalid_argument);

  validate(EnergyConfig{});
  CHECK_THROWS_AS(validate(EnergyConfig{95.0, 81, 1.0, 60.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(EnergyConfig{35.0, 0, 1.0, 60.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(EnergyConfig{35.0, 81, 0.0, 60.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(EnergyConfig{35.0, 81, 1.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("resolved reaching layer and filter tau") {
  Scenario sc = step_scenario();
  CHECK(resolved_reaching_layer(sc) ==
        doctest::Approx(1.5 * 10.0 * 1e-3).epsilon(1e-12));
  sc.smc.reaching_layer = 7.0;
  CHECK(resolved_reaching_layer(sc) == 7.0);

  CHECK(resolved_filter_tau(sc) == doctest::Approx(1e-2).epsilon(1e-12));
  sc.observer.filter_tau = 0.05;
  CHECK(resolved_filter_tau(sc) == 0.05);
}

TEST_CASE("metrics on a handmade trace") {
  const std::size_t n = 1001;
  SimTrace tr;
  tr.dt = 0.01;
  tr.axes.resize(1);
  AxisTrace& ax = tr.axes[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 0.01 * static_cast<double>(i);
    tr.t.push_back(t);
    ax.q_ref.push_back(1.0);
    if (t < 3.0) {
      ax.q.push_back(1.1);
    } else {
      ax.q.push_back(i % 2 ? 1.001 : 0.999);
    }
    ax.omega.push_back(0.5);
    ax.omega_hat.push_back(i == 900 ? 0.3 : 0.5);
    ax.u.push_back(i % 2 ? 1.0 : -1.0);
  }

  MetricInputs in;
  in.step_magnitude = 1.0;
  in.h = 1.0;
  in.reaching_layer = 0.1;

  SimMetrics m = metrics(tr, 0, in);
  CHECK(m.band == 0.02);
  CHECK(m.settled);
  CHECK(m.settling_time_2pct == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(m.steady_state_error == doctest::Approx(0.001).epsilon(1e-9));
  CHECK(m.chattering_pp == doctest::Approx(0.002).epsilon(1e-9));
  CHECK(m.switching_rate == doctest::Approx(100.0).epsilon(1e-6));
  CHECK(m.rms_control == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.max_observer_error == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(std::isnan(m.reaching_violation_frac));
  CHECK(std::isnan(m.energy_gain));

  ax.s_ctrl = {2.0, 1.0};
  ax.s_dot_ctrl = {-5.0, 1.0};
  m = metrics(tr, 0, in);
  CHECK(m.reaching_violation_frac == doctest::Approx(0.5).epsilon(1e-15));

  SUBCASE("perfect tracking settles at zero") {
    for (std::size_t i = 0; i < n; ++i) ax.q[i] = ax.q_ref[i];
    const SimMetrics p = metrics(tr, 0, in);
    CHECK(p.settled);
    CHECK(p.settling_time_2pct == 0.0);
    CHECK(p.steady_state_error == 0.0);
  }
  SUBCASE("a persistent offset never settles") {
    for (std::size_t i = 0; i < n; ++i) ax.q[i] = ax.q_ref[i] + 0.1;
    const SimMetrics p = metrics(tr, 0, in);
    CHECK_FALSE(p.settled);
    CHECK(std::isinf(p.settling_time_2pct));
  }
  SUBCASE("degenerate traces throw") {
    SimTrace tiny;
    tiny.t = {0.0};
    tiny.axes.resize(1);
    CHECK_THROWS_WITH_AS(metrics(tiny, 0, in), "metrics: trace is empty",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(metrics(tr, 1, in), "metrics: axis out of range",
                         std::invalid_argument);
    SimTrace brief = tr;
    brief.t.resize(400);
    for (AxisTrace& a : brief.axes) {
      a.q.resize(400);
      a.q_ref.resize(400);
      a.omega.resize(400);
      a.omega_hat.resize(400);
      a.u.resize(400);
    }
    CHECK_THROWS_WITH_AS(metrics(brief, 0, in),
                         "metrics: trace must cover at least 5 s",
                         std::invalid_argument);
  }
}

TEST_CASE("unloaded motor at rest stays exactly at rest") {
  Scenario sc = step_scenario();
  sc.motor.C = 0.0;
  sc.axes[0].target = 0.0;
  const RunResult res = run(sc);
  REQUIRE_FALSE(res.aborted);
  REQUIRE(res.trace.t.size() == 6001);
  for (std::size_t k = 0; k < res.trace.t.size(); ++k) {
    CHECK(res.trace.axes[0].q[k] == 0.0);
    CHECK(res.trace.axes[0].omega[k] == 0.0);
    CHECK(res.trace.axes[0].u[k] == 0.0);
  }
}

TEST_CASE("holding current plus feedforward keeps the loaded motor in band") {
  Scenario sc = step_scenario();
  sc.axes[0].target = 0.0;
  const RunResult res = run(sc);
  REQUIRE_FALSE(res.aborted);
  double q_max = 0.0, w_max = 0.0;
  for (std::size_t k = 0; k < res.trace.t.size(); ++k) {
    q_max = std::max(q_max, std::abs(res.trace.axes[0].q[k]));
    w_max = std::max(w_max, std::abs(res.trace.axes[0].omega[k]));
  }
  CHECK(q_max < deg2rad(0.02));
  CHECK(w_max < 1.0);

  const SimMetrics m = metrics(res, sc);
  CHECK(m.band == doctest::Approx(deg2rad(0.02)).epsilon(1e-15));
  CHECK(m.settled);
  CHECK(m.settling_time_2pct == 0.0);
}

TEST_CASE("runs are deterministic") {
  Scenario sc = step_scenario();
  sc.disturbance.kind = DisturbanceKind::Square;
  sc.disturbance.amplitude = 0.1;
  sc.disturbance.period = 2.0;
  sc.disturbance.start = 1.0;

  const RunResult a = run(sc);
  const RunResult b = run(sc);
  REQUIRE_FALSE(a.aborted);
  std::ostringstream csv_a, csv_b;
  write_trace_csv(a.trace, csv_a);
  write_trace_csv(b.trace, csv_b);
  CHECK(csv_a.str() == csv_b.str());
  CHECK(csv_a.str().size() > 1000);
}

TEST_CASE("a zero-amplitude square wave is no disturbance at all") {
  Scenario plain = step_scenario();
  Scenario squared = step_scenario();
  squared.disturbance.kind = DisturbanceKind::Square;
  squared.disturbance.amplitude = 0.0;
  squared.disturbance.period = 2.0;

  const RunResult ra = run(plain);
  const RunResult rb = run(squared);
  REQUIRE_FALSE(ra.aborted);
  REQUIRE_FALSE(rb.aborted);
  CHECK(ra.trace.axes[0].q == rb.trace.axes[0].q);
  CHECK(ra.trace.axes[0].omega == rb.trace.axes[0].omega);
  CHECK(ra.trace.axes[0].u == rb.trace.axes[0].u);
}

TEST_CASE("sequential mode powers one axis at a time") {
  Scenario sc = step_scenario();
  sc.smc.surface.U0 = 2.0;  // keep the relay band well inside the targets
  ReferenceProfile second = sc.axes[0];
  second.target = deg2rad(-0.3);
  second.t_on = 0.1;
  sc.axes.push_back(second);
  sc.axis_mode = AxisMode::Sequential;
  sc.epoch = 1.0;

  const RunResult res = run(sc);
  REQUIRE_FALSE(res.aborted);
  const SimTrace& tr = res.trace;
  const std::size_t steps_per_epoch = 1000;

  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    const std::size_t active = (k / steps_per_epoch) % 2;
    const std::size_t parked = 1 - active;
    CHECK(tr.axes[parked].u[k] == 0.0);
    CHECK(std::isnan(tr.axes[parked].s[k]));
  }
  // the second axis is untouched through the whole first epoch
  for (std::size_t k = 0; k <= steps_per_epoch; ++k) {
    CHECK(tr.axes[1].q[k] == 0.0);
    CHECK(tr.axes[1].omega_hat[k] == 0.0);
  }
  // the first axis freezes, plant and observer alike, while parked
  for (std::size_t k = steps_per_epoch; k <= 2 * steps_per_epoch; ++k) {
    CHECK(tr.axes[0].q[k] == tr.axes[0].q[steps_per_epoch]);
    CHECK(tr.axes[0].omega_hat[k] ==
          tr.axes[0].omega_hat[steps_per_epoch]);
  }
  // only three of the six seconds drive this axis, so it is still closing
  // in on the target; it must have left zero and shrunk its error
  const double target = deg2rad(-0.3);
  CHECK(tr.axes[1].q.back() < 0.3 * target);
  CHECK(std::abs(tr.axes[1].q.back() - target) < 0.8 * std::abs(target));
}

TEST_CASE("sequential multimodel axes reset their banks on resume") {
  Scenario sc = step_scenario();
  sc.controller = ControllerKind::Smmmc;
  sc.grid.t_end = 4.0;
  ReferenceProfile second = sc.axes[0];
  second.target = deg2rad(0.2);
  sc.axes.push_back(second);
  sc.axis_mode = AxisMode::Sequential;
  sc.epoch = 0.5;

  const RunResult res = run(sc);
  REQUIRE_FALSE(res.aborted);
  const SimTrace& tr = res.trace;
  REQUIRE(tr.bank_columns == 3);
  const std::size_t steps_per_epoch = 500;

  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    const std::size_t active = (k / steps_per_epoch) % 2;
    const std::size_t parked = 1 - active;
    CHECK(std::isnan(tr.axes[parked].v_models[0][k]));
    CHECK(std::isnan(tr.axes[parked].S[k]));
    if (k + 1 == tr.t.size()) continue;  // no control update at the very end
    double wsum = 0.0;
    for (int m = 0; m < tr.bank_columns; ++m) {
      wsum += tr.axes[active].v_models[static_cast<std::size_t>(m)][k];
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::isnan(tr.axes[active].s_dot[k]));
  }
  // first control sample after a resume skips the bank advance: residues
  // are zero there, so the weights come out uniform
  for (std::size_t k : {std::size_t{0}, steps_per_epoch, 2 * steps_per_epoch,
                        3 * steps_per_epoch}) {
    const std::size_t active = (k / steps_per_epoch) % 2;
    for (int m = 0; m < tr.bank_columns; ++m) {
      CHECK(tr.axes[active].v_models[static_cast<std::size_t>(m)][k] ==
            doctest::Approx(1.0 / 3).epsilon(1e-12));
    }
  }
}

TEST_CASE("an unstable integration aborts with a diagnostic") {
  Scenario sc = step_scenario();
  sc.grid.method = Method::ExplicitEuler;
  sc.grid.dt = 0.01;  // way beyond the electrical time constant
  sc.grid.t_end = 100.0;
  // several integration steps per control update, so the divergence is not
  // re-centered by the controller before it compounds
  sc.control_dt = 0.05;

  const RunResult res = run(sc);
  REQUIRE(res.aborted);
  CHECK(res.diagnostic.find("non-finite state") != std::string::npos);
  REQUIRE_FALSE(res.trace.t.empty());
  CHECK(res.abort_time == res.trace.t.back());
  CHECK(res.abort_time < 100.0);
}

TEST_CASE("comparing a scenario against itself gives unit ratios") {
  const Scenario sc = step_scenario();
  const CompareReport rep = compare(sc, sc);
  CHECK_FALSE(rep.a_aborted);
  CHECK(rep.chattering_ratio == 1.0);
  CHECK(rep.switching_ratio == 1.0);
  CHECK(rep.settling_ratio == 1.0);
  CHECK(rep.steady_state_error_ratio == 1.0);
  CHECK(rep.a.settling_time_2pct == rep.b.settling_time_2pct);
}

TEST_CASE("incompatible scenarios are rejected by name") {
  const Scenario a = step_scenario();

  Scenario b = a;
  b.motor.R += 1.0;
  CHECK_THROWS_WITH_AS(check_comparable(a, b),
                       "scenarios not comparable: different [motor]",
                       std::invalid_argument);
  b = a;
  b.grid.t_end = 7.0;
  CHECK_THROWS_WITH_AS(
      check_comparable(a, b),
      "scenarios not comparable: different [sim] integration grid",
      std::invalid_argument);
  b = a;
  b.disturbance.amplitude = 0.1;
  CHECK_THROWS_WITH_AS(check_comparable(a, b),
                       "scenarios not comparable: different [disturbance]",
                       std::invalid_argument);
  b = a;
  b.axes[0].target *= 2.0;
  CHECK_THROWS_WITH_AS(check_comparable(a, b),
                       "scenarios not comparable: different [reference]",
                       std::invalid_argument);
  // controller and gain differences are exactly what comparisons are for
  b = a;
  b.controller = ControllerKind::Smmmc;
  CHECK_NOTHROW(check_comparable(a, b));
}
