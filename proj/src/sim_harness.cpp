#include "suntrack/sim_harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "suntrack/units.hpp"

namespace suntrack {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
/// per-model column count reserved in the CSV when the run is not multimodel
constexpr int kDefaultBankColumns = 3;

bool integer_multiple(double big, double small) {
  if (!(small > 0.0) || !(big > 0.0)) return false;
  const double q = big / small;
  return std::abs(q - std::round(q)) <= 1e-9 * std::max(1.0, q);
}

double guarded_ratio(double num, double den) {
  if (num == den) return 1.0;
  if (den == 0.0) return kInf;
  return num / den;
}

}  // namespace

void validate(const DisturbanceConfig& cfg) {
  if (!std::isfinite(cfg.amplitude) || cfg.amplitude < 0.0) {
    throw std::invalid_argument("disturbance amplitude must be finite and >= 0");
  }
  if (!std::isfinite(cfg.start) || cfg.start < 0.0) {
    throw std::invalid_argument("disturbance start must be finite and >= 0");
  }
  if (cfg.kind == DisturbanceKind::Square ||
      cfg.kind == DisturbanceKind::Sine) {
    if (!std::isfinite(cfg.period) || cfg.period <= 0.0) {
      throw std::invalid_argument("disturbance period must be > 0");
    }
  }
}

double disturbance_torque(const DisturbanceConfig& cfg, double t) {
  if (cfg.kind == DisturbanceKind::None || t < cfg.start) return 0.0;
  switch (cfg.kind) {
    case DisturbanceKind::Step:
      return cfg.amplitude;
    case DisturbanceKind::Square: {
      const double phase = std::fmod(t - cfg.start, cfg.period);
      return phase < 0.5 * cfg.period ? cfg.amplitude : -cfg.amplitude;
    }
    case DisturbanceKind::Sine:
      return cfg.amplitude * std::sin(2.0 * kPi * (t - cfg.start) / cfg.period);
    case DisturbanceKind::None:
      break;
  }
  return 0.0;
}

void validate(const Scenario& sc) {
  validate(sc.motor);
  validate(sc.grid);
  if (sc.axes.empty() || sc.axes.size() > 2) {
    throw std::invalid_argument("scenario needs one or two reference axes");
  }
  for (const ReferenceProfile& prof : sc.axes) validate(prof);
  if (!std::isfinite(sc.control_dt) || sc.control_dt < sc.grid.dt ||
      !integer_multiple(sc.control_dt, sc.grid.dt)) {
    throw std::invalid_argument(
        "control_dt must be a whole multiple of the integration dt");
  }
  if (sc.trace_every < 1) {
    throw std::invalid_argument("trace_every must be >= 1");
  }
  if (sc.axis_mode == AxisMode::Sequential && sc.axes.size() > 1) {
    if (!std::isfinite(sc.epoch) || !integer_multiple(sc.epoch, sc.grid.dt)) {
      throw std::invalid_argument(
          "sequential epoch must be a whole multiple of the integration dt");
    }
  }
  if (sc.controller == ControllerKind::Smc) {
    validate(sc.smc.surface);
    if (sc.smc.U0_d < 0.0 || sc.smc.psi_d < 0.0 || sc.smc.reaching_layer < 0.0) {
      throw std::invalid_argument(
          "smc U0_d, psi_d and reaching_layer must be >= 0");
    }
  } else {
    validate(sc.smmmc);
  }
  validate(sc.observer);
  validate(sc.disturbance);
  if (sc.energy) validate(*sc.energy);
}

void validate(const EnergyConfig& cfg) {
  if (!std::isfinite(cfg.latitude_deg) || std::abs(cfg.latitude_deg) > 90.0) {
    throw std::invalid_argument("energy latitude must be in [-90, 90]");
  }
  if (cfg.day_of_year < 1 || cfg.day_of_year > 366) {
    throw std::invalid_argument("energy day_of_year must be in [1, 366]");
  }
  if (!(cfg.p_max > 0.0) || !(cfg.dt_seconds > 0.0)) {
    throw std::invalid_argument("energy p_max and dt must be > 0");
  }
}

double resolved_reaching_layer(const Scenario& sc) {
  if (sc.smc.reaching_layer > 0.0) return sc.smc.reaching_layer;
  // one-period surface excursion at the commanded reaching rate, with
  // headroom for the hold error
  return 1.5 * sc.smc.surface.U0 * sc.control_dt;
}

double resolved_filter_tau(const Scenario& sc) {
  return sc.observer.filter_tau > 0.0 ? sc.observer.filter_tau
                                      : 10.0 * sc.grid.dt;
}

RunResult run(const Scenario& sc) {
  validate(sc);

  const double dt = sc.grid.dt;
  const std::size_t n_steps = step_count(sc.grid);
  const std::size_t steps_per_control =
      static_cast<std::size_t>(std::llround(sc.control_dt / dt));
  const std::size_t n_axes = sc.axes.size();
  const bool sequential = sc.axis_mode == AxisMode::Sequential && n_axes > 1;
  const std::size_t steps_per_epoch =
      sequential ? static_cast<std::size_t>(std::llround(sc.epoch / dt)) : 0;
  const double tau = resolved_filter_tau(sc);
  const bool multimodel = sc.controller == ControllerKind::Smmmc;

  struct AxisRuntime {
    MotorState plant;
    std::optional<SmoObserver> obs;
    std::optional<SmcController> smc;
    std::optional<SmmmcController> mm;
    DqInput held;
    bool held_clamped = false;
    bool live = false;  ///< had a control update at the last sample boundary
    ControlOutput out;
    std::vector<double> mdl_s, mdl_v;
  };
  std::vector<AxisRuntime> rt(n_axes);
  for (AxisRuntime& ar : rt) {
    if (sc.start_at_holding_current) ar.plant.i_q = sc.motor.C / sc.motor.K;
    ar.obs.emplace(sc.motor, sc.observer, tau);
    if (multimodel) {
      ar.mm.emplace(sc.motor, sc.smmmc, sc.control_dt, dt, sc.grid.method);
    } else {
      ar.smc.emplace(sc.motor, sc.smc);
    }
  }

  RunResult result;
  SimTrace& tr = result.trace;
  tr.dt = dt;
  tr.control_dt = sc.control_dt;
  tr.trace_every = sc.trace_every;
  tr.bank_columns = multimodel ? static_cast<int>(sc.smmmc.anchors.size())
                               : kDefaultBankColumns;
  tr.t.reserve(n_steps + 1);
  tr.axes.resize(n_axes);
  for (AxisTrace& ax : tr.axes) {
    for (std::vector<double>* v :
         {&ax.q, &ax.omega, &ax.q_hat, &ax.omega_hat, &ax.q_ref, &ax.omega_ref,
          &ax.i_d, &ax.i_q, &ax.u, &ax.s, &ax.s_dot, &ax.S, &ax.dist}) {
      v->reserve(n_steps + 1);
    }
    ax.clamped.reserve(n_steps + 1);
    ax.s_models.resize(static_cast<std::size_t>(tr.bank_columns));
    ax.v_models.resize(static_cast<std::size_t>(tr.bank_columns));
    if (multimodel) {
      for (auto& v : ax.s_models) v.reserve(n_steps + 1);
      for (auto& v : ax.v_models) v.reserve(n_steps + 1);
    }
  }

  try {
    for (std::size_t k = 0; k <= n_steps; ++k) {
      const double t = static_cast<double>(k) * dt;
      const std::size_t active =
          sequential ? (k / steps_per_epoch) % n_axes : n_axes;

      if (sequential) {
        for (std::size_t a = 0; a < n_axes; ++a) {
          if (active == a) continue;
          rt[a].held = DqInput{};
          rt[a].held_clamped = false;
          rt[a].live = false;
        }
      }

      if (k < n_steps && k % steps_per_control == 0) {
        for (std::size_t a = 0; a < n_axes; ++a) {
          if (sequential && active != a) continue;
          AxisRuntime& ar = rt[a];
          const ReferencePoint ref = sample(sc.axes[a], t, sc.motor);
          // Feedback: measured position and currents always; velocity from
          // the observer when running sensorless, from the shaft otherwise.
          const double omega_fb = sc.observer.mode == ObserverMode::Sensorless
                                      ? ar.obs->state().omega_hat
                                      : ar.plant.omega;
          const MotorState fb{ar.plant.i_d, ar.plant.i_q, omega_fb,
                              ar.plant.q};
          ControlOutput out;
          if (multimodel) {
            if (!ar.live) ar.mm->reset(fb);
            SmmmcController::StepResult res =
                ar.mm->step(fb, ref, ar.held, ar.held_clamped);
            out = res.out;
            ar.mdl_s = std::move(res.surfaces);
            ar.mdl_v = std::move(res.weights);
          } else {
            out = ar.smc->step(fb, ref);
          }
          const double vd =
              std::clamp(out.v_d, -sc.motor.V_max, sc.motor.V_max);
          const double vq =
              std::clamp(out.v_q, -sc.motor.V_max, sc.motor.V_max);
          ar.held_clamped = vd != out.v_d || vq != out.v_q;
          ar.held = DqInput{vd, vq};
          if (!multimodel) {
            // log the surface rate at the voltage the plant will receive
            out.s_dot = ar.smc->sdot_at(fb, ref, vq);
            tr.axes[a].s_ctrl.push_back(out.s);
            tr.axes[a].s_dot_ctrl.push_back(out.s_dot);
          }
          ar.out = out;
          ar.live = true;
        }
      }

      const double dist = disturbance_torque(sc.disturbance, t);

      tr.t.push_back(t);
      for (std::size_t a = 0; a < n_axes; ++a) {
        const AxisRuntime& ar = rt[a];
        AxisTrace& ax = tr.axes[a];
        const ReferencePoint ref = sample(sc.axes[a], t, sc.motor);
        ax.q.push_back(ar.plant.q);
        ax.omega.push_back(ar.plant.omega);
        ax.q_hat.push_back(ar.obs->state().q_hat);
        ax.omega_hat.push_back(ar.obs->state().omega_hat);
        ax.q_ref.push_back(ref.q_r);
        ax.omega_ref.push_back(ref.omega_r);
        ax.i_d.push_back(ar.plant.i_d);
        ax.i_q.push_back(ar.plant.i_q);
        ax.u.push_back(ar.held.v_q);
        ax.s.push_back(ar.live ? ar.out.s : kNan);
        ax.s_dot.push_back(!multimodel && ar.live ? ar.out.s_dot : kNan);
        ax.S.push_back(multimodel && ar.live ? ar.out.s : kNan);
        if (multimodel) {
          for (std::size_t m = 0; m < ax.s_models.size(); ++m) {
            ax.s_models[m].push_back(ar.live ? ar.mdl_s[m] : kNan);
            ax.v_models[m].push_back(ar.live ? ar.mdl_v[m] : kNan);
          }
        }
        ax.dist.push_back(dist);
        ax.clamped.push_back(ar.held_clamped ? 1 : 0);
      }
      if (k == n_steps) break;

      for (std::size_t a = 0; a < n_axes; ++a) {
        if (sequential && active != a) continue;  // parked axis is inert
        AxisRuntime& ar = rt[a];
        const ObserverMeasurement meas{ar.plant.q, ar.plant.i_q, sc.motor.C,
                                       ar.plant.omega};
        ar.obs->step(meas, dt, sc.grid.method);
        const double load = sc.motor.C + dist;
        const DqInput held = ar.held;
        const auto rhs = [&](double, const Vec4& x) {
          const StateDerivative d =
              derivatives(sc.motor, from_vec4(x), held, load);
          return Vec4{d.di_d, d.di_q, d.dq, d.domega};
        };
        ar.plant =
            from_vec4(integrate_step<4>(rhs, to_vec4(ar.plant), t, dt,
                                        sc.grid.method));
      }
    }
  } catch (const std::exception& e) {
    result.aborted = true;
    result.abort_time = tr.t.empty() ? 0.0 : tr.t.back();
    result.diagnostic = e.what();
  }
  return result;
}

SimMetrics metrics(const SimTrace& trace, std::size_t axis,
                   const MetricInputs& in) {
  if (trace.t.size() < 2) {
    throw std::invalid_argument("metrics: trace is empty");
  }
  if (axis >= trace.axes.size()) {
    throw std::invalid_argument("metrics: axis out of range");
  }
  const double span = trace.t.back() - trace.t.front();
  if (span < 5.0) {
    throw std::invalid_argument("metrics: trace must cover at least 5 s");
  }
  const AxisTrace& ax = trace.axes[axis];
  const std::size_t n = trace.t.size();

  SimMetrics m;
  m.band = std::max(deg2rad(0.02), 0.02 * std::abs(in.step_magnitude));

  bool any_outside = false;
  std::size_t last_outside = 0;
  for (std::size_t i = n; i-- > 0;) {
    if (std::abs(ax.q[i] - ax.q_ref[i]) > m.band) {
      any_outside = true;
      last_outside = i;
      break;
    }
  }
  if (!any_outside) {
    m.settled = true;
    m.settling_time_2pct = 0.0;
  } else if (last_outside + 1 >= n) {
    m.settled = false;
    m.settling_time_2pct = kInf;
  } else {
    m.settled = true;
    m.settling_time_2pct = trace.t[last_outside + 1];
  }

  const double window_start = trace.t.front() + 0.8 * span;
  const std::size_t i0 =
      static_cast<std::size_t>(std::lower_bound(trace.t.begin(), trace.t.end(),
                                                window_start) -
                               trace.t.begin());

  double err_sum = 0.0;
  double q_min = kInf, q_max = -kInf;
  double obs_err = 0.0;
  for (std::size_t i = i0; i < n; ++i) {
    err_sum += std::abs(ax.q[i] - ax.q_ref[i]);
    q_min = std::min(q_min, ax.q[i]);
    q_max = std::max(q_max, ax.q[i]);
    obs_err = std::max(obs_err, std::abs(ax.omega[i] - ax.omega_hat[i]));
  }
  const std::size_t window_count = n - i0;
  m.steady_state_error = err_sum / static_cast<double>(window_count);
  m.chattering_pp = q_max - q_min;
  m.max_observer_error = obs_err;

  // commutation count: sign changes of the control increment, so a relay
  // dithering about a nonzero working point still registers while a smooth
  // command does not. Increments below the floor are treated as "held".
  double u_scale = 1.0;
  for (std::size_t i = i0; i < n; ++i)
    u_scale = std::max(u_scale, std::abs(ax.u[i]));
  const double du_floor = 1e-9 * u_scale;
  std::size_t changes = 0;
  double last_sign = 0.0;
  for (std::size_t i = i0 > 0 ? i0 : 1; i < n; ++i) {
    const double du = ax.u[i] - ax.u[i - 1];
    if (std::abs(du) <= du_floor) continue;
    const double sg = sgn(du);
    if (last_sign != 0.0 && sg != last_sign) ++changes;
    last_sign = sg;
  }
  const double window_span = trace.t.back() - trace.t[i0];
  m.switching_rate =
      window_span > 0.0 ? static_cast<double>(changes) / window_span : 0.0;

  double acc = 0.0;
  for (double u : ax.u) acc += u * u;
  m.rms_control = std::sqrt(acc / static_cast<double>(n));

  if (!ax.s_ctrl.empty()) {
    m.reaching_violation_frac =
        reaching_diagnostic(ax.s_ctrl, ax.s_dot_ctrl, in.h, in.reaching_layer)
            .violation_fraction;
  } else {
    m.reaching_violation_frac = kNan;
  }

  if (in.energy) {
    m.energy_gain = daily_energy(in.energy->latitude_deg,
                                 in.energy->day_of_year, in.energy->p_max,
                                 in.energy->dt_seconds)
                        .gain();
  } else {
    m.energy_gain = kNan;
  }
  return m;
}

SimMetrics metrics(const RunResult& result, const Scenario& sc,
                   std::size_t axis) {
  MetricInputs in;
  const ReferenceProfile& prof = sc.axes.at(axis);
  if (prof.kind == ProfileKind::Step) {
    in.step_magnitude = std::abs(prof.target);
  } else {
    double peak = 0.0;
    for (double v : result.trace.axes.at(axis).q_ref) {
      peak = std::max(peak, std::abs(v));
    }
    in.step_magnitude = peak;
  }
  in.h = sc.smc.surface.h;
  in.reaching_layer = resolved_reaching_layer(sc);
  in.energy = sc.energy;
  return metrics(result.trace, axis, in);
}

void check_comparable(const Scenario& a, const Scenario& b) {
  if (!(a.motor == b.motor)) {
    throw std::invalid_argument("scenarios not comparable: different [motor]");
  }
  if (!(a.grid == b.grid)) {
    throw std::invalid_argument(
        "scenarios not comparable: different [sim] integration grid");
  }
  if (a.axes != b.axes) {
    throw std::invalid_argument(
        "scenarios not comparable: different [reference]");
  }
  if (!(a.disturbance == b.disturbance)) {
    throw std::invalid_argument(
        "scenarios not comparable: different [disturbance]");
  }
  if (a.axis_mode != b.axis_mode ||
      (a.axis_mode == AxisMode::Sequential && a.epoch != b.epoch)) {
    throw std::invalid_argument(
        "scenarios not comparable: different axis scheduling");
  }
}

CompareReport compare(const Scenario& a, const Scenario& b,
                      std::size_t axis) {
  check_comparable(a, b);
  return compare(run(a), a, run(b), b, axis);
}

CompareReport compare(const RunResult& ra, const Scenario& a,
                      const RunResult& rb, const Scenario& b,
                      std::size_t axis) {
  check_comparable(a, b);
  CompareReport rep;
  rep.a = metrics(ra, a, axis);
  rep.b = metrics(rb, b, axis);
  rep.a_aborted = ra.aborted;
  rep.b_aborted = rb.aborted;
  rep.chattering_ratio = guarded_ratio(rep.a.chattering_pp, rep.b.chattering_pp);
  rep.switching_ratio = guarded_ratio(rep.a.switching_rate, rep.b.switching_rate);
  rep.settling_ratio =
      guarded_ratio(rep.a.settling_time_2pct, rep.b.settling_time_2pct);
  rep.steady_state_error_ratio =
      guarded_ratio(rep.a.steady_state_error, rep.b.steady_state_error);
  return rep;
}

}  // namespace suntrack
