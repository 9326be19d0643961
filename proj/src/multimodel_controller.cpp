#include "suntrack/multimodel_controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "suntrack/units.hpp"

namespace suntrack {

ModelBank build_bank(const MotorParams& p, std::vector<double> anchors) {
  validate(p);
  if (anchors.empty()) throw std::invalid_argument("model bank needs at least one anchor");
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (!std::isfinite(anchors[i]))
      throw std::invalid_argument("model anchor must be finite");
    if (i > 0 && !(anchors[i] > anchors[i - 1]))
      throw std::invalid_argument("model anchors must be strictly increasing");
  }
  ModelBank bank;
  bank.params = p;
  bank.anchors = std::move(anchors);
  bank.models.reserve(bank.anchors.size());
  for (double w : bank.anchors) bank.models.push_back(state_space(p, w, p.C));
  return bank;
}

std::vector<double> residues(double y_measured, const std::vector<double>& y_models) {
  std::vector<double> r;
  r.reserve(y_models.size());
  for (double y : y_models) r.push_back(std::abs(y_measured - y));
  return r;
}

ValiditySet validities(const std::vector<double>& res, bool reinforce) {
  const std::size_t n = res.size();
  if (n == 0) throw std::invalid_argument("validities: empty residue vector");
  for (double r : res) {
    if (!std::isfinite(r) || r < 0.0)
      throw std::invalid_argument("validities: residues must be finite and non-negative");
  }

  ValiditySet vs;
  vs.normalized_residues.assign(n, 0.0);
  vs.plain.assign(n, 1.0);
  vs.reinforced.assign(n, 0.0);
  vs.weights.assign(n, 1.0 / static_cast<double>(n));

  double sum = 0.0;
  for (double r : res) sum += r;
  if (sum <= 0.0) {
    // No model disagrees with the measurement: keep uniform weights.
    vs.reinforced = vs.weights;
    return vs;
  }

  for (std::size_t i = 0; i < n; ++i) {
    vs.normalized_residues[i] = res[i] / sum;
    vs.plain[i] = 1.0 - vs.normalized_residues[i];
  }

  for (std::size_t i = 0; i < n; ++i) {
    double prod = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) prod *= 1.0 - vs.plain[j];
    }
    vs.reinforced[i] = vs.plain[i] * prod;
  }

  const std::vector<double>& pick = reinforce ? vs.reinforced : vs.plain;
  double wsum = 0.0;
  for (double v : pick) wsum += v;
  if (wsum > 0.0) {
    for (std::size_t i = 0; i < n; ++i) vs.weights[i] = pick[i] / wsum;
    return vs;
  }

  // Reinforcement can cancel completely (for n = 1, or exact residue ties
  // where every 1 - v_j factor vanishes). Fall back to splitting the weight
  // over the minimum-residue models.
  const double rmin = *std::min_element(res.begin(), res.end());
  std::size_t hits = 0;
  for (double r : res) {
    if (r == rmin) ++hits;
  }
  for (std::size_t i = 0; i < n; ++i)
    vs.weights[i] = (res[i] == rmin) ? 1.0 / static_cast<double>(hits) : 0.0;
  return vs;
}

SurfaceSample pid_surface(double err, double err_rate, double err_acc,
                          PidSurfaceState& state, const PidGains& gains,
                          double dt, bool freeze_integral) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("pid_surface: dt must be positive and finite");
  if (state.primed && !freeze_integral)
    state.integral += 0.5 * dt * (state.prev_err + err);
  state.prev_err = err;
  state.primed = true;

  SurfaceSample out;
  out.s = gains.a * err + gains.b * err_rate + gains.g * state.integral;
  out.s_dot = gains.a * err_rate + gains.b * err_acc + gains.g * err;
  return out;
}

double saturated_switching(double s, const SwitchingGains& gains) {
  const double u = gains.I * sat(s / gains.psi);
  return std::clamp(u, gains.u_min, gains.u_max);
}

double equivalent_control_frozen(const MotorParams& p, const MotorState& s,
                                 const ReferencePoint& r,
                                 const PidGains& gains, double anchor) {
  const double err = r.q_r - s.q;
  const double err_rate = r.omega_r - s.omega;
  // s_dot = a*err_rate + b*err_acc + g*err = 0 picks the acceleration the
  // sub-model must produce; the quasi-static current that yields it fixes
  // the voltage.
  const double domega_des =
      r.omega_r_d + (gains.a * err_rate + gains.g * err) / gains.b;
  const double coupling = p.paper_literal_signs ? 1.0 : -1.0;
  return p.K * s.omega - coupling * p.N * p.L * anchor * s.i_d +
         (p.R / p.K) * (p.J * domega_des + p.f_v * s.omega + p.C);
}

FusedControl fuse(const std::vector<double>& u, const std::vector<double>& s,
                  const std::vector<double>& weights) {
  if (u.size() != weights.size() || s.size() != weights.size())
    throw std::invalid_argument("fuse: size mismatch");
  FusedControl f;
  for (std::size_t i = 0; i < u.size(); ++i) {
    f.u_g += weights[i] * u[i];
    f.S += weights[i] * s[i];
  }
  return f;
}

SmmmcConfig default_smmmc_config() {
  SmmmcConfig cfg;
  cfg.anchors = {0.0, deg2rad(100.0), deg2rad(200.0)};
  cfg.pid = {PidGains{}};
  cfg.sw = {SwitchingGains{}};
  return cfg;
}

void validate(const SmmmcConfig& cfg) {
  if (cfg.anchors.empty())
    throw std::invalid_argument("smmmc config: anchors must not be empty");
  const std::size_t n = cfg.anchors.size();
  auto check_count = [n](std::size_t got, const char* what) {
    if (got != 1 && got != n)
      throw std::invalid_argument(std::string("smmmc config: ") + what +
                                  " must have 1 entry or one per model");
  };
  check_count(cfg.pid.size(), "pid gains");
  check_count(cfg.sw.size(), "switching gains");
  for (const PidGains& g : cfg.pid) {
    if (!(g.a > 0.0) || !(g.b > 0.0) || !(g.g > 0.0) ||
        !std::isfinite(g.a) || !std::isfinite(g.b) || !std::isfinite(g.g))
      throw std::invalid_argument("smmmc config: pid gains must be finite and positive");
  }
  for (const SwitchingGains& g : cfg.sw) {
    if (!(g.I > 0.0) || !(g.psi > 0.0) || !std::isfinite(g.I) || !std::isfinite(g.psi))
      throw std::invalid_argument("smmmc config: switching gains need I > 0 and psi > 0");
    if (!(g.u_min < g.u_max))
      throw std::invalid_argument("smmmc config: u_min must be below u_max");
  }
  if (!(cfg.reset_horizon > 0.0) || !std::isfinite(cfg.reset_horizon))
    throw std::invalid_argument("smmmc config: reset_horizon must be positive");
  if (!(cfg.U0_d > 0.0) || cfg.psi_d < 0.0)
    throw std::invalid_argument("smmmc config: U0_d must be positive, psi_d >= 0");
}

namespace {

template <class T>
const T& pick_gain(const std::vector<T>& v, std::size_t i) {
  return v.size() == 1 ? v[0] : v[i];
}

}  // namespace

SmmmcController::SmmmcController(const MotorParams& p, const SmmmcConfig& cfg,
                                 double control_dt, double bank_dt, Method method)
    : p_(p), cfg_(cfg), control_dt_(control_dt), bank_dt_(bank_dt), method_(method) {
  validate(cfg_);
  if (!(control_dt_ > 0.0) || !(bank_dt_ > 0.0) || bank_dt_ > control_dt_ * (1.0 + 1e-12))
    throw std::invalid_argument("smmmc controller: need 0 < bank_dt <= control_dt");
  bank_ = build_bank(p_, cfg_.anchors);
  predictions_.assign(bank_.models.size(), Vec4{});
  pid_states_.assign(bank_.models.size(), PidSurfaceState{});
}

void SmmmcController::reset(const MotorState& feedback) {
  const Vec4 x = to_vec4(feedback);
  for (Vec4& pred : predictions_) pred = x;
  since_reset_ = 0.0;
  primed_ = true;
  pending_skip_ = true;
}

SmmmcController::StepResult SmmmcController::step(const MotorState& feedback,
                                                  const ReferencePoint& ref,
                                                  const DqInput& prev_applied,
                                                  bool prev_clamped) {
  if (!primed_) reset(feedback);
  if (pending_skip_) {
    pending_skip_ = false;
  } else {
    // Advance every sub-model under the input the plant actually saw.
    const std::size_t substeps = static_cast<std::size_t>(
        std::llround(control_dt_ / bank_dt_));
    const std::size_t steps = std::max<std::size_t>(substeps, 1);
    const double h = control_dt_ / static_cast<double>(steps);
    for (std::size_t m = 0; m < bank_.models.size(); ++m) {
      const StateSpace& ss = bank_.models[m];
      auto rhs = [&ss, &prev_applied](double, const Vec4& x) {
        return ss.apply(x, prev_applied);
      };
      double t = 0.0;
      for (std::size_t k = 0; k < steps; ++k) {
        predictions_[m] = integrate_step<4>(rhs, predictions_[m], t, h, method_);
        t += h;
      }
    }
    since_reset_ += control_dt_;
  }

  const std::size_t n = bank_.models.size();
  std::vector<double> y(n);
  for (std::size_t m = 0; m < n; ++m) y[m] = predictions_[m][3];  // velocity output
  const std::vector<double> r = residues(feedback.omega, y);
  const ValiditySet vs = validities(r, !cfg_.plain_validities);

  // Predictions are "anchor advanced under the recorded inputs"; once the
  // horizon elapses, re-anchor on the measurement (after the residues above
  // were taken) so frozen-model drift stays bounded. The next step advances
  // from this anchor under the input applied over its interval, so no skip.
  if (since_reset_ >= cfg_.reset_horizon - 1e-12) {
    const Vec4 x = to_vec4(feedback);
    for (Vec4& pred : predictions_) pred = x;
    since_reset_ = 0.0;
  }

  // Per-model surfaces share the measured tracking error; gains may differ.
  const double err = ref.q_r - feedback.q;
  const double err_rate = ref.omega_r - feedback.omega;
  const double domega =
      (p_.K * feedback.i_q - p_.f_v * feedback.omega - p_.C) / p_.J;
  const double err_acc = ref.omega_r_d - domega;

  std::vector<double> s(n), u(n);
  double u_eq_fused = 0.0;
  double u_sw_fused = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const PidGains& pg = pick_gain(cfg_.pid, m);
    const SwitchingGains& sg = pick_gain(cfg_.sw, m);
    const SurfaceSample samp = pid_surface(err, err_rate, err_acc,
                                           pid_states_[m], pg, control_dt_,
                                           prev_clamped);
    s[m] = samp.s;
    const double u_ei = equivalent_control_frozen(p_, feedback, ref, pg,
                                                  bank_.anchors[m]);
    const double u_si = saturated_switching(samp.s, sg);
    u[m] = u_ei + u_si;
    u_eq_fused += vs.weights[m] * u_ei;
    u_sw_fused += vs.weights[m] * u_si;
  }

  const FusedControl fc = fuse(u, s, vs.weights);

  StepResult res;
  res.surfaces = std::move(s);
  res.weights = vs.weights;
  res.out.v_q = fc.u_g;
  res.out.v_d = d_axis_control(p_, feedback, ref, cfg_.U0_d, cfg_.psi_d);
  res.out.s = fc.S;
  res.out.u_eq = u_eq_fused;
  res.out.u_sw = u_sw_fused;
  res.out.s_dot = 0.0;
  return res;
}

}  // namespace suntrack
