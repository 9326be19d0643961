#include "suntrack/smo_observer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "suntrack/units.hpp"

namespace suntrack {

void validate(const ObserverConfig& cfg) {
  for (double v : {cfg.gains.I1, cfg.gains.I2, cfg.filter_tau, cfg.q_hat0,
                   cfg.omega_hat0}) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("non-finite observer parameter");
    }
  }
  if (cfg.gains.I1 <= 0.0 || cfg.gains.I2 <= 0.0) {
    throw std::invalid_argument("observer injections I1, I2 must be > 0");
  }
  if (cfg.filter_tau < 0.0) {
    throw std::invalid_argument("observer filter_tau must be >= 0");
  }
}

ObserverDerivatives observer_derivatives(const MotorParams& p,
                                         const ObserverState& s,
                                         const ObserverMeasurement& m,
                                         const ObserverGains& gains,
                                         ObserverMode mode) {
  ObserverDerivatives d;
  d.dq_hat = s.omega_hat + gains.I1 * sgn(m.q - s.q_hat);
  const double mech =
      (p.K * m.i_q - p.f_v * s.omega_hat - m.load_assumed) / p.J;
  const double inj = mode == ObserverMode::GroundTruth
                         ? sgn(m.omega - s.omega_hat)
                         : s.injection_avg;
  d.domega_hat = mech + gains.I2 * inj;
  return d;
}

SmoObserver::SmoObserver(const MotorParams& p, const ObserverConfig& cfg,
                         double filter_tau_resolved)
    : p_(p), cfg_(cfg), tau_(filter_tau_resolved) {
  suntrack::validate(p_);
  suntrack::validate(cfg_);
  if (tau_ <= 0.0) {
    throw std::invalid_argument("resolved observer filter tau must be > 0");
  }
  reset(cfg_.q_hat0, cfg_.omega_hat0);
}

void SmoObserver::reset(double q_hat0, double omega_hat0) {
  state_ = ObserverState{q_hat0, omega_hat0, 0.0};
}

void SmoObserver::step(const ObserverMeasurement& m, double dt,
                       Method method) {
  // Freeze both switching terms at their step-start values, then integrate
  // the smooth remainder.
  const double sign_q = sgn(m.q - state_.q_hat);
  const double inj_q = cfg_.gains.I1 * sign_q;
  const double inj_w = cfg_.gains.I2 * (cfg_.mode == ObserverMode::GroundTruth
                                            ? sgn(m.omega - state_.omega_hat)
                                            : state_.injection_avg);

  const auto rhs = [&](double /*t*/, const std::array<double, 2>& x) {
    return std::array<double, 2>{
        x[1] + inj_q,
        (p_.K * m.i_q - p_.f_v * x[1] - m.load_assumed) / p_.J + inj_w};
  };
  const std::array<double, 2> next =
      integrate_step<2>(rhs, {state_.q_hat, state_.omega_hat}, 0.0, dt,
                        method);
  state_.q_hat = next[0];
  state_.omega_hat = next[1];
  // exact discretization of tau * zdot = sgn(e_q) - z
  const double a = 1.0 - std::exp(-dt / tau_);
  state_.injection_avg += a * (sign_q - state_.injection_avg);
}

double convergence_bound(double e_q0, double e_omega_max, double I1) {
  if (!std::isfinite(e_q0) || !std::isfinite(e_omega_max) ||
      !std::isfinite(I1)) {
    throw std::invalid_argument("non-finite convergence bound inputs");
  }
  if (e_omega_max < 0.0) {
    throw std::invalid_argument("e_omega_max must be >= 0");
  }
  if (I1 <= e_omega_max) {
    throw std::invalid_argument(
        "convergence bound requires I1 > e_omega_max");
  }
  return std::abs(e_q0) / (I1 - e_omega_max);
}

bool gains_check(const ObserverGains& gains, double e_omega_max,
                 double load_error_max, const MotorParams& p) {
  if (e_omega_max < 0.0 || load_error_max < 0.0) {
    throw std::invalid_argument("gain check bounds must be >= 0");
  }
  return gains.I1 > e_omega_max && gains.I2 * p.J > load_error_max;
}

LyapunovReport lyapunov_check(std::span<const double> e_q,
                              std::span<const double> e_omega, double dt,
                              const MotorParams& p, const ObserverGains& g) {
  if (e_q.size() != e_omega.size()) {
    throw std::invalid_argument("error logs must have equal length");
  }
  if (e_q.size() < 2) {
    throw std::invalid_argument("need at least two samples");
  }
  if (dt <= 0.0) throw std::invalid_argument("dt must be > 0");

  const double band_q = g.I1 * dt;
  const double band_w = g.I2 * dt;

  LyapunovReport rep;
  rep.hit_index = e_q.size();
  for (std::size_t i = 0; i < e_q.size(); ++i) {
    if (std::abs(e_q[i]) <= band_q) {
      rep.hit_index = i;
      rep.position_hit = true;
      break;
    }
  }

  std::size_t v1_bad = 0, v2_bad = 0;
  const std::size_t split = rep.position_hit ? rep.hit_index : e_q.size();
  for (std::size_t i = 1; i < split; ++i) {
    if (std::abs(e_q[i - 1]) <= band_q) continue;
    ++rep.v1_checked;
    const double dv1 = 0.5 * (e_q[i] * e_q[i] - e_q[i - 1] * e_q[i - 1]);
    if (dv1 >= 0.0) ++v1_bad;
  }
  for (std::size_t i = std::max<std::size_t>(split, 1); i < e_q.size(); ++i) {
    if (std::abs(e_omega[i - 1]) <= band_w) continue;
    ++rep.v2_checked;
    const double v2a = 0.5 * (e_q[i - 1] * e_q[i - 1] +
                              p.J * e_omega[i - 1] * e_omega[i - 1]);
    const double v2b =
        0.5 * (e_q[i] * e_q[i] + p.J * e_omega[i] * e_omega[i]);
    if (v2b - v2a >= 0.0) ++v2_bad;
  }
  rep.v1_violation_fraction =
      rep.v1_checked == 0
          ? 0.0
          : static_cast<double>(v1_bad) / static_cast<double>(rep.v1_checked);
  rep.v2_violation_fraction =
      rep.v2_checked == 0
          ? 0.0
          : static_cast<double>(v2_bad) / static_cast<double>(rep.v2_checked);
  return rep;
}

}  // namespace suntrack
