#include "suntrack/smc_controller.hpp"

#include <cmath>
#include <stdexcept>

#include "suntrack/units.hpp"

namespace suntrack {

ErrorState error_state(const MotorState& s, const ReferencePoint& r) {
  return ErrorState{s.i_d - r.i_dr, s.i_q - r.i_qr, s.omega - r.omega_r,
                    s.q - r.q_r};
}

void validate(const SurfaceConfig& cfg) {
  for (double v : {cfg.mu, cfg.m1, cfg.m2, cfg.U0, cfg.h}) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("non-finite surface parameter");
    }
  }
  if (cfg.mu <= 0.0 || cfg.m1 <= 0.0 || cfg.m2 <= 0.0) {
    throw std::invalid_argument("surface slopes mu, m1, m2 must be > 0");
  }
  if (cfg.U0 <= 0.0) {
    throw std::invalid_argument("switching amplitude U0 must be > 0");
  }
  if (cfg.h < 0.0) {
    throw std::invalid_argument("reaching-rate floor h must be >= 0");
  }
}

double velocity_surface(const ErrorState& e, double e3_dot,
                        const SurfaceConfig& cfg) {
  return cfg.mu * e.e3 + e3_dot;
}

double position_surface(const ErrorState& e, double load_residual,
                        const SurfaceConfig& cfg, const MotorParams& p) {
  const double e3_dot =
      (p.K * e.e2 - p.f_v * e.e3 - load_residual) / p.J;
  return cfg.m1 * e.e4 + cfg.m2 * e.e3 + e3_dot;
}

double switching_control(double s, double U0) { return -U0 * sgn(s); }

SmcController::SmcController(const MotorParams& p, const SmcConfig& cfg)
    : p_(p), cfg_(cfg) {
  suntrack::validate(p_);
  suntrack::validate(cfg_.surface);
  if (cfg_.U0_d < 0.0 || cfg_.psi_d < 0.0 || cfg_.reaching_layer < 0.0) {
    throw std::invalid_argument("d-axis and diagnostic settings must be >= 0");
  }
}

double SmcController::e3dot_model(const MotorState& s,
                                  const ReferencePoint& r) const {
  // Model estimate of the velocity-error derivative: mechanical equation
  // with the nominal load, minus the reference acceleration. Identical to
  // (K e2 - f_v e3 - residual)/J whenever the reference is flat-consistent.
  const double domega = (p_.K * s.i_q - p_.f_v * s.omega - p_.C) / p_.J;
  return domega - r.omega_r_d;
}

double SmcController::surface(const MotorState& s,
                              const ReferencePoint& r) const {
  const ErrorState e = error_state(s, r);
  const double e3_dot = e3dot_model(s, r);
  if (cfg_.mode == SurfaceKind::Velocity) {
    return cfg_.surface.mu * e.e3 + e3_dot;
  }
  return cfg_.surface.m1 * e.e4 + cfg_.surface.m2 * e.e3 + e3_dot;
}

namespace {

/// gamma/beta split of sdot for either surface
SmcController::SdotAffine sdot_affine_impl(const MotorParams& p,
                                           const MotorState& s,
                                           const ReferencePoint& r,
                                           const SurfaceConfig& cfg,
                                           SurfaceKind kind) {
  const double coupling = p.paper_literal_signs ? 1.0 : -1.0;
  const ErrorState e = error_state(s, r);

  const double domega = (p.K * s.i_q - p.f_v * s.omega - p.C) / p.J;
  const double e3_dot = domega - r.omega_r_d;
  // q-current model derivative without the v_q/L term
  const double diq_drift =
      (-p.R * s.i_q + coupling * p.N * p.L * s.omega * s.i_d -
       p.K * s.omega) /
      p.L;
  const double e3_ddot_drift =
      (p.K * diq_drift - p.f_v * domega) / p.J - r.omega_r_dd;

  SmcController::SdotAffine out;
  out.beta = p.K / (p.J * p.L);
  if (kind == SurfaceKind::Velocity) {
    out.gamma = cfg.mu * e3_dot + e3_ddot_drift;
  } else {
    out.gamma = cfg.m1 * e.e3 + cfg.m2 * e3_dot + e3_ddot_drift;
  }
  return out;
}

}  // namespace

SmcController::SdotAffine SmcController::sdot_affine(
    const MotorState& s, const ReferencePoint& r) const {
  return sdot_affine_impl(p_, s, r, cfg_.surface, cfg_.mode);
}

double SmcController::equivalent_control(const MotorState& s,
                                         const ReferencePoint& r) const {
  const SdotAffine a = sdot_affine(s, r);
  return -a.gamma / a.beta;
}

double SmcController::sdot_at(const MotorState& s, const ReferencePoint& r,
                              double v_q) const {
  const SdotAffine a = sdot_affine(s, r);
  return a.gamma + a.beta * v_q;
}

ControlOutput SmcController::step(const MotorState& s,
                                  const ReferencePoint& r) const {
  const SdotAffine a = sdot_affine(s, r);
  ControlOutput out;
  out.s = surface(s, r);
  out.u_eq = -a.gamma / a.beta;
  // the switching term commands the surface rate; dividing by the input
  // gain turns sdot = gamma + beta*v_q into sdot = -U0*sgn(s) exactly
  out.u_sw = switching_control(out.s, cfg_.surface.U0) / a.beta;
  out.v_q = out.u_eq + out.u_sw;
  out.s_dot = a.gamma + a.beta * out.v_q;
  out.v_d = d_axis_control(p_, s, r, cfg_.U0_d, cfg_.psi_d);
  return out;
}

double d_axis_control(const MotorParams& p, const MotorState& s,
                      const ReferencePoint& r, double U0_d, double psi_d) {
  // v_d holding di_d = 0: cancels the resistive drop and the speed coupling
  const double u_eq = p.R * s.i_d - p.N * p.L * s.omega * s.i_q;
  const double e1 = s.i_d - r.i_dr;
  const double sw =
      psi_d > 0.0 ? -U0_d * sat(e1 / psi_d) : -U0_d * sgn(e1);
  return u_eq + sw;
}

ReachingReport reaching_diagnostic(std::span<const double> s,
                                   std::span<const double> s_dot, double h,
                                   double boundary_layer) {
  if (s.size() != s_dot.size()) {
    throw std::invalid_argument("s and s_dot logs must have equal length");
  }
  if (h < 0.0 || boundary_layer < 0.0) {
    throw std::invalid_argument("h and boundary_layer must be >= 0");
  }
  ReachingReport rep;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::abs(s[i]) <= boundary_layer) continue;
    ++rep.checked;
    if (s[i] * s_dot[i] > -h * std::abs(s[i])) ++rep.violations;
  }
  rep.violation_fraction =
      rep.checked == 0 ? 0.0
                       : static_cast<double>(rep.violations) /
                             static_cast<double>(rep.checked);
  return rep;
}

}  // namespace suntrack
