#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "suntrack/motor_plant.hpp"
#include "suntrack/sun_reference.hpp"

namespace suntrack {

/// Tracking errors in the order (current d, current q, velocity, position).
struct ErrorState {
  double e1 = 0.0;  ///< i_d - i_dr, A
  double e2 = 0.0;  ///< i_q - i_qr, A
  double e3 = 0.0;  ///< omega - omega_r, rad/s
  double e4 = 0.0;  ///< q - q_r, rad
};

ErrorState error_state(const MotorState& s, const ReferencePoint& r);

enum class SurfaceKind { Velocity, Position };

struct SurfaceConfig {
  double mu = 0.135;  ///< velocity surface slope
  double m1 = 1.2;    ///< position surface stiffness
  double m2 = 0.355;  ///< position surface damping
  /// reaching rate commanded by the switching term: sdot = -U0*sgn(s).
  /// The controller scales it by the surface input gain, so the voltage
  /// ripple it adds is U0/beta with beta = K/(J*L).
  double U0 = 10.0;
  double h = 1.0;  ///< reaching-rate floor in s*sdot <= -h|s|

  bool operator==(const SurfaceConfig&) const = default;
};

void validate(const SurfaceConfig& cfg);

/// s_omega = mu*e3 + e3dot. The caller supplies the model value of e3dot.
double velocity_surface(const ErrorState& e, double e3_dot,
                        const SurfaceConfig& cfg);

/// Combined position surface with the velocity-error derivative expanded
/// through the mechanical model:
///   s_q = m1*e4 + m2*e3 + (K*e2 - f_v*e3 - load_residual)/J.
/// `load_residual` is the part of the true load the reference feedforward
/// does not carry; it is zero when the feedforward anticipates the full
/// nominal load.
double position_surface(const ErrorState& e, double load_residual,
                        const SurfaceConfig& cfg, const MotorParams& p);

/// Pure switching term -U0 * sgn(s) with sgn(0) = 0, expressed as the
/// commanded surface rate.
double switching_control(double s, double U0);

struct SmcConfig {
  SurfaceConfig surface;
  SurfaceKind mode = SurfaceKind::Position;
  double U0_d = 0.5;   ///< d-axis switching amplitude, V
  double psi_d = 0.0;  ///< d-axis boundary layer; 0 keeps pure switching
  /// |s| band treated as "on the surface" by the reaching diagnostic;
  /// 0 lets the harness derive it from U0 and the control period.
  double reaching_layer = 0.0;

  bool operator==(const SmcConfig&) const = default;
};

struct ControlOutput {
  double v_d = 0.0;
  double v_q = 0.0;
  double u_eq = 0.0;  ///< model part of v_q
  double u_sw = 0.0;  ///< switching part of v_q (v_q = u_eq + u_sw)
  double s = 0.0;     ///< active surface value
  double s_dot = 0.0; ///< surface rate at the returned (unclamped) v_q
};

/// Second-order sliding controller: drives the selected surface and its rate
/// to zero with u = u_eq + u_sw. Stateless; every step is computed from the
/// fed-back state (use the observer velocity for sensorless operation) and
/// the reference sample.
class SmcController {
 public:
  SmcController(const MotorParams& p, const SmcConfig& cfg);

  double surface(const MotorState& s, const ReferencePoint& r) const;

  /// sdot = gamma + beta * v_q along the model dynamics; beta = K/(J*L).
  struct SdotAffine {
    double gamma = 0.0;
    double beta = 0.0;
  };
  SdotAffine sdot_affine(const MotorState& s, const ReferencePoint& r) const;

  /// v_q solving sdot = 0 along the model dynamics.
  double equivalent_control(const MotorState& s, const ReferencePoint& r) const;

  /// Surface rate if `v_q` were applied (use the post-clamp voltage to log
  /// what the plant actually sees).
  double sdot_at(const MotorState& s, const ReferencePoint& r, double v_q) const;

  ControlOutput step(const MotorState& s, const ReferencePoint& r) const;

  const SmcConfig& config() const { return cfg_; }
  const MotorParams& params() const { return p_; }

 private:
  double e3dot_model(const MotorState& s, const ReferencePoint& r) const;

  MotorParams p_;
  SmcConfig cfg_;
};

/// d-axis regulation shared by both controllers: model feedforward plus a
/// small switching (or boundary-layer) term on s_d = i_d - i_dr.
double d_axis_control(const MotorParams& p, const MotorState& s,
                      const ReferencePoint& r, double U0_d, double psi_d);

struct ReachingReport {
  std::size_t checked = 0;     ///< samples outside the boundary layer
  std::size_t violations = 0;  ///< samples failing s*sdot <= -h|s|
  double violation_fraction = 0.0;
};

/// Evaluates the reaching condition over a logged (s, sdot) sequence,
/// ignoring samples inside the +-boundary_layer band around the surface.
ReachingReport reaching_diagnostic(std::span<const double> s,
                                   std::span<const double> s_dot, double h,
                                   double boundary_layer);

}  // namespace suntrack
