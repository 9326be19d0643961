#pragma once

#include <cstddef>
#include <vector>

#include "suntrack/motor_plant.hpp"
#include "suntrack/ode_integrator.hpp"
#include "suntrack/smc_controller.hpp"
#include "suntrack/sun_reference.hpp"

namespace suntrack {

/// Bank of velocity-frozen linear sub-models sharing one parameter set.
struct ModelBank {
  MotorParams params;
  std::vector<double> anchors;      ///< frozen velocities, rad/s, increasing
  std::vector<StateSpace> models;   ///< one linear form per anchor
};

/// Anchors must be finite and strictly increasing; the bank is frozen at the
/// nominal load.
ModelBank build_bank(const MotorParams& p, std::vector<double> anchors);

/// r_i = |y - y_i| for each sub-model output.
std::vector<double> residues(double y_measured,
                             const std::vector<double>& y_models);

struct ValiditySet {
  std::vector<double> normalized_residues;  ///< r_i / sum r_j
  std::vector<double> plain;                ///< v_i = 1 - r_in
  std::vector<double> reinforced;           ///< v_i * prod(1 - v_j), j != i
  std::vector<double> weights;              ///< final mixing weights, sum 1
};

/// Residue -> validity pipeline. `reinforce` keeps the cross-product
/// sharpening stage; without it the weights are the renormalized plain
/// validities. All-zero residues mean "no information": uniform weights.
/// When reinforcement cancels every model (ties at v = 1), weights fall back
/// to uniform over the minimum-residue models.
ValiditySet validities(const std::vector<double>& residues,
                       bool reinforce = true);

struct PidGains {
  double a = 1.2;    ///< proportional
  double b = 0.355;  ///< derivative
  double g = 0.05;   ///< integral

  bool operator==(const PidGains&) const = default;
};

struct SwitchingGains {
  double I = 10.0;     ///< switching amplitude, V
  double psi = 0.02;   ///< boundary layer half-width (surface units)
  double u_min = -10.0;
  double u_max = 10.0;

  bool operator==(const SwitchingGains&) const = default;
};

struct PidSurfaceState {
  double integral = 0.0;  ///< trapezoidal accumulator of the error
  bool primed = false;
  double prev_err = 0.0;
};

struct SurfaceSample {
  double s = 0.0;
  double s_dot = 0.0;
};

/// PID sliding surface s = a*err + b*err_rate + g*int(err). The caller
/// passes the analytic error rate and acceleration (no finite differencing);
/// the integral advances by the trapezoid rule unless frozen (anti-windup
/// while the actuator is clamped).
SurfaceSample pid_surface(double err, double err_rate, double err_acc,
                          PidSurfaceState& state, const PidGains& gains,
                          double dt, bool freeze_integral);

/// u_si = I * sat(s / psi), then clamped into [u_min, u_max].
double saturated_switching(double s, const SwitchingGains& gains);

/// Equivalent control of one velocity-frozen sub-model: the q-axis voltage
/// solving s_dot = 0 for the PID surface along the sub-model dynamics, with
/// the electrical transient collapsed (the current is taken at its
/// quasi-static value, which it reaches well within one control period):
///   v_q = K*omega - coupling*N*L*anchor*i_d
///         + (R/K) * (J*(omega_r_dot + (a*err_rate + g*err)/b)
///                    + f_v*omega + C)
double equivalent_control_frozen(const MotorParams& p, const MotorState& s,
                                 const ReferencePoint& r,
                                 const PidGains& gains, double anchor);

struct FusedControl {
  double u_g = 0.0;
  double S = 0.0;  ///< validity-weighted surface
};

FusedControl fuse(const std::vector<double>& u,
                  const std::vector<double>& s,
                  const std::vector<double>& weights);

struct SmmmcConfig {
  std::vector<double> anchors;        ///< rad/s; default {0, half, full} span
  std::vector<PidGains> pid;          ///< size 1 broadcasts to every model
  std::vector<SwitchingGains> sw;     ///< likewise
  double reset_horizon = 0.5;         ///< s between prediction re-anchoring
  bool plain_validities = false;
  double U0_d = 0.5;
  double psi_d = 0.05;

  bool operator==(const SmmmcConfig&) const = default;
};

SmmmcConfig default_smmmc_config();

void validate(const SmmmcConfig& cfg);

/// Multimodel controller: runs every sub-model open loop against the applied
/// voltage, converts output residues into validities, and blends per-model
/// (equivalent + saturated switching) controls with them. Stateful: holds
/// the bank predictions and the per-model surface integrals.
class SmmmcController {
 public:
  SmmmcController(const MotorParams& p, const SmmmcConfig& cfg,
                  double control_dt, double bank_dt, Method method);

  struct StepResult {
    ControlOutput out;                  ///< fused command; s is the fused S
    std::vector<double> surfaces;       ///< per-model s_i
    std::vector<double> weights;        ///< per-model validity weights
  };

  /// `prev_applied` is the voltage the plant actually received since the
  /// last call (post clamping); the bank predictions advance under it
  /// before residues are formed. `prev_clamped` freezes the integrals.
  StepResult step(const MotorState& feedback, const ReferencePoint& ref,
                  const DqInput& prev_applied, bool prev_clamped);

  /// Re-anchors every prediction on the measured state and marks the next
  /// step to skip its bank advance (there is no applied-input history for
  /// the elapsed interval). Called automatically on the first step; the
  /// harness calls it when an axis resumes after being parked.
  void reset(const MotorState& feedback);

  const std::vector<Vec4>& predictions() const { return predictions_; }
  const SmmmcConfig& config() const { return cfg_; }

 private:
  MotorParams p_;
  SmmmcConfig cfg_;
  ModelBank bank_;
  double control_dt_;
  double bank_dt_;
  Method method_;

  bool primed_ = false;
  bool pending_skip_ = false;
  double since_reset_ = 0.0;
  std::vector<Vec4> predictions_;
  std::vector<PidSurfaceState> pid_states_;
};

}  // namespace suntrack
