#pragma once

#include <cstddef>
#include <span>

#include "suntrack/motor_plant.hpp"
#include "suntrack/ode_integrator.hpp"

namespace suntrack {

enum class ObserverMode {
  GroundTruth,  ///< velocity injection switches on the measured velocity
  Sensorless    ///< velocity injection from the filtered position switching
};

struct ObserverGains {
  double I1 = 50.0;   ///< position injection, rad/s
  double I2 = 500.0;  ///< velocity injection, rad/s^2 (torque / J)

  bool operator==(const ObserverGains&) const = default;
};

struct ObserverConfig {
  ObserverGains gains;
  ObserverMode mode = ObserverMode::GroundTruth;
  /// time constant of the equivalent-injection low-pass in sensorless mode;
  /// 0 means "10 integration steps", resolved by the harness.
  double filter_tau = 0.0;
  double q_hat0 = 0.0;
  double omega_hat0 = 0.0;

  bool operator==(const ObserverConfig&) const = default;
};

void validate(const ObserverConfig& cfg);

struct ObserverState {
  double q_hat = 0.0;
  double omega_hat = 0.0;
  /// filtered sgn(q - q_hat), the sensorless stand-in for sgn(e_omega)
  double injection_avg = 0.0;
};

struct ObserverMeasurement {
  double q = 0.0;           ///< measured position, rad
  double i_q = 0.0;         ///< measured q-axis current, A
  double load_assumed = 0.0;///< torque the observer believes in, N m
  double omega = 0.0;       ///< measured velocity; read in GroundTruth only
};

struct ObserverDerivatives {
  double dq_hat = 0.0;
  double domega_hat = 0.0;
};

/// Right-hand side of the observer at the current state and measurement.
/// The switching terms are evaluated here and are held constant across one
/// integration step by SmoObserver.
ObserverDerivatives observer_derivatives(const MotorParams& p,
                                         const ObserverState& s,
                                         const ObserverMeasurement& m,
                                         const ObserverGains& gains,
                                         ObserverMode mode);

/// Velocity/position observer with sliding injections. Integrated with the
/// same fixed-step scheme as the plant; the discontinuous injections are
/// frozen at their step-start values so the Runge-Kutta stages see a smooth
/// right-hand side.
class SmoObserver {
 public:
  SmoObserver(const MotorParams& p, const ObserverConfig& cfg,
              double filter_tau_resolved);

  void reset(double q_hat0, double omega_hat0);
  const ObserverState& state() const { return state_; }

  void step(const ObserverMeasurement& m, double dt, Method method);

 private:
  MotorParams p_;
  ObserverConfig cfg_;
  double tau_;
  ObserverState state_;
};

/// Worst-case time for the position error to reach zero:
/// t* = |e_q0| / (I1 - e_omega_max). Throws unless I1 > e_omega_max >= 0.
double convergence_bound(double e_q0, double e_omega_max, double I1);

/// True when the gain pair dominates the supplied bounds: I1 > |e_omega|max
/// and I2 * J > |load error|max.
bool gains_check(const ObserverGains& gains, double e_omega_max,
                 double load_error_max, const MotorParams& p);

struct LyapunovReport {
  std::size_t hit_index = 0;       ///< first sample with |e_q| inside the band
  bool position_hit = false;
  double v1_violation_fraction = 0.0;  ///< dV1 >= 0 before the hit
  double v2_violation_fraction = 0.0;  ///< dV2 >= 0 after the hit
  std::size_t v1_checked = 0;
  std::size_t v2_checked = 0;
};

/// Discrete-difference check of V1 = e_q^2/2 and V2 = (e_q^2 + J e_w^2)/2
/// over logged error sequences. Samples whose errors sit inside the one-step
/// switching ripple (I1*dt for e_q, I2*dt for e_omega) are excluded.
LyapunovReport lyapunov_check(std::span<const double> e_q,
                              std::span<const double> e_omega, double dt,
                              const MotorParams& p, const ObserverGains& g);

}  // namespace suntrack
