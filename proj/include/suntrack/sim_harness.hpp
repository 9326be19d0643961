#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "suntrack/motor_plant.hpp"
#include "suntrack/multimodel_controller.hpp"
#include "suntrack/ode_integrator.hpp"
#include "suntrack/smc_controller.hpp"
#include "suntrack/smo_observer.hpp"
#include "suntrack/sun_reference.hpp"

namespace suntrack {

enum class ControllerKind { Smc, Smmmc };

/// Independent drives every axis each step; Sequential powers exactly one
/// axis per epoch and leaves the others parked (worm-gear self-locking: the
/// parked plant, observer and controller are all completely inert).
enum class AxisMode { Independent, Sequential };

enum class DisturbanceKind { None, Step, Square, Sine };

struct DisturbanceConfig {
  DisturbanceKind kind = DisturbanceKind::None;
  double amplitude = 0.0;  ///< N m; Square swings the full +-amplitude
  double period = 15.0;    ///< s, Square and Sine only
  double start = 0.0;      ///< s, zero torque before this

  bool operator==(const DisturbanceConfig&) const = default;
};

void validate(const DisturbanceConfig& cfg);

/// Extra shaft torque at time t, added on top of the nominal load.
double disturbance_torque(const DisturbanceConfig& cfg, double t);

struct EnergyConfig {
  double latitude_deg = 35.0;
  int day_of_year = 81;
  double p_max = 1.0;       ///< W at normal incidence
  double dt_seconds = 60.0; ///< integration step over the day

  bool operator==(const EnergyConfig&) const = default;
};

void validate(const EnergyConfig& cfg);

struct Scenario {
  MotorParams motor;  ///< shared by every axis (the rig's steppers are alike)
  SimGrid grid;
  /// controller and observer-feedback sample period; integer multiple of
  /// grid.dt. The plant integrates at grid.dt with the command held between
  /// samples.
  double control_dt = 1e-3;
  int trace_every = 10;  ///< CSV decimation: write every n-th sample
  /// Start each axis at the current that exactly balances the nominal load
  /// (i_q = C/K) instead of a cold all-zero state, so t = 0 is an
  /// equilibrium of the loaded motor.
  bool start_at_holding_current = true;
  AxisMode axis_mode = AxisMode::Independent;
  double epoch = 1.0;  ///< s per axis turn in Sequential mode
  std::vector<ReferenceProfile> axes;  ///< one or two
  ControllerKind controller = ControllerKind::Smc;
  SmcConfig smc;
  SmmmcConfig smmmc = default_smmmc_config();
  ObserverConfig observer;
  DisturbanceConfig disturbance;
  std::optional<EnergyConfig> energy;

  bool operator==(const Scenario&) const = default;
};

void validate(const Scenario& sc);

/// Full-rate log of one axis. SMMMC-only channels hold NaN under SMC (and
/// during parked epochs); the CSV writer turns NaN into empty cells.
struct AxisTrace {
  std::vector<double> q, omega, q_hat, omega_hat, q_ref, omega_ref;
  std::vector<double> i_d, i_q;
  std::vector<double> u;      ///< applied v_q, post clamp
  std::vector<double> s;      ///< active surface (SMC s, SMMMC fused S)
  std::vector<double> s_dot;  ///< SMC only, at the applied voltage
  std::vector<double> S;      ///< SMMMC fused surface
  std::vector<std::vector<double>> s_models;  ///< per-model surfaces [m][k]
  std::vector<std::vector<double>> v_models;  ///< validity weights [m][k]
  std::vector<double> dist;
  std::vector<unsigned char> clamped;

  /// control-instant surface log for the reaching diagnostic (SMC only)
  std::vector<double> s_ctrl, s_dot_ctrl;
};

struct SimTrace {
  double dt = 0.0;
  double control_dt = 0.0;
  int trace_every = 1;
  /// per-model column count in the CSV; SMC runs keep the default bank
  /// width so the column set never changes with the controller choice
  int bank_columns = 0;
  std::vector<double> t;
  std::vector<AxisTrace> axes;
};

struct RunResult {
  SimTrace trace;
  bool aborted = false;
  double abort_time = 0.0;
  std::string diagnostic;
};

/// Executes the closed loop. Per integration step: refresh the held command
/// on control-sample boundaries (feedback = measured q and currents, plus
/// the observer velocity in sensorless mode or the shaft velocity
/// otherwise), clamp to +-V_max, log, then advance observer and plant one
/// dt under the held input with the disturbance torque added to the load.
/// A non-finite state aborts and returns the trace up to the last valid
/// sample.
RunResult run(const Scenario& sc);

struct SimMetrics {
  double settling_time_2pct = 0.0;  ///< s; infinity when never settled
  bool settled = false;
  double band = 0.0;                ///< rad, the band actually used
  double steady_state_error = 0.0;  ///< rad, mean |q - q_r| over final 20%
  double chattering_pp = 0.0;       ///< rad, peak-to-peak of q, final 20%
  double switching_rate = 0.0;      ///< sign changes of u per s, final 20%
  double rms_control = 0.0;         ///< V, whole run
  double max_observer_error = 0.0;  ///< rad/s, max |omega-omega_hat|, final 20%
  double reaching_violation_frac = 0.0;  ///< NaN when no surface log exists
  double energy_gain = 0.0;              ///< NaN unless [energy] present
};

struct MetricInputs {
  /// step magnitude defining the relative band; the band is
  /// max(0.02 deg, 2% of this)
  double step_magnitude = 0.0;
  double h = 1.0;               ///< reaching-rate floor
  double reaching_layer = 0.0;  ///< |s| band excluded from the diagnostic
  std::optional<EnergyConfig> energy;
};

/// Metric extraction over one axis of a trace. Settling time is the first
/// time after which |q - q_r| stays inside the band; the trace must cover
/// at least 5 s.
SimMetrics metrics(const SimTrace& trace, std::size_t axis,
                   const MetricInputs& in);

/// Convenience overload deriving MetricInputs from the scenario: the step
/// magnitude from the profile (|target| for steps, peak |q_r| otherwise)
/// and the reaching layer from U0 and the control period unless pinned.
SimMetrics metrics(const RunResult& result, const Scenario& sc,
                   std::size_t axis = 0);

double resolved_reaching_layer(const Scenario& sc);
double resolved_filter_tau(const Scenario& sc);

/// Throws std::invalid_argument naming the first mismatched block when the
/// two scenarios cannot be compared (different plant, reference grid,
/// disturbance or integration grid).
void check_comparable(const Scenario& a, const Scenario& b);

struct CompareReport {
  SimMetrics a;
  SimMetrics b;
  bool a_aborted = false;
  bool b_aborted = false;
  double chattering_ratio = 1.0;   ///< a/b
  double switching_ratio = 1.0;    ///< a/b
  double settling_ratio = 1.0;     ///< a/b
  double steady_state_error_ratio = 1.0;  ///< a/b
};

/// Runs both scenarios and pairs their metrics; ratios are a/b with 0/0
/// mapped to 1 and x/0 to infinity.
CompareReport compare(const Scenario& a, const Scenario& b,
                      std::size_t axis = 0);

/// Same pairing for runs the caller already produced (and may want to keep,
/// e.g. to write both traces).
CompareReport compare(const RunResult& ra, const Scenario& a,
                      const RunResult& rb, const Scenario& b,
                      std::size_t axis = 0);

}  // namespace suntrack
