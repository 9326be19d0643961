#pragma once

#include "suntrack/motor_plant.hpp"

namespace suntrack {

/// Sun direction at one instant, all angles in radians. Azimuth is measured
/// from due south, positive toward west; altitude from the horizon plane.
struct SunGeometry {
  double declination = 0.0;
  double hour_angle = 0.0;
  double altitude = 0.0;
  double azimuth = 0.0;
};

/// Declination/hour-angle geometry for a given day-of-year and local solar
/// time in hours. Latitude in degrees, day in [1, 366].
SunGeometry solar_position(double latitude_deg, int day_of_year,
                           double solar_time_hours);

/// Cosine of the angle between a panel normal (given by its azimuth/altitude)
/// and the sun direction.
double incidence_cos(double panel_azimuth, double panel_altitude,
                     const SunGeometry& sun);

/// Beam power collected by the panel: p_max * max(0, cos theta), and zero
/// whenever the sun is below the horizon.
double incidence_power(double panel_azimuth, double panel_altitude,
                       const SunGeometry& sun, double p_max);

struct DailyEnergy {
  double fixed_wh = 0.0;
  double tracked_wh = 0.0;
  /// tracked/fixed - 1; throws if the fixed panel collects nothing.
  double gain() const;
};

/// Rectangle-rule integration of incidence power over one day at step dt
/// seconds. The fixed baseline is a panel tilted at the latitude facing the
/// equator; the tracked panel points straight at the sun all daylight.
DailyEnergy daily_energy(double latitude_deg, int day_of_year, double p_max,
                         double dt_seconds);

/// One sample of the trajectory an axis controller is asked to follow.
/// Feedforward fields come from flat_inverse of the same profile, so a plant
/// started on the reference stays on it under (v_dr, v_qr) alone.
struct ReferencePoint {
  double q_r = 0.0;        ///< rad
  double omega_r = 0.0;    ///< rad/s
  double omega_r_d = 0.0;  ///< rad/s^2
  double omega_r_dd = 0.0; ///< rad/s^3
  double i_dr = 0.0;       ///< A
  double i_qr = 0.0;       ///< A
  double v_dr = 0.0;       ///< V
  double v_qr = 0.0;       ///< V
  double C_r = 0.0;        ///< anticipated load torque, N m
  double C_r_d = 0.0;      ///< N m / s
};

enum class ProfileKind { Step, Ramp, SolarDay };
enum class SolarAxis { Azimuth, Altitude };

struct ReferenceProfile {
  ProfileKind kind = ProfileKind::Step;

  // Step: hold 0 until t_on, then blend to `target` over rise_window seconds
  // (quintic blend; rise_window = 0 means a hard jump with zero derivative
  // feedforward on both sides).
  double target = 0.0;  ///< rad
  double t_on = 1.0;    ///< s
  double rise_window = 0.5;  ///< s

  // Ramp: q_r = rate * t.
  double rate = 0.0;  ///< rad/s

  // SolarDay: follow the sun angle for one axis, compressed in time so a
  // whole day fits in a short run. Simulation second 0 is sunrise.
  double latitude_deg = 35.0;
  int day_of_year = 81;
  double speedup = 864.0;          ///< solar seconds per simulation second
  double return_window = 5.0;      ///< s, post-sunset return-to-home blend
  SolarAxis solar_axis = SolarAxis::Azimuth;

  /// When false the electrical feedforward fields (i_qr, v_dr, v_qr, C_r)
  /// are left at zero and only the kinematic trajectory is published.
  bool feedforward = true;

  bool operator==(const ReferenceProfile&) const = default;
};

void validate(const ReferenceProfile& profile);

/// Samples the profile at time t with analytic derivatives (no finite
/// differencing anywhere).
ReferencePoint sample(const ReferenceProfile& profile, double t,
                      const MotorParams& p);

}  // namespace suntrack
