#pragma once

#include <array>

namespace suntrack {

/// Electrical and mechanical constants of the stepper motor in the rotating
/// d-q frame. Defaults are the bench motor all bundled scenarios use.
struct MotorParams {
  double R = 3.15;       ///< winding resistance, ohm
  double L = 8.15e-3;    ///< winding inductance, H
  double J = 3.0145e-4;  ///< rotor + reflected load inertia, kg m^2
  double K = 0.433;      ///< torque constant, N m / A
  double f_v = 0.0172;   ///< viscous friction, N m s / rad
  double C = 0.780;      ///< nominal load torque, N m
  double N = 50.0;       ///< rotor tooth count
  double V_max = 24.0;   ///< per-channel supply bound, V

  /// Keep the +N*L*omega*i_d coupling in the i_q equation instead of the
  /// sign that makes the free motor dissipative. Off by default; only the
  /// comparison scenarios flip it.
  bool paper_literal_signs = false;

  bool operator==(const MotorParams&) const = default;
};

/// Throws std::invalid_argument on non-finite or non-positive R, L, J, K,
/// negative f_v / N / V_max.
void validate(const MotorParams& p);

struct MotorState {
  double i_d = 0.0;   ///< direct-axis current, A
  double i_q = 0.0;   ///< quadrature-axis current, A
  double omega = 0.0; ///< rotor velocity, rad/s
  double q = 0.0;     ///< rotor position, rad
};

struct DqInput {
  double v_d = 0.0;  ///< direct-axis voltage, V
  double v_q = 0.0;  ///< quadrature-axis voltage, V
};

struct StateDerivative {
  double di_d = 0.0;
  double di_q = 0.0;
  double domega = 0.0;
  double dq = 0.0;
};

/// Continuous-time d-q dynamics. `load_torque` is the torque actually
/// opposing the shaft at this instant (nominal load plus any disturbance);
/// it is a separate input so plant, observer and controller can each assume
/// a different value.
StateDerivative derivatives(const MotorParams& p, const MotorState& s,
                            const DqInput& u, double load_torque);

/// State vector order shared by the linear form and the model bank:
/// x = (i_d, i_q, q, omega).
using Vec4 = std::array<double, 4>;

Vec4 to_vec4(const MotorState& s);
MotorState from_vec4(const Vec4& x);

/// Velocity-frozen linear form xdot = A(omega0) x + B u + p_aff.
/// Only the current rows depend on the frozen velocity; the mechanical rows
/// are linear already.
struct StateSpace {
  std::array<std::array<double, 4>, 4> A{};
  std::array<std::array<double, 2>, 4> B{};
  Vec4 p_aff{};

  Vec4 apply(const Vec4& x, const DqInput& u) const;
};

StateSpace state_space(const MotorParams& p, double omega_frozen,
                       double load_torque);

/// Flat output y1 = q, y2 = i_d with enough derivatives to recover the full
/// state and the voltages that keep the motor exactly on that trajectory.
struct FlatTrajectory {
  double y1 = 0.0;      ///< position, rad
  double y1_d = 0.0;    ///< rad/s
  double y1_dd = 0.0;   ///< rad/s^2
  double y1_ddd = 0.0;  ///< rad/s^3
  double y2 = 0.0;      ///< direct-axis current, A
  double y2_d = 0.0;    ///< A/s
  double load = 0.0;    ///< anticipated load torque, N m
  double load_d = 0.0;  ///< N m / s
};

struct FlatInverse {
  DqInput input;
  MotorState state;
};

/// Inverts the dynamics along the flat trajectory; the returned state/input
/// pair satisfies derivatives() exactly (same sign convention as `p`).
FlatInverse flat_inverse(const MotorParams& p, const FlatTrajectory& y);

}  // namespace suntrack
