#pragma once

namespace suntrack {

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// sign with the dead-on-zero convention used by every switching law here:
/// sgn(0) = 0, so an exactly-on-surface state applies no switching effort.
constexpr double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// unit saturation: linear inside [-1, 1], clipped outside.
constexpr double sat(double x) { return x > 1.0 ? 1.0 : (x < -1.0 ? -1.0 : x); }

}  // namespace suntrack
