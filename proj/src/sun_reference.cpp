#include "suntrack/sun_reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "suntrack/units.hpp"

namespace suntrack {

namespace {

/// Truncated Taylor coefficients (value and first three time derivatives).
/// Enough arithmetic to push the solar geometry through asin/atan2 with
/// exact derivatives instead of sympy-generated closed forms.
struct Jet {
  double v[4] = {0.0, 0.0, 0.0, 0.0};
};

Jet jet_const(double c) { return Jet{{c, 0.0, 0.0, 0.0}}; }

Jet jet_linear(double value, double rate) {
  return Jet{{value, rate, 0.0, 0.0}};
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet r;
  for (int i = 0; i < 4; ++i) r.v[i] = a.v[i] + b.v[i];
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r;
  for (int i = 0; i < 4; ++i) r.v[i] = a.v[i] - b.v[i];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  r.v[0] = a.v[0] * b.v[0];
  r.v[1] = a.v[1] * b.v[0] + a.v[0] * b.v[1];
  r.v[2] = a.v[2] * b.v[0] + 2.0 * a.v[1] * b.v[1] + a.v[0] * b.v[2];
  r.v[3] = a.v[3] * b.v[0] + 3.0 * a.v[2] * b.v[1] + 3.0 * a.v[1] * b.v[2] +
           a.v[0] * b.v[3];
  return r;
}

Jet operator*(double c, const Jet& a) { return jet_const(c) * a; }

/// Composition y = g(u) through third order:
/// y' = g1 u', y'' = g2 u'^2 + g1 u'', y''' = g3 u'^3 + 3 g2 u' u'' + g1 u'''.
Jet compose(const Jet& u, double g0, double g1, double g2, double g3) {
  Jet r;
  const double u1 = u.v[1], u2 = u.v[2], u3 = u.v[3];
  r.v[0] = g0;
  r.v[1] = g1 * u1;
  r.v[2] = g2 * u1 * u1 + g1 * u2;
  r.v[3] = g3 * u1 * u1 * u1 + 3.0 * g2 * u1 * u2 + g1 * u3;
  return r;
}

Jet jet_sin(const Jet& u) {
  const double s = std::sin(u.v[0]), c = std::cos(u.v[0]);
  return compose(u, s, c, -s, -c);
}

Jet jet_cos(const Jet& u) {
  const double s = std::sin(u.v[0]), c = std::cos(u.v[0]);
  return compose(u, c, -s, -c, s);
}

Jet jet_asin(const Jet& u) {
  const double x = u.v[0];
  const double w = 1.0 - x * x;
  if (w <= 0.0) {
    throw std::domain_error("asin derivative singular at |x| = 1");
  }
  const double rw = 1.0 / std::sqrt(w);
  const double g1 = rw;
  const double g2 = x * rw / w;
  const double g3 = (1.0 + 2.0 * x * x) * rw / (w * w);
  return compose(u, std::asin(x), g1, g2, g3);
}

Jet jet_inv(const Jet& u) {
  const double x = u.v[0];
  if (x == 0.0) throw std::domain_error("jet division by zero");
  return compose(u, 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x),
                 -6.0 / (x * x * x * x));
}

/// Drops the value and reinterprets the derivatives one order down. The
/// result is only trustworthy through order 2.
Jet jet_shift(const Jet& u) { return Jet{{u.v[1], u.v[2], u.v[3], 0.0}}; }

/// atan2 over jets: the value comes from atan2 directly, the derivatives
/// from Adot = (p' q - p q') / (p^2 + q^2) carried as an order-2 jet.
Jet jet_atan2(const Jet& p, const Jet& q) {
  const Jet denom = p * p + q * q;
  if (denom.v[0] == 0.0) {
    throw std::domain_error("atan2 jet undefined at the origin");
  }
  const Jet adot = (jet_shift(p) * q - p * jet_shift(q)) * jet_inv(denom);
  Jet r;
  r.v[0] = std::atan2(p.v[0], q.v[0]);
  r.v[1] = adot.v[0];
  r.v[2] = adot.v[1];
  r.v[3] = adot.v[2];
  return r;
}

double declination_rad(int day_of_year) {
  return deg2rad(23.45) *
         std::sin(deg2rad(360.0 * (284.0 + day_of_year) / 365.0));
}

/// Hour angle in radians for a solar time in hours (15 deg per hour).
double hour_angle_rad(double solar_time_hours) {
  return deg2rad(15.0 * (solar_time_hours - 12.0));
}

struct SunJets {
  Jet altitude;
  Jet azimuth;
};

/// Sun altitude/azimuth as jets of simulation time, with the hour angle
/// advancing at `hour_rate` rad per simulation second from `h0`.
SunJets sun_jets(double latitude_rad, double decl_rad, double h0,
                 double hour_rate) {
  const Jet h = jet_linear(h0, hour_rate);
  const double sphi = std::sin(latitude_rad), cphi = std::cos(latitude_rad);
  const double sdec = std::sin(decl_rad), cdec = std::cos(decl_rad);

  const Jet sin_alt = jet_const(sphi * sdec) + (cphi * cdec) * jet_cos(h);
  SunJets out;
  out.altitude = jet_asin(sin_alt);
  out.azimuth = jet_atan2(
      jet_sin(h), sphi * jet_cos(h) - jet_const(std::tan(decl_rad) * cphi));
  return out;
}

/// Quintic smoothstep on [0, 1] with zero first and second derivatives at
/// both ends; returns value and three derivatives w.r.t. tau.
Jet quintic_blend(double tau) {
  const double t2 = tau * tau, t3 = t2 * tau, t4 = t3 * tau, t5 = t4 * tau;
  Jet r;
  r.v[0] = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
  r.v[1] = 30.0 * t2 - 60.0 * t3 + 30.0 * t4;
  r.v[2] = 60.0 * tau - 180.0 * t2 + 120.0 * t3;
  r.v[3] = 60.0 - 360.0 * tau + 360.0 * t2;
  return r;
}

/// Position trajectory of one axis as a jet: (q_r, q_r', q_r'', q_r''').
Jet profile_jet(const ReferenceProfile& pr, double t) {
  switch (pr.kind) {
    case ProfileKind::Step: {
      if (t < pr.t_on) return jet_const(0.0);
      if (pr.rise_window <= 0.0 || t >= pr.t_on + pr.rise_window) {
        return jet_const(pr.target);
      }
      const double tau = (t - pr.t_on) / pr.rise_window;
      Jet b = quintic_blend(tau);
      Jet r;
      double scale = 1.0;
      for (int i = 0; i < 4; ++i) {
        r.v[i] = pr.target * b.v[i] * scale;
        scale /= pr.rise_window;
      }
      return r;
    }
    case ProfileKind::Ramp:
      return jet_linear(pr.rate * t, pr.rate);
    case ProfileKind::SolarDay: {
      const double phi = deg2rad(pr.latitude_deg);
      const double dec = declination_rad(pr.day_of_year);
      const double cos_hs = -std::tan(phi) * std::tan(dec);
      if (cos_hs <= -1.0 || cos_hs >= 1.0) {
        // polar day/night: nothing to track, hold home
        return jet_const(0.0);
      }
      const double h_set = std::acos(cos_hs);  // sunset hour angle, rad
      const double h_rise = -h_set;
      const double hour_rate = deg2rad(15.0) * pr.speedup / 3600.0;
      const double t_set = (h_set - h_rise) / hour_rate;  // sim s of sunset

      const auto angle_at = [&](double h0, double rate) {
        const SunJets s = sun_jets(phi, dec, h0, rate);
        return pr.solar_axis == SolarAxis::Azimuth ? s.azimuth : s.altitude;
      };
      const double home = angle_at(h_rise, 0.0).v[0];

      if (t <= t_set) {
        Jet a = angle_at(h_rise + hour_rate * t, hour_rate);
        a.v[0] -= home;  // axis coordinate: zero at the sunrise attitude
        return a;
      }
      // after sunset: blend back to home and hold
      const double sunset_angle = angle_at(h_set, 0.0).v[0] - home;
      if (t >= t_set + pr.return_window || pr.return_window <= 0.0) {
        return jet_const(0.0);
      }
      const double tau = (t - t_set) / pr.return_window;
      Jet b = quintic_blend(tau);
      Jet r;
      double scale = 1.0;
      for (int i = 0; i < 4; ++i) {
        r.v[i] = -sunset_angle * b.v[i] * scale;
        scale /= pr.return_window;
      }
      r.v[0] += sunset_angle;
      return r;
    }
  }
  throw std::logic_error("unhandled profile kind");
}

}  // namespace

SunGeometry solar_position(double latitude_deg, int day_of_year,
                           double solar_time_hours) {
  if (!std::isfinite(latitude_deg) || latitude_deg < -90.0 ||
      latitude_deg > 90.0) {
    throw std::invalid_argument("latitude must be within [-90, 90] degrees");
  }
  if (day_of_year < 1 || day_of_year > 366) {
    throw std::invalid_argument("day_of_year must be within [1, 366]");
  }

  SunGeometry g;
  g.declination = declination_rad(day_of_year);
  g.hour_angle = hour_angle_rad(solar_time_hours);

  const double phi = deg2rad(latitude_deg);
  const double sin_alt = std::sin(phi) * std::sin(g.declination) +
                         std::cos(phi) * std::cos(g.declination) *
                             std::cos(g.hour_angle);
  g.altitude = std::asin(std::clamp(sin_alt, -1.0, 1.0));
  g.azimuth = std::atan2(std::sin(g.hour_angle),
                         std::cos(g.hour_angle) * std::sin(phi) -
                             std::tan(g.declination) * std::cos(phi));
  return g;
}

double incidence_cos(double panel_azimuth, double panel_altitude,
                     const SunGeometry& sun) {
  return std::sin(panel_altitude) * std::sin(sun.altitude) +
         std::cos(panel_altitude) * std::cos(sun.altitude) *
             std::cos(panel_azimuth - sun.azimuth);
}

double incidence_power(double panel_azimuth, double panel_altitude,
                       const SunGeometry& sun, double p_max) {
  if (!std::isfinite(p_max) || p_max < 0.0) {
    throw std::invalid_argument("p_max must be finite and >= 0");
  }
  if (sun.altitude <= 0.0) return 0.0;
  return p_max * std::max(0.0, incidence_cos(panel_azimuth, panel_altitude, sun));
}

double DailyEnergy::gain() const {
  if (fixed_wh <= 0.0) {
    throw std::runtime_error("fixed panel collected no energy; gain undefined");
  }
  return tracked_wh / fixed_wh - 1.0;
}

DailyEnergy daily_energy(double latitude_deg, int day_of_year, double p_max,
                         double dt_seconds) {
  if (!std::isfinite(dt_seconds) || dt_seconds <= 0.0 ||
      dt_seconds > 3600.0) {
    throw std::invalid_argument("energy dt must be in (0, 3600] seconds");
  }
  // fixed baseline: tilt = latitude facing the equator, so the normal sits
  // at altitude (90 - |lat|) pointing south (north for southern latitudes)
  const double panel_alt = deg2rad(90.0 - std::abs(latitude_deg));
  const double panel_az = latitude_deg >= 0.0 ? 0.0 : kPi;

  DailyEnergy e;
  for (double t = 0.0; t < 24.0 * 3600.0; t += dt_seconds) {
    const SunGeometry sun =
        solar_position(latitude_deg, day_of_year, t / 3600.0);
    if (sun.altitude <= 0.0) continue;
    e.tracked_wh += p_max * dt_seconds;
    e.fixed_wh += incidence_power(panel_az, panel_alt, sun, p_max) * dt_seconds;
  }
  e.tracked_wh /= 3600.0;
  e.fixed_wh /= 3600.0;
  return e;
}

void validate(const ReferenceProfile& pr) {
  for (double v : {pr.target, pr.t_on, pr.rise_window, pr.rate,
                   pr.latitude_deg, pr.speedup, pr.return_window}) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("non-finite reference profile parameter");
    }
  }
  if (pr.t_on < 0.0) throw std::invalid_argument("step t_on must be >= 0");
  if (pr.rise_window < 0.0) {
    throw std::invalid_argument("step rise_window must be >= 0");
  }
  if (pr.latitude_deg < -90.0 || pr.latitude_deg > 90.0) {
    throw std::invalid_argument("latitude must be within [-90, 90] degrees");
  }
  if (pr.day_of_year < 1 || pr.day_of_year > 366) {
    throw std::invalid_argument("day_of_year must be within [1, 366]");
  }
  if (pr.speedup <= 0.0) throw std::invalid_argument("speedup must be > 0");
}

ReferencePoint sample(const ReferenceProfile& pr, double t,
                      const MotorParams& p) {
  if (!std::isfinite(t) || t < 0.0) {
    throw std::invalid_argument("sample time must be finite and >= 0");
  }
  const Jet q = profile_jet(pr, t);

  ReferencePoint r;
  r.q_r = q.v[0];
  r.omega_r = q.v[1];
  r.omega_r_d = q.v[2];
  r.omega_r_dd = q.v[3];
  if (!pr.feedforward) return r;

  FlatTrajectory y;
  y.y1 = q.v[0];
  y.y1_d = q.v[1];
  y.y1_dd = q.v[2];
  y.y1_ddd = q.v[3];
  y.load = p.C;
  const FlatInverse ff = flat_inverse(p, y);
  r.i_dr = ff.state.i_d;
  r.i_qr = ff.state.i_q;
  r.v_dr = ff.input.v_d;
  r.v_qr = ff.input.v_q;
  r.C_r = p.C;
  return r;
}

}  // namespace suntrack
