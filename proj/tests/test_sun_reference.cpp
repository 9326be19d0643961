#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "suntrack/motor_plant.hpp"
#include "suntrack/ode_integrator.hpp"
#include "suntrack/sun_reference.hpp"
#include "suntrack/units.hpp"

using namespace suntrack;

TEST_CASE("equinox geometry at latitude 35") {
  const SunGeometry noon = solar_position(35.0, 81, 12.0);
  CHECK(std::abs(noon.declination) < 1e-10);
  CHECK(noon.hour_angle == doctest::Approx(0.0));
  CHECK(rad2deg(noon.altitude) == doctest::Approx(55.0).epsilon(1e-9));
  CHECK(std::abs(noon.azimuth) < 1e-9);

  const SunGeometry morning = solar_position(35.0, 81, 6.0);
  CHECK(std::abs(morning.altitude) < 1e-9);
  CHECK(morning.azimuth == doctest::Approx(-kPi / 2).epsilon(1e-9));

  CHECK_THROWS_AS(solar_position(91.0, 81, 12.0), std::invalid_argument);
  CHECK_THROWS_AS(solar_position(35.0, 0, 12.0), std::invalid_argument);
}

TEST_CASE("incidence power clips below the horizon and off-angle") {
  SunGeometry sun;
  sun.altitude = deg2rad(55.0);
  sun.azimuth = 0.0;
  CHECK(incidence_power(0.0, deg2rad(55.0), sun, 100.0) ==
        doctest::Approx(100.0));
  sun.altitude = -0.1;
  CHECK(incidence_power(0.0, deg2rad(55.0), sun, 100.0) == 0.0);
  sun.altitude = deg2rad(55.0);
  sun.azimuth = kPi;  // panel facing away
  CHECK(incidence_power(0.0, 0.0, sun, 100.0) == 0.0);
  CHECK_THROWS_AS(incidence_power(0.0, 0.0, sun, -1.0), std::invalid_argument);
}

TEST_CASE("daily energy at latitude 35 equinox") {
  const DailyEnergy e = daily_energy(35.0, 81, 1.0, 60.0);
  CHECK(e.fixed_wh == doctest::Approx(7.6394251480651).epsilon(1e-9));
  CHECK(e.tracked_wh == doctest::Approx(11.983333333333333).epsilon(1e-12));
  CHECK(e.gain() == doctest::Approx(0.568617153918767).epsilon(1e-9));
}

TEST_CASE("daily energy on the equator tracks half the day") {
  const DailyEnergy e = daily_energy(0.0, 81, 1.0, 60.0);
  CHECK(e.tracked_wh == doctest::Approx(12.0).epsilon(0.01));
}

TEST_CASE("polar night has no gain to speak of") {
  const DailyEnergy e = daily_energy(89.0, 355, 1.0, 60.0);
  CHECK(e.fixed_wh == 0.0);
  CHECK(e.tracked_wh == 0.0);
  CHECK_THROWS_AS(e.gain(), std::runtime_error);
}

TEST_CASE("step profile holds, blends and lands") {
  ReferenceProfile pr;
  pr.kind = ProfileKind::Step;
  pr.target = deg2rad(0.48);
  pr.t_on = 1.0;
  pr.rise_window = 0.5;
  const MotorParams p;

  const ReferencePoint before = sample(pr, 0.5, p);
  CHECK(before.q_r == 0.0);
  CHECK(before.omega_r == 0.0);
  CHECK(before.i_qr == doctest::Approx(p.C / p.K).epsilon(1e-12));
  CHECK(before.v_qr == doctest::Approx(p.R * p.C / p.K).epsilon(1e-12));

  const ReferencePoint mid = sample(pr, 1.25, p);
  CHECK(mid.q_r == doctest::Approx(pr.target / 2).epsilon(1e-12));
  CHECK(mid.omega_r > 0.0);

  const ReferencePoint after = sample(pr, 2.0, p);
  CHECK(after.q_r == doctest::Approx(pr.target));
  CHECK(after.omega_r == 0.0);
  CHECK(after.omega_r_d == 0.0);

  pr.rise_window = 0.0;
  const ReferencePoint jump = sample(pr, 1.0, p);
  CHECK(jump.q_r == pr.target);
  CHECK(jump.omega_r == 0.0);
}

TEST_CASE("ramp profile is a clean constant-velocity line") {
  ReferenceProfile pr;
  pr.kind = ProfileKind::Ramp;
  pr.rate = deg2rad(160.0);
  const MotorParams p;
  const ReferencePoint r = sample(pr, 2.0, p);
  CHECK(r.q_r == doctest::Approx(2.0 * pr.rate).epsilon(1e-12));
  CHECK(r.omega_r == pr.rate);
  CHECK(r.omega_r_d == 0.0);
  CHECK(r.i_qr ==
        doctest::Approx((p.f_v * pr.rate + p.C) / p.K).epsilon(1e-12));
}

TEST_CASE("profile derivatives agree with finite differences") {
  const MotorParams p;
  ReferenceProfile step;
  step.kind = ProfileKind::Step;
  step.target = 0.2;
  step.t_on = 1.0;
  step.rise_window = 2.0;

  ReferenceProfile solar;
  solar.kind = ProfileKind::SolarDay;
  solar.solar_axis = SolarAxis::Altitude;

  for (const ReferenceProfile& pr : {step, solar}) {
    for (double t : {1.7, 2.1, 2.6, 10.0, 25.0, 40.0}) {
      const double h = 1e-5;
      const ReferencePoint lo = sample(pr, t - h, p);
      const ReferencePoint hi = sample(pr, t + h, p);
      const ReferencePoint c = sample(pr, t, p);
      CHECK(c.omega_r ==
            doctest::Approx((hi.q_r - lo.q_r) / (2 * h)).epsilon(1e-5));
      CHECK(c.omega_r_d ==
            doctest::Approx((hi.omega_r - lo.omega_r) / (2 * h))
                .epsilon(1e-4));
      CHECK(c.omega_r_dd ==
            doctest::Approx((hi.omega_r_d - lo.omega_r_d) / (2 * h))
                .epsilon(1e-3));
    }
  }
}

TEST_CASE("solar day reference starts home, peaks, and returns") {
  const MotorParams p;
  ReferenceProfile pr;
  pr.kind = ProfileKind::SolarDay;
  pr.solar_axis = SolarAxis::Altitude;
  pr.latitude_deg = 35.0;
  pr.day_of_year = 81;

  CHECK(sample(pr, 0.0, p).q_r == doctest::Approx(0.0));
  // with speedup 864 the 12 daylight hours compress to 50 s; noon at 25 s
  const double noon = sample(pr, 25.0, p).q_r;
  CHECK(rad2deg(noon) == doctest::Approx(55.0).epsilon(1e-6));
  CHECK(sample(pr, 99.0, p).q_r == doctest::Approx(0.0));
}

TEST_CASE("plant rides the reference on feedforward alone") {
  const MotorParams p;
  ReferenceProfile pr;
  pr.kind = ProfileKind::Ramp;
  pr.rate = deg2rad(160.0);

  const ReferencePoint r0 = sample(pr, 0.0, p);
  MotorState s{r0.i_dr, r0.i_qr, r0.omega_r, r0.q_r};
  const double dt = 1e-4;
  double t = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const auto rhs = [&](double tt, const Vec4& x) {
      const ReferencePoint r = sample(pr, tt, p);
      const StateDerivative d =
          derivatives(p, from_vec4(x), DqInput{r.v_dr, r.v_qr}, p.C);
      return Vec4{d.di_d, d.di_q, d.dq, d.domega};
    };
    s = from_vec4(integrate_step<4>(rhs, to_vec4(s), t, dt, Method::Rk4));
    t += dt;
  }
  const ReferencePoint r = sample(pr, t, p);
  CHECK(std::abs(s.q - r.q_r) < 1e-9);
  CHECK(std::abs(s.omega - r.omega_r) < 1e-7);
}

TEST_CASE("profile validation") {
  ReferenceProfile pr;
  pr.t_on = -1.0;
  CHECK_THROWS_AS(validate(pr), std::invalid_argument);
  pr = ReferenceProfile{};
  pr.latitude_deg = 95.0;
  CHECK_THROWS_AS(validate(pr), std::invalid_argument);
  pr = ReferenceProfile{};
  pr.speedup = 0.0;
  CHECK_THROWS_AS(validate(pr), std::invalid_argument);
}
