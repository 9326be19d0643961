#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "suntrack/motor_plant.hpp"

using namespace suntrack;

TEST_CASE("parameter validation rejects broken motors") {
  MotorParams p;
  CHECK_NOTHROW(validate(p));
  p.R = 0.0;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  p = MotorParams{};
  p.L = -1e-3;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  p = MotorParams{};
  p.J = NAN;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  p = MotorParams{};
  p.V_max = 0.0;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
}

TEST_CASE("derivatives at a pinned operating point") {
  const MotorParams p;
  const MotorState s{1.0, 2.0, 3.0, 0.5};
  const DqInput u{1.0, 2.0};
  const StateDerivative d = derivatives(p, s, u, 0.78);
  CHECK(d.di_d == doctest::Approx(36.1963190184049).epsilon(1e-13));
  CHECK(d.di_q == doctest::Approx(-836.993865030675).epsilon(1e-13));
  CHECK(d.domega == doctest::Approx(114.11511030021559).epsilon(1e-13));
  CHECK(d.dq == 3.0);

  MotorParams lit = p;
  lit.paper_literal_signs = true;
  const StateDerivative dl = derivatives(lit, s, u, 0.78);
  CHECK(dl.di_q == doctest::Approx(-536.9938650306749).epsilon(1e-13));
  CHECK(dl.di_d == d.di_d);
  CHECK(dl.domega == d.domega);
}

TEST_CASE("free motor dissipates magnetic and kinetic energy") {
  const MotorParams p;
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> amp(-5.0, 5.0);
  std::uniform_real_distribution<double> vel(-200.0, 200.0);
  for (int i = 0; i < 500; ++i) {
    const MotorState s{amp(rng), amp(rng), vel(rng), amp(rng)};
    const StateDerivative d = derivatives(p, s, DqInput{}, 0.0);
    const double dE = p.L * (s.i_d * d.di_d + s.i_q * d.di_q) +
                      p.J * s.omega * d.domega;
    CHECK(dE <= 1e-9);
  }
}

TEST_CASE("literal-sign coupling can pump energy into the free motor") {
  MotorParams p;
  p.paper_literal_signs = true;
  // omega * i_d * i_q > 0 makes the uncancelled coupling term positive
  const MotorState s{2.0, 2.0, 150.0, 0.0};
  const StateDerivative d = derivatives(p, s, DqInput{}, 0.0);
  const double dE =
      p.L * (s.i_d * d.di_d + s.i_q * d.di_q) + p.J * s.omega * d.domega;
  CHECK(dE > 0.0);
}

TEST_CASE("derivatives are affine in the input") {
  const MotorParams p;
  const MotorState s{0.4, -1.1, 20.0, 2.0};
  const auto d0 = derivatives(p, s, DqInput{0.0, 0.0}, 0.3);
  const auto d1 = derivatives(p, s, DqInput{2.0, -3.0}, 0.3);
  const auto d2 = derivatives(p, s, DqInput{4.0, -6.0}, 0.3);
  CHECK(d2.di_d - d0.di_d == doctest::Approx(2.0 * (d1.di_d - d0.di_d)));
  CHECK(d2.di_q - d0.di_q == doctest::Approx(2.0 * (d1.di_q - d0.di_q)));
  CHECK(d2.domega == d1.domega);
  CHECK(d2.domega == d0.domega);
}

TEST_CASE("vec4 layout keeps position third and velocity fourth") {
  const MotorState s{1.0, 2.0, 3.0, 4.0};
  const Vec4 x = to_vec4(s);
  CHECK(x[0] == 1.0);
  CHECK(x[1] == 2.0);
  CHECK(x[2] == 4.0);  // q
  CHECK(x[3] == 3.0);  // omega
  const MotorState back = from_vec4(x);
  CHECK(back.i_d == s.i_d);
  CHECK(back.i_q == s.i_q);
  CHECK(back.omega == s.omega);
  CHECK(back.q == s.q);
}

TEST_CASE("frozen state space matches the nonlinear model at its anchor") {
  const MotorParams p;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> amp(-4.0, 4.0);
  std::uniform_real_distribution<double> vel(-100.0, 100.0);
  std::uniform_real_distribution<double> volt(-24.0, 24.0);
  for (int i = 0; i < 100; ++i) {
    const double w0 = vel(rng);
    const double load = amp(rng);
    const StateSpace ss = state_space(p, w0, load);
    const MotorState s{amp(rng), amp(rng), w0, amp(rng)};
    const DqInput u{volt(rng), volt(rng)};
    const Vec4 lin = ss.apply(to_vec4(s), u);
    const StateDerivative d = derivatives(p, s, u, load);
    const Vec4 ref{d.di_d, d.di_q, d.dq, d.domega};
    for (int k = 0; k < 4; ++k) {
      const double scale = std::max(1.0, std::abs(ref[k]));
      CHECK(std::abs(lin[k] - ref[k]) / scale < 1e-12);
    }
  }
}

TEST_CASE("flat inverse satisfies the dynamics along the trajectory") {
  const MotorParams p;
  FlatTrajectory y;
  y.y1 = 0.3;
  y.y1_d = 1.4;
  y.y1_dd = -2.0;
  y.y1_ddd = 5.0;
  y.y2 = 0.1;
  y.y2_d = -0.4;
  y.load = p.C;
  y.load_d = 0.02;

  const FlatInverse fi = flat_inverse(p, y);
  CHECK(fi.state.q == y.y1);
  CHECK(fi.state.omega == y.y1_d);
  CHECK(fi.state.i_d == y.y2);

  const StateDerivative d = derivatives(p, fi.state, fi.input, y.load);
  CHECK(d.dq == doctest::Approx(y.y1_d).epsilon(1e-12));
  CHECK(d.domega == doctest::Approx(y.y1_dd).epsilon(1e-9));
  CHECK(d.di_d == doctest::Approx(y.y2_d).epsilon(1e-9));
  const double i_q_d = (p.J * y.y1_ddd + p.f_v * y.y1_dd + y.load_d) / p.K;
  CHECK(d.di_q == doctest::Approx(i_q_d).epsilon(1e-9));
}

TEST_CASE("flat inverse honors the literal sign convention too") {
  MotorParams p;
  p.paper_literal_signs = true;
  FlatTrajectory y;
  y.y1_d = 2.0;
  y.y1_dd = 1.0;
  y.y1_ddd = -3.0;
  y.y2 = 0.5;
  y.y2_d = 0.1;
  y.load = 0.4;
  const FlatInverse fi = flat_inverse(p, y);
  const StateDerivative d = derivatives(p, fi.state, fi.input, y.load);
  const double i_q_d = (p.J * y.y1_ddd + p.f_v * y.y1_dd + y.load_d) / p.K;
  CHECK(d.di_q == doctest::Approx(i_q_d).epsilon(1e-9));
  CHECK(d.di_d == doctest::Approx(y.y2_d).epsilon(1e-9));
}
