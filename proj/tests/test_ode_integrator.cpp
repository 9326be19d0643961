#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>

#include "doctest.h"
#include "suntrack/ode_integrator.hpp"

using namespace suntrack;

namespace {

std::array<double, 1> decay(double, const std::array<double, 1>& x) {
  return {-x[0]};
}

double integrate_decay(double dt, Method method) {
  std::array<double, 1> x{1.0};
  double t = 0.0;
  const int n = static_cast<int>(std::lround(1.0 / dt));
  for (int i = 0; i < n; ++i) {
    x = integrate_step<1>(decay, x, t, dt, method);
    t += dt;
  }
  return x[0];
}

}  // namespace

TEST_CASE("grid validation") {
  SimGrid g;
  CHECK_NOTHROW(validate(g));
  CHECK(step_count(g) == 1000000);

  g.dt = 0.0;
  CHECK_THROWS_AS(validate(g), std::invalid_argument);
  g = SimGrid{};
  g.t_end = 1e-6;
  CHECK_THROWS_AS(validate(g), std::invalid_argument);
  g = SimGrid{};
  g.dt = 1e-9;
  CHECK_THROWS_AS(validate(g), std::invalid_argument);  // > 1e8 steps
}

TEST_CASE("euler step is the textbook formula") {
  const std::array<double, 1> x{2.0};
  const auto out = integrate_step<1>(decay, x, 0.0, 0.25, Method::ExplicitEuler);
  CHECK(out[0] == 2.0 + 0.25 * (-2.0));
}

TEST_CASE("one rk4 step on exponential decay hits the quartic taylor factor") {
  const std::array<double, 1> x{1.0};
  const auto out = integrate_step<1>(decay, x, 0.0, 0.1, Method::Rk4);
  CHECK(out[0] == doctest::Approx(0.9048375).epsilon(1e-15));
}

TEST_CASE("rk4 integrates exp decay to 1e-6 at dt = 0.1") {
  const double x1 = integrate_decay(0.1, Method::Rk4);
  CHECK(std::abs(x1 - 0.36787944117144233) < 1e-6);
}

TEST_CASE("halving dt cuts the rk4 global error about sixteenfold") {
  const double exact = 0.36787944117144233;
  const double e1 = std::abs(integrate_decay(0.1, Method::Rk4) - exact);
  const double e2 = std::abs(integrate_decay(0.05, Method::Rk4) - exact);
  const double factor = e1 / e2;
  CHECK(factor > 14.0);
  CHECK(factor < 18.0);
}

TEST_CASE("euler is first order on the same problem") {
  const double exact = 0.36787944117144233;
  const double e1 = std::abs(integrate_decay(0.01, Method::ExplicitEuler) - exact);
  const double e2 = std::abs(integrate_decay(0.005, Method::ExplicitEuler) - exact);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("non-finite states abort with a timestamped diagnostic") {
  const auto blow_up = [](double, const std::array<double, 1>&) {
    return std::array<double, 1>{std::numeric_limits<double>::infinity()};
  };
  const std::array<double, 1> x{1.0};
  CHECK_THROWS_WITH_AS(integrate_step<1>(blow_up, x, 2.5, 0.1, Method::ExplicitEuler),
                       doctest::Contains("non-finite state at t="),
                       std::runtime_error);

  const std::array<double, 1> bad{NAN};
  CHECK_THROWS_AS(integrate_step<1>(decay, bad, 0.0, 0.1, Method::Rk4),
                  std::runtime_error);
}
