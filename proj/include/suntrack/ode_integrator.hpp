#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace suntrack {

enum class Method { ExplicitEuler, Rk4 };

/// Fixed-step integration grid. Everything downstream assumes the grid is
/// uniform, so dt and t_end are validated once here.
struct SimGrid {
  Method method = Method::Rk4;
  double dt = 1e-4;
  double t_end = 100.0;

  bool operator==(const SimGrid&) const = default;
};

inline void validate(const SimGrid& g) {
  if (!std::isfinite(g.dt) || g.dt <= 0.0) {
    throw std::invalid_argument("integrator dt must be finite and > 0");
  }
  if (!std::isfinite(g.t_end) || g.t_end < g.dt) {
    throw std::invalid_argument("integrator t_end must be >= dt");
  }
  if (g.t_end / g.dt > 1e8) {
    throw std::invalid_argument("integrator step count exceeds 1e8");
  }
}

inline std::size_t step_count(const SimGrid& g) {
  return static_cast<std::size_t>(g.t_end / g.dt + 0.5);
}

namespace detail {

template <std::size_t N>
void check_finite(const std::array<double, N>& x, double t) {
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw std::runtime_error("non-finite state at t=" + std::to_string(t));
    }
  }
}

}  // namespace detail

/// One explicit step of xdot = f(t, x). `f` returns the derivative array;
/// inputs held by the caller are zero-order-hold across the step by
/// construction (f closes over them and they do not change mid-step).
template <std::size_t N, class F>
std::array<double, N> integrate_step(F&& f, const std::array<double, N>& x,
                                     double t, double dt, Method method) {
  detail::check_finite<N>(x, t);
  std::array<double, N> out{};
  if (method == Method::ExplicitEuler) {
    const std::array<double, N> k1 = f(t, x);
    for (std::size_t i = 0; i < N; ++i) out[i] = x[i] + dt * k1[i];
  } else {
    const std::array<double, N> k1 = f(t, x);
    std::array<double, N> tmp{};
    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    const std::array<double, N> k2 = f(t + 0.5 * dt, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    const std::array<double, N> k3 = f(t + 0.5 * dt, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + dt * k3[i];
    const std::array<double, N> k4 = f(t + dt, tmp);
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  detail::check_finite<N>(out, t + dt);
  return out;
}

}  // namespace suntrack
