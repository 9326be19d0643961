#include "suntrack/motor_plant.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace suntrack {

namespace {

bool finite(double x) { return std::isfinite(x); }

void require_finite(double x, const char* what) {
  if (!finite(x)) {
    throw std::invalid_argument(std::string("non-finite ") + what);
  }
}

}  // namespace

void validate(const MotorParams& p) {
  for (auto [v, name] : {std::pair{p.R, "R"}, {p.L, "L"}, {p.J, "J"},
                         {p.K, "K"}, {p.f_v, "f_v"}, {p.C, "C"}, {p.N, "N"},
                         {p.V_max, "V_max"}}) {
    require_finite(v, name);
  }
  if (p.R <= 0.0) throw std::invalid_argument("motor R must be > 0");
  if (p.L <= 0.0) throw std::invalid_argument("motor L must be > 0");
  if (p.J <= 0.0) throw std::invalid_argument("motor J must be > 0");
  if (p.K <= 0.0) throw std::invalid_argument("motor K must be > 0");
  if (p.f_v < 0.0) throw std::invalid_argument("motor f_v must be >= 0");
  if (p.N < 0.0) throw std::invalid_argument("motor N must be >= 0");
  if (p.V_max <= 0.0) throw std::invalid_argument("motor V_max must be > 0");
}

StateDerivative derivatives(const MotorParams& p, const MotorState& s,
                            const DqInput& u, double load_torque) {
  require_finite(s.i_d, "i_d");
  require_finite(s.i_q, "i_q");
  require_finite(s.omega, "omega");
  require_finite(s.q, "q");
  require_finite(u.v_d, "v_d");
  require_finite(u.v_q, "v_q");
  require_finite(load_torque, "load torque");
  if (p.L == 0.0 || p.J == 0.0) {
    throw std::invalid_argument("motor L and J must be nonzero");
  }

  const double coupling = p.paper_literal_signs ? 1.0 : -1.0;
  StateDerivative d;
  d.di_d = (u.v_d - p.R * s.i_d + p.N * p.L * s.omega * s.i_q) / p.L;
  d.di_q = (u.v_q - p.R * s.i_q + coupling * p.N * p.L * s.omega * s.i_d -
            p.K * s.omega) /
           p.L;
  d.domega = (p.K * s.i_q - p.f_v * s.omega - load_torque) / p.J;
  d.dq = s.omega;
  return d;
}

Vec4 to_vec4(const MotorState& s) { return {s.i_d, s.i_q, s.q, s.omega}; }

MotorState from_vec4(const Vec4& x) {
  return MotorState{x[0], x[1], x[3], x[2]};
}

Vec4 StateSpace::apply(const Vec4& x, const DqInput& u) const {
  Vec4 out{};
  for (int r = 0; r < 4; ++r) {
    out[r] = A[r][0] * x[0] + A[r][1] * x[1] + A[r][2] * x[2] +
             A[r][3] * x[3] + B[r][0] * u.v_d + B[r][1] * u.v_q + p_aff[r];
  }
  return out;
}

StateSpace state_space(const MotorParams& p, double omega_frozen,
                       double load_torque) {
  validate(p);
  require_finite(omega_frozen, "frozen velocity");
  require_finite(load_torque, "load torque");

  const double coupling = p.paper_literal_signs ? 1.0 : -1.0;
  StateSpace ss;
  // row 0: i_d
  ss.A[0] = {-p.R / p.L, p.N * omega_frozen, 0.0, 0.0};
  // row 1: i_q
  ss.A[1] = {coupling * p.N * omega_frozen, -p.R / p.L, 0.0, -p.K / p.L};
  // row 2: q
  ss.A[2] = {0.0, 0.0, 0.0, 1.0};
  // row 3: omega
  ss.A[3] = {0.0, p.K / p.J, 0.0, -p.f_v / p.J};

  ss.B[0] = {1.0 / p.L, 0.0};
  ss.B[1] = {0.0, 1.0 / p.L};
  ss.B[2] = {0.0, 0.0};
  ss.B[3] = {0.0, 0.0};

  ss.p_aff = {0.0, 0.0, 0.0, -load_torque / p.J};
  return ss;
}

FlatInverse flat_inverse(const MotorParams& p, const FlatTrajectory& y) {
  validate(p);
  for (auto [v, name] :
       {std::pair{y.y1, "y1"}, {y.y1_d, "y1_d"}, {y.y1_dd, "y1_dd"},
        {y.y1_ddd, "y1_ddd"}, {y.y2, "y2"}, {y.y2_d, "y2_d"},
        {y.load, "load"}, {y.load_d, "load_d"}}) {
    require_finite(v, name);
  }

  const double coupling = p.paper_literal_signs ? 1.0 : -1.0;
  FlatInverse out;
  out.state.q = y.y1;
  out.state.omega = y.y1_d;
  out.state.i_d = y.y2;
  out.state.i_q = (p.J * y.y1_dd + p.f_v * y.y1_d + y.load) / p.K;

  const double i_q_d = (p.J * y.y1_ddd + p.f_v * y.y1_dd + y.load_d) / p.K;
  out.input.v_d = p.L * y.y2_d + p.R * y.y2 -
                  p.N * p.L * y.y1_d * out.state.i_q;
  out.input.v_q = p.L * i_q_d + p.R * out.state.i_q -
                  coupling * p.N * p.L * y.y1_d * y.y2 + p.K * y.y1_d;
  return out;
}

}  // namespace suntrack
