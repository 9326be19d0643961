#include "suntrack/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string_view>

#include "suntrack/units.hpp"

namespace suntrack {

namespace {

using toml::Document;
using toml::ParseError;
using toml::Table;
using toml::Value;

void reject_unknown(const Table& t,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : t.entries) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError(value.line,
                       "unknown key '" + key + "' in [" + t.name + "]");
    }
  }
}

double get_number(const Table& t, const std::string& key, double fallback) {
  const Value* v = t.find(key);
  if (!v) return fallback;
  if (!v->is_number()) {
    throw ParseError(v->line, "[" + t.name + "]." + key + " must be a number");
  }
  return v->as_number();
}

int get_int(const Table& t, const std::string& key, int fallback) {
  const Value* v = t.find(key);
  if (!v) return fallback;
  if (v->kind == Value::Kind::Integer) return static_cast<int>(v->integer);
  if (v->kind == Value::Kind::Float) {
    if (v->number != std::round(v->number)) {
      throw ParseError(v->line,
                       "[" + t.name + "]." + key + " must be an integer");
    }
    return static_cast<int>(v->number);
  }
  throw ParseError(v->line, "[" + t.name + "]." + key + " must be an integer");
}

bool get_bool(const Table& t, const std::string& key, bool fallback) {
  const Value* v = t.find(key);
  if (!v) return fallback;
  if (v->kind != Value::Kind::Boolean) {
    throw ParseError(v->line,
                     "[" + t.name + "]." + key + " must be true or false");
  }
  return v->boolean;
}

std::string get_string(const Table& t, const std::string& key,
                       const std::string& fallback) {
  const Value* v = t.find(key);
  if (!v) return fallback;
  if (v->kind != Value::Kind::String) {
    throw ParseError(v->line,
                     "[" + t.name + "]." + key + " must be a quoted string");
  }
  return v->text;
}

/// Scalar broadcasts to one element; arrays come back element-wise.
std::vector<double> get_number_list(const Table& t, const std::string& key,
                                    std::vector<double> fallback) {
  const Value* v = t.find(key);
  if (!v) return fallback;
  if (v->is_number()) return {v->as_number()};
  if (v->kind != Value::Kind::Array) {
    throw ParseError(v->line, "[" + t.name + "]." + key +
                                  " must be a number or an array of numbers");
  }
  std::vector<double> out;
  out.reserve(v->items.size());
  for (const Value& item : v->items) {
    if (!item.is_number()) {
      throw ParseError(item.line, "[" + t.name + "]." + key +
                                      " must contain only numbers");
    }
    out.push_back(item.as_number());
  }
  if (out.empty()) {
    throw ParseError(v->line, "[" + t.name + "]." + key + " must not be empty");
  }
  return out;
}

/// Angle keys come in radian/degree pairs; exactly one may be present.
double get_angle(const Table& t, const std::string& rad_key,
                 const std::string& deg_key, double fallback_rad,
                 bool* present = nullptr) {
  const Value* rad = t.find(rad_key);
  const Value* deg = t.find(deg_key);
  if (rad && deg) {
    throw ParseError(deg->line, "give either " + rad_key + " or " + deg_key +
                                    ", not both");
  }
  if (present) *present = rad || deg;
  if (rad) return get_number(t, rad_key, 0.0);
  if (deg) return deg2rad(get_number(t, deg_key, 0.0));
  return fallback_rad;
}

MotorParams read_motor(const Table& t) {
  reject_unknown(t, {"R", "L", "J", "K", "f_v", "C", "N", "V_max",
                     "paper_literal_signs"});
  MotorParams p;
  p.R = get_number(t, "R", p.R);
  p.L = get_number(t, "L", p.L);
  p.J = get_number(t, "J", p.J);
  p.K = get_number(t, "K", p.K);
  p.f_v = get_number(t, "f_v", p.f_v);
  p.C = get_number(t, "C", p.C);
  p.N = get_number(t, "N", p.N);
  p.V_max = get_number(t, "V_max", p.V_max);
  p.paper_literal_signs = get_bool(t, "paper_literal_signs", false);
  return p;
}

std::vector<ReferenceProfile> read_reference(const Table& t) {
  reject_unknown(t, {"kind", "axis", "target", "target_deg", "target2",
                     "target2_deg", "t_on", "rise_window", "rate",
                     "rate_deg_s", "rate2", "rate2_deg_s", "latitude_deg",
                     "day_of_year", "speedup", "return_window",
                     "feedforward"});
  ReferenceProfile base;
  const std::string kind = get_string(t, "kind", "step");
  if (kind == "step") {
    base.kind = ProfileKind::Step;
  } else if (kind == "ramp") {
    base.kind = ProfileKind::Ramp;
  } else if (kind == "solar_day") {
    base.kind = ProfileKind::SolarDay;
  } else {
    const Value* v = t.find("kind");
    throw ParseError(v ? v->line : t.line,
                     "[reference].kind must be step, ramp or solar_day");
  }
  base.target = get_angle(t, "target", "target_deg", base.target);
  base.t_on = get_number(t, "t_on", base.t_on);
  base.rise_window = get_number(t, "rise_window", base.rise_window);
  base.rate = get_angle(t, "rate", "rate_deg_s", base.rate);
  base.latitude_deg = get_number(t, "latitude_deg", base.latitude_deg);
  base.day_of_year = get_int(t, "day_of_year", base.day_of_year);
  base.speedup = get_number(t, "speedup", base.speedup);
  base.return_window = get_number(t, "return_window", base.return_window);
  base.feedforward = get_bool(t, "feedforward", base.feedforward);

  const std::string axis = get_string(t, "axis", "azimuth");
  bool second_target = false, second_rate = false;
  const double target2 =
      get_angle(t, "target2", "target2_deg", 0.0, &second_target);
  const double rate2 = get_angle(t, "rate2", "rate2_deg_s", 0.0, &second_rate);

  auto key_line = [&t](std::initializer_list<std::string_view> keys) {
    for (std::string_view k : keys) {
      if (const Value* v = t.find(std::string(k))) return v->line;
    }
    return t.line;
  };

  if (second_target && base.kind != ProfileKind::Step) {
    throw ParseError(key_line({"target2", "target2_deg"}),
                     "target2 only applies to step references");
  }
  if (second_rate && base.kind != ProfileKind::Ramp) {
    throw ParseError(key_line({"rate2", "rate2_deg_s"}),
                     "rate2 only applies to ramp references");
  }

  std::vector<ReferenceProfile> axes;
  if (base.kind == ProfileKind::SolarDay) {
    if (axis == "azimuth") {
      base.solar_axis = SolarAxis::Azimuth;
      axes.push_back(base);
    } else if (axis == "altitude") {
      base.solar_axis = SolarAxis::Altitude;
      axes.push_back(base);
    } else if (axis == "both") {
      base.solar_axis = SolarAxis::Azimuth;
      axes.push_back(base);
      base.solar_axis = SolarAxis::Altitude;
      axes.push_back(base);
    } else {
      throw ParseError(key_line({"axis"}),
                       "[reference].axis must be azimuth, altitude or both");
    }
    return axes;
  }
  if (t.find("axis")) {
    throw ParseError(key_line({"axis"}),
                     "[reference].axis only applies to solar_day references");
  }
  axes.push_back(base);
  if (second_target) {
    ReferenceProfile axis2 = base;
    axis2.target = target2;
    axes.push_back(axis2);
  } else if (second_rate) {
    ReferenceProfile axis2 = base;
    axis2.rate = rate2;
    axes.push_back(axis2);
  }
  return axes;
}

SmcConfig read_smc(const Table& t) {
  reject_unknown(t, {"mu", "m1", "m2", "U0", "h", "mode", "U0_d", "psi_d",
                     "reaching_layer"});
  SmcConfig cfg;
  cfg.surface.mu = get_number(t, "mu", cfg.surface.mu);
  cfg.surface.m1 = get_number(t, "m1", cfg.surface.m1);
  cfg.surface.m2 = get_number(t, "m2", cfg.surface.m2);
  cfg.surface.U0 = get_number(t, "U0", cfg.surface.U0);
  cfg.surface.h = get_number(t, "h", cfg.surface.h);
  const std::string mode = get_string(t, "mode", "position");
  if (mode == "position") {
    cfg.mode = SurfaceKind::Position;
  } else if (mode == "velocity") {
    cfg.mode = SurfaceKind::Velocity;
  } else {
    const Value* v = t.find("mode");
    throw ParseError(v ? v->line : t.line,
                     "[smc].mode must be position or velocity");
  }
  cfg.U0_d = get_number(t, "U0_d", cfg.U0_d);
  cfg.psi_d = get_number(t, "psi_d", cfg.psi_d);
  cfg.reaching_layer = get_number(t, "reaching_layer", cfg.reaching_layer);
  return cfg;
}

SmmmcConfig read_smmmc(const Table& t) {
  reject_unknown(t, {"anchors", "anchors_deg_s", "a", "b", "g", "I", "psi",
                     "u_min", "u_max", "reset_horizon", "plain_validities",
                     "U0_d", "psi_d"});
  SmmmcConfig cfg = default_smmmc_config();

  const Value* anch_rad = t.find("anchors");
  const Value* anch_deg = t.find("anchors_deg_s");
  if (anch_rad && anch_deg) {
    throw ParseError(anch_deg->line,
                     "give either anchors or anchors_deg_s, not both");
  }
  if (anch_rad) {
    cfg.anchors = get_number_list(t, "anchors", cfg.anchors);
  } else if (anch_deg) {
    cfg.anchors = get_number_list(t, "anchors_deg_s", {});
    for (double& a : cfg.anchors) a = deg2rad(a);
  }

  const std::vector<double> a =
      get_number_list(t, "a", {cfg.pid[0].a});
  const std::vector<double> b =
      get_number_list(t, "b", {cfg.pid[0].b});
  const std::vector<double> g =
      get_number_list(t, "g", {cfg.pid[0].g});
  const std::vector<double> I =
      get_number_list(t, "I", {cfg.sw[0].I});
  const std::vector<double> psi =
      get_number_list(t, "psi", {cfg.sw[0].psi});
  const bool min_given = t.find("u_min") != nullptr;
  const bool max_given = t.find("u_max") != nullptr;
  const std::vector<double> u_min =
      get_number_list(t, "u_min", {cfg.sw[0].u_min});
  const std::vector<double> u_max =
      get_number_list(t, "u_max", {cfg.sw[0].u_max});

  const auto broadcast = [&t](const std::vector<double>& v, std::size_t n,
                              const char* key) -> std::vector<double> {
    if (v.size() == n) return v;
    if (v.size() == 1) return std::vector<double>(n, v[0]);
    throw ParseError(t.line, std::string("[smmmc].") + key +
                                 " must be a scalar or have one entry per "
                                 "model");
  };
  const std::size_t n_pid = std::max({a.size(), b.size(), g.size()});
  const std::vector<double> ae = broadcast(a, n_pid, "a");
  const std::vector<double> be = broadcast(b, n_pid, "b");
  const std::vector<double> ge = broadcast(g, n_pid, "g");
  cfg.pid.clear();
  for (std::size_t i = 0; i < n_pid; ++i) {
    cfg.pid.push_back(PidGains{ae[i], be[i], ge[i]});
  }
  const std::size_t n_sw =
      std::max({I.size(), psi.size(), u_min.size(), u_max.size()});
  const std::vector<double> Ie = broadcast(I, n_sw, "I");
  const std::vector<double> pe = broadcast(psi, n_sw, "psi");
  // absent bounds follow the switching amplitude (symmetric, non-binding)
  std::vector<double> lo = broadcast(u_min, n_sw, "u_min");
  std::vector<double> hi = broadcast(u_max, n_sw, "u_max");
  for (std::size_t i = 0; i < n_sw; ++i) {
    if (!min_given) lo[i] = -Ie[i];
    if (!max_given) hi[i] = Ie[i];
  }
  cfg.sw.clear();
  for (std::size_t i = 0; i < n_sw; ++i) {
    cfg.sw.push_back(SwitchingGains{Ie[i], pe[i], lo[i], hi[i]});
  }

  cfg.reset_horizon = get_number(t, "reset_horizon", cfg.reset_horizon);
  cfg.plain_validities =
      get_bool(t, "plain_validities", cfg.plain_validities);
  cfg.U0_d = get_number(t, "U0_d", cfg.U0_d);
  cfg.psi_d = get_number(t, "psi_d", cfg.psi_d);
  return cfg;
}

ObserverConfig read_observer(const Table& t) {
  reject_unknown(t, {"I1", "I2", "mode", "filter_tau", "q_hat0",
                     "omega_hat0"});
  ObserverConfig cfg;
  cfg.gains.I1 = get_number(t, "I1", cfg.gains.I1);
  cfg.gains.I2 = get_number(t, "I2", cfg.gains.I2);
  const std::string mode = get_string(t, "mode", "ground_truth");
  if (mode == "ground_truth") {
    cfg.mode = ObserverMode::GroundTruth;
  } else if (mode == "sensorless") {
    cfg.mode = ObserverMode::Sensorless;
  } else {
    const Value* v = t.find("mode");
    throw ParseError(v ? v->line : t.line,
                     "[observer].mode must be ground_truth or sensorless");
  }
  cfg.filter_tau = get_number(t, "filter_tau", cfg.filter_tau);
  cfg.q_hat0 = get_number(t, "q_hat0", cfg.q_hat0);
  cfg.omega_hat0 = get_number(t, "omega_hat0", cfg.omega_hat0);
  return cfg;
}

DisturbanceConfig read_disturbance(const Table& t) {
  reject_unknown(t, {"kind", "amplitude", "period", "start"});
  DisturbanceConfig cfg;
  const std::string kind = get_string(t, "kind", "none");
  if (kind == "none") {
    cfg.kind = DisturbanceKind::None;
  } else if (kind == "step") {
    cfg.kind = DisturbanceKind::Step;
  } else if (kind == "square") {
    cfg.kind = DisturbanceKind::Square;
  } else if (kind == "sine") {
    cfg.kind = DisturbanceKind::Sine;
  } else {
    const Value* v = t.find("kind");
    throw ParseError(v ? v->line : t.line,
                     "[disturbance].kind must be none, step, square or sine");
  }
  cfg.amplitude = get_number(t, "amplitude", cfg.amplitude);
  cfg.period = get_number(t, "period", cfg.period);
  cfg.start = get_number(t, "start", cfg.start);
  return cfg;
}

void read_sim(const Table& t, Scenario& sc) {
  reject_unknown(t, {"method", "dt", "t_end", "control_dt", "trace_every",
                     "axis_mode", "epoch", "holding_current"});
  const std::string method = get_string(t, "method", "rk4");
  if (method == "rk4") {
    sc.grid.method = Method::Rk4;
  } else if (method == "euler") {
    sc.grid.method = Method::ExplicitEuler;
  } else {
    const Value* v = t.find("method");
    throw ParseError(v ? v->line : t.line,
                     "[sim].method must be rk4 or euler");
  }
  sc.grid.dt = get_number(t, "dt", sc.grid.dt);
  sc.grid.t_end = get_number(t, "t_end", sc.grid.t_end);
  sc.control_dt = get_number(t, "control_dt", sc.control_dt);
  sc.trace_every = get_int(t, "trace_every", sc.trace_every);
  const std::string mode = get_string(t, "axis_mode", "independent");
  if (mode == "independent") {
    sc.axis_mode = AxisMode::Independent;
  } else if (mode == "sequential") {
    sc.axis_mode = AxisMode::Sequential;
  } else {
    const Value* v = t.find("axis_mode");
    throw ParseError(v ? v->line : t.line,
                     "[sim].axis_mode must be independent or sequential");
  }
  sc.epoch = get_number(t, "epoch", sc.epoch);
  sc.start_at_holding_current =
      get_bool(t, "holding_current", sc.start_at_holding_current);
}

EnergyConfig read_energy(const Table& t) {
  reject_unknown(t, {"latitude_deg", "day_of_year", "p_max", "dt_seconds"});
  EnergyConfig cfg;
  cfg.latitude_deg = get_number(t, "latitude_deg", cfg.latitude_deg);
  cfg.day_of_year = get_int(t, "day_of_year", cfg.day_of_year);
  cfg.p_max = get_number(t, "p_max", cfg.p_max);
  cfg.dt_seconds = get_number(t, "dt_seconds", cfg.dt_seconds);
  return cfg;
}

Value num(double v) { return Value::float_value(v); }
Value integer(int v) { return Value::integer_value(v); }
Value boolean(bool v) { return Value::boolean_value(v); }
Value str(std::string s) { return Value::string_value(std::move(s)); }
Value num_array(const std::vector<double>& v) {
  std::vector<Value> items;
  items.reserve(v.size());
  for (double d : v) items.push_back(num(d));
  return Value::array_value(std::move(items));
}

}  // namespace

Scenario scenario_from_document(const Document& doc) {
  for (const Table& t : doc.tables) {
    static constexpr std::string_view known[] = {
        "motor", "reference", "smc", "smmmc",
        "observer", "disturbance", "sim", "energy"};
    if (std::find(std::begin(known), std::end(known), t.name) ==
        std::end(known)) {
      throw ParseError(t.line, "unknown table [" + t.name + "]");
    }
  }

  Scenario sc;
  const Table* motor = doc.find("motor");
  if (!motor) throw ParseError(0, "missing [motor] table");
  sc.motor = read_motor(*motor);

  const Table* reference = doc.find("reference");
  if (!reference) throw ParseError(0, "missing [reference] table");
  sc.axes = read_reference(*reference);

  const Table* smc = doc.find("smc");
  const Table* smmmc = doc.find("smmmc");
  if (smc && smmmc) {
    throw ParseError(smmmc->line, "use exactly one of [smc] or [smmmc]");
  }
  if (!smc && !smmmc) {
    throw ParseError(0, "missing controller table: add [smc] or [smmmc]");
  }
  if (smc) {
    sc.controller = ControllerKind::Smc;
    sc.smc = read_smc(*smc);
  } else {
    sc.controller = ControllerKind::Smmmc;
    sc.smmmc = read_smmmc(*smmmc);
  }

  if (const Table* t = doc.find("observer")) sc.observer = read_observer(*t);
  if (const Table* t = doc.find("disturbance")) {
    sc.disturbance = read_disturbance(*t);
  }
  if (const Table* t = doc.find("sim")) read_sim(*t, sc);
  if (const Table* t = doc.find("energy")) sc.energy = read_energy(*t);

  validate(sc);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  return scenario_from_document(toml::parse_file(path));
}

toml::Document scenario_to_document(const Scenario& sc) {
  validate(sc);
  Document doc;

  Table& motor = doc.get_or_add("motor");
  motor.set("R", num(sc.motor.R));
  motor.set("L", num(sc.motor.L));
  motor.set("J", num(sc.motor.J));
  motor.set("K", num(sc.motor.K));
  motor.set("f_v", num(sc.motor.f_v));
  motor.set("C", num(sc.motor.C));
  motor.set("N", num(sc.motor.N));
  motor.set("V_max", num(sc.motor.V_max));
  motor.set("paper_literal_signs", boolean(sc.motor.paper_literal_signs));

  const ReferenceProfile& base = sc.axes.front();
  if (sc.axes.size() == 2) {
    ReferenceProfile like_first = sc.axes[1];
    switch (base.kind) {
      case ProfileKind::Step: like_first.target = base.target; break;
      case ProfileKind::Ramp: like_first.rate = base.rate; break;
      case ProfileKind::SolarDay: like_first.solar_axis = base.solar_axis; break;
    }
    if (!(like_first == base)) {
      throw std::invalid_argument(
          "two-axis scenarios share every [reference] key except the "
          "per-axis target, rate or solar axis");
    }
  }
  Table& ref = doc.get_or_add("reference");
  switch (base.kind) {
    case ProfileKind::Step: ref.set("kind", str("step")); break;
    case ProfileKind::Ramp: ref.set("kind", str("ramp")); break;
    case ProfileKind::SolarDay: ref.set("kind", str("solar_day")); break;
  }
  if (base.kind == ProfileKind::SolarDay) {
    if (sc.axes.size() == 2) {
      if (base.solar_axis != SolarAxis::Azimuth ||
          sc.axes[1].solar_axis != SolarAxis::Altitude) {
        throw std::invalid_argument(
            "two-axis solar scenarios are azimuth first, altitude second");
      }
      ref.set("axis", str("both"));
    } else {
      ref.set("axis", str(base.solar_axis == SolarAxis::Azimuth
                              ? "azimuth"
                              : "altitude"));
    }
  }
  ref.set("target", num(base.target));
  if (sc.axes.size() == 2 && base.kind == ProfileKind::Step) {
    ref.set("target2", num(sc.axes[1].target));
  }
  ref.set("t_on", num(base.t_on));
  ref.set("rise_window", num(base.rise_window));
  ref.set("rate", num(base.rate));
  if (sc.axes.size() == 2 && base.kind == ProfileKind::Ramp) {
    ref.set("rate2", num(sc.axes[1].rate));
  }
  ref.set("latitude_deg", num(base.latitude_deg));
  ref.set("day_of_year", integer(base.day_of_year));
  ref.set("speedup", num(base.speedup));
  ref.set("return_window", num(base.return_window));
  ref.set("feedforward", boolean(base.feedforward));

  if (sc.controller == ControllerKind::Smc) {
    Table& smc = doc.get_or_add("smc");
    smc.set("mu", num(sc.smc.surface.mu));
    smc.set("m1", num(sc.smc.surface.m1));
    smc.set("m2", num(sc.smc.surface.m2));
    smc.set("U0", num(sc.smc.surface.U0));
    smc.set("h", num(sc.smc.surface.h));
    smc.set("mode", str(sc.smc.mode == SurfaceKind::Position ? "position"
                                                             : "velocity"));
    smc.set("U0_d", num(sc.smc.U0_d));
    smc.set("psi_d", num(sc.smc.psi_d));
    smc.set("reaching_layer", num(sc.smc.reaching_layer));
  } else {
    Table& mm = doc.get_or_add("smmmc");
    mm.set("anchors", num_array(sc.smmmc.anchors));
    std::vector<double> a, b, g;
    for (const PidGains& pg : sc.smmmc.pid) {
      a.push_back(pg.a);
      b.push_back(pg.b);
      g.push_back(pg.g);
    }
    std::vector<double> I, psi, lo, hi;
    for (const SwitchingGains& sg : sc.smmmc.sw) {
      I.push_back(sg.I);
      psi.push_back(sg.psi);
      lo.push_back(sg.u_min);
      hi.push_back(sg.u_max);
    }
    const auto set_list = [&mm](const char* key,
                                const std::vector<double>& v) {
      if (v.size() == 1) {
        mm.set(key, num(v[0]));
      } else {
        mm.set(key, num_array(v));
      }
    };
    set_list("a", a);
    set_list("b", b);
    set_list("g", g);
    set_list("I", I);
    set_list("psi", psi);
    set_list("u_min", lo);
    set_list("u_max", hi);
    mm.set("reset_horizon", num(sc.smmmc.reset_horizon));
    mm.set("plain_validities", boolean(sc.smmmc.plain_validities));
    mm.set("U0_d", num(sc.smmmc.U0_d));
    mm.set("psi_d", num(sc.smmmc.psi_d));
  }

  Table& obs = doc.get_or_add("observer");
  obs.set("I1", num(sc.observer.gains.I1));
  obs.set("I2", num(sc.observer.gains.I2));
  obs.set("mode", str(sc.observer.mode == ObserverMode::GroundTruth
                          ? "ground_truth"
                          : "sensorless"));
  obs.set("filter_tau", num(sc.observer.filter_tau));
  obs.set("q_hat0", num(sc.observer.q_hat0));
  obs.set("omega_hat0", num(sc.observer.omega_hat0));

  Table& dist = doc.get_or_add("disturbance");
  switch (sc.disturbance.kind) {
    case DisturbanceKind::None: dist.set("kind", str("none")); break;
    case DisturbanceKind::Step: dist.set("kind", str("step")); break;
    case DisturbanceKind::Square: dist.set("kind", str("square")); break;
    case DisturbanceKind::Sine: dist.set("kind", str("sine")); break;
  }
  dist.set("amplitude", num(sc.disturbance.amplitude));
  dist.set("period", num(sc.disturbance.period));
  dist.set("start", num(sc.disturbance.start));

  Table& sim = doc.get_or_add("sim");
  sim.set("method",
          str(sc.grid.method == Method::Rk4 ? "rk4" : "euler"));
  sim.set("dt", num(sc.grid.dt));
  sim.set("t_end", num(sc.grid.t_end));
  sim.set("control_dt", num(sc.control_dt));
  sim.set("trace_every", integer(sc.trace_every));
  sim.set("axis_mode", str(sc.axis_mode == AxisMode::Independent
                               ? "independent"
                               : "sequential"));
  sim.set("epoch", num(sc.epoch));
  sim.set("holding_current", boolean(sc.start_at_holding_current));

  if (sc.energy) {
    Table& energy = doc.get_or_add("energy");
    energy.set("latitude_deg", num(sc.energy->latitude_deg));
    energy.set("day_of_year", integer(sc.energy->day_of_year));
    energy.set("p_max", num(sc.energy->p_max));
    energy.set("dt_seconds", num(sc.energy->dt_seconds));
  }
  return doc;
}

std::string scenario_to_toml(const Scenario& sc) {
  return toml::serialize(scenario_to_document(sc));
}

}  // namespace suntrack
