#include "suntrack/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace suntrack {

namespace {

void append_float(std::string& out, double v) {
  if (std::isnan(v)) return;  // empty cell
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

std::string format_metric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json metrics_json(const SimMetrics& m) {
  const auto field = [](double v) -> nlohmann::json {
    if (!std::isfinite(v)) return nullptr;
    return v;
  };
  return nlohmann::json{
      {"settling_time_2pct", field(m.settling_time_2pct)},
      {"settled", m.settled},
      {"band", field(m.band)},
      {"steady_state_error", field(m.steady_state_error)},
      {"chattering_pp", field(m.chattering_pp)},
      {"switching_rate", field(m.switching_rate)},
      {"rms_control", field(m.rms_control)},
      {"max_observer_error", field(m.max_observer_error)},
      {"reaching_violation_frac", field(m.reaching_violation_frac)},
      {"energy_gain", field(m.energy_gain)},
  };
}

void metrics_lines(const SimMetrics& m, const std::string& prefix,
                   std::ostream& os) {
  os << prefix << "settling_time_2pct=" << format_metric(m.settling_time_2pct)
     << '\n';
  os << prefix << "settled=" << (m.settled ? "true" : "false") << '\n';
  os << prefix << "band=" << format_metric(m.band) << '\n';
  os << prefix << "steady_state_error=" << format_metric(m.steady_state_error)
     << '\n';
  os << prefix << "chattering_pp=" << format_metric(m.chattering_pp) << '\n';
  os << prefix << "switching_rate=" << format_metric(m.switching_rate) << '\n';
  os << prefix << "rms_control=" << format_metric(m.rms_control) << '\n';
  os << prefix << "max_observer_error=" << format_metric(m.max_observer_error)
     << '\n';
  os << prefix
     << "reaching_violation_frac=" << format_metric(m.reaching_violation_frac)
     << '\n';
  os << prefix << "energy_gain=" << format_metric(m.energy_gain) << '\n';
}

}  // namespace

std::vector<std::string> trace_csv_header(const SimTrace& trace) {
  std::vector<std::string> cols;
  cols.push_back("t");
  for (std::size_t a = 1; a <= trace.axes.size(); ++a) {
    const std::string suffix = "_" + std::to_string(a);
    for (const char* base :
         {"q", "omega", "q_hat", "omega_hat", "q_ref", "i_d", "i_q", "u", "s",
          "s_dot", "S"}) {
      cols.push_back(base + suffix);
    }
    for (int m = 1; m <= trace.bank_columns; ++m) {
      cols.push_back("s" + std::to_string(m) + suffix);
    }
    for (int m = 1; m <= trace.bank_columns; ++m) {
      cols.push_back("v" + std::to_string(m) + suffix);
    }
    cols.push_back("dist" + suffix);
    cols.push_back("clamped" + suffix);
  }
  return cols;
}

void write_trace_csv(const SimTrace& trace, std::ostream& os) {
  if (trace.axes.empty()) {
    throw std::invalid_argument("trace has no axes");
  }
  std::string row;
  const std::vector<std::string> header = trace_csv_header(trace);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) row += ',';
    row += header[i];
  }
  row += '\n';
  os << row;

  const int every = trace.trace_every > 0 ? trace.trace_every : 1;
  for (std::size_t k = 0; k < trace.t.size();
       k += static_cast<std::size_t>(every)) {
    row.clear();
    append_float(row, trace.t[k]);
    for (const AxisTrace& ax : trace.axes) {
      for (const std::vector<double>* col :
           {&ax.q, &ax.omega, &ax.q_hat, &ax.omega_hat, &ax.q_ref, &ax.i_d,
            &ax.i_q, &ax.u, &ax.s, &ax.s_dot, &ax.S}) {
        row += ',';
        append_float(row, (*col)[k]);
      }
      for (const auto& per_model : {&ax.s_models, &ax.v_models}) {
        for (const std::vector<double>& col : *per_model) {
          row += ',';
          if (!col.empty()) append_float(row, col[k]);
        }
      }
      row += ',';
      append_float(row, ax.dist[k]);
      row += ',';
      row += ax.clamped[k] ? '1' : '0';
    }
    row += '\n';
    os << row;
  }
}

void write_trace_csv_file(const SimTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_trace_csv(trace, out);
}

void write_metrics_text(const std::vector<SimMetrics>& per_axis,
                        std::ostream& os) {
  for (std::size_t a = 0; a < per_axis.size(); ++a) {
    metrics_lines(per_axis[a], "axis_" + std::to_string(a + 1) + ".", os);
  }
}

void write_metrics_json(const std::vector<SimMetrics>& per_axis,
                        std::ostream& os) {
  nlohmann::json doc;
  for (std::size_t a = 0; a < per_axis.size(); ++a) {
    doc["axis_" + std::to_string(a + 1)] = metrics_json(per_axis[a]);
  }
  os << doc.dump(2) << '\n';
}

void write_compare_text(const CompareReport& rep, std::ostream& os) {
  metrics_lines(rep.a, "a.", os);
  metrics_lines(rep.b, "b.", os);
  os << "a_aborted=" << (rep.a_aborted ? "true" : "false") << '\n';
  os << "b_aborted=" << (rep.b_aborted ? "true" : "false") << '\n';
  os << "chattering_ratio=" << format_metric(rep.chattering_ratio) << '\n';
  os << "switching_ratio=" << format_metric(rep.switching_ratio) << '\n';
  os << "settling_ratio=" << format_metric(rep.settling_ratio) << '\n';
  os << "steady_state_error_ratio="
     << format_metric(rep.steady_state_error_ratio) << '\n';
}

void write_compare_json(const CompareReport& rep, std::ostream& os) {
  const auto field = [](double v) -> nlohmann::json {
    if (!std::isfinite(v)) return nullptr;
    return v;
  };
  nlohmann::json doc{
      {"a", metrics_json(rep.a)},
      {"b", metrics_json(rep.b)},
      {"a_aborted", rep.a_aborted},
      {"b_aborted", rep.b_aborted},
      {"chattering_ratio", field(rep.chattering_ratio)},
      {"switching_ratio", field(rep.switching_ratio)},
      {"settling_ratio", field(rep.settling_ratio)},
      {"steady_state_error_ratio", field(rep.steady_state_error_ratio)},
  };
  os << doc.dump(2) << '\n';
}

void write_gnuplot_script(const SimTrace& trace, const std::string& csv_name,
                          std::ostream& os) {
  os << "set datafile separator \",\"\n";
  os << "set xlabel \"t [s]\"\n";
  os << "set ylabel \"position [rad]\"\n";
  os << "plot ";
  const std::size_t block = 13 + 2 * static_cast<std::size_t>(
                                        trace.bank_columns);
  for (std::size_t a = 0; a < trace.axes.size(); ++a) {
    const std::size_t q_col = 2 + a * block;
    const std::size_t q_ref_col = 6 + a * block;
    if (a) os << ", ";
    os << "\"" << csv_name << "\" using 1:" << q_col
       << " with lines title \"q_" << a + 1 << "\", ";
    os << "\"" << csv_name << "\" using 1:" << q_ref_col
       << " with lines title \"q_ref_" << a + 1 << "\"";
  }
  os << '\n';
}

}  // namespace suntrack
