#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "suntrack/scenario.hpp"
#include "suntrack/sim_harness.hpp"
#include "suntrack/sun_reference.hpp"
#include "suntrack/toml_lite.hpp"
#include "suntrack/trace_io.hpp"

namespace fs = std::filesystem;

namespace {

using namespace suntrack;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  return out;
}

std::vector<SimMetrics> all_axis_metrics(const RunResult& rr,
                                         const Scenario& sc) {
  std::vector<SimMetrics> per_axis;
  per_axis.reserve(rr.trace.axes.size());
  for (std::size_t a = 0; a < rr.trace.axes.size(); ++a) {
    per_axis.push_back(metrics(rr, sc, a));
  }
  return per_axis;
}

int cmd_run(const std::string& file, const std::string& out_dir, bool as_json,
            bool gnuplot) {
  const Scenario sc = load_scenario(file);
  const RunResult rr = run(sc);

  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  write_trace_csv_file(rr.trace, (out / "trace.csv").string());
  if (gnuplot) {
    auto gp = open_out(out / "plot.gp");
    write_gnuplot_script(rr.trace, "trace.csv", gp);
  }
  if (rr.aborted) {
    std::cerr << "error: run aborted at t=" << fmt(rr.abort_time) << ": "
              << rr.diagnostic << " (partial trace written)\n";
    return 2;
  }

  const std::vector<SimMetrics> per_axis = all_axis_metrics(rr, sc);
  if (as_json) {
    auto f = open_out(out / "metrics.json");
    write_metrics_json(per_axis, f);
    write_metrics_json(per_axis, std::cout);
  } else {
    auto f = open_out(out / "metrics.txt");
    write_metrics_text(per_axis, f);
    write_metrics_text(per_axis, std::cout);
  }
  return 0;
}

int cmd_compare(const std::string& file_a, const std::string& file_b,
                const std::string& out_dir, bool as_json) {
  const Scenario sa = load_scenario(file_a);
  const Scenario sb = load_scenario(file_b);
  check_comparable(sa, sb);

  const RunResult ra = run(sa);
  const RunResult rb = run(sb);

  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  write_trace_csv_file(ra.trace, (out / "trace_a.csv").string());
  write_trace_csv_file(rb.trace, (out / "trace_b.csv").string());
  if (ra.aborted || rb.aborted) {
    if (ra.aborted) {
      std::cerr << "error: run A aborted at t=" << fmt(ra.abort_time) << ": "
                << ra.diagnostic << '\n';
    }
    if (rb.aborted) {
      std::cerr << "error: run B aborted at t=" << fmt(rb.abort_time) << ": "
                << rb.diagnostic << '\n';
    }
    std::cerr << "partial traces written\n";
    return 2;
  }

  const CompareReport rep = compare(ra, sa, rb, sb);
  if (as_json) {
    auto f = open_out(out / "compare.json");
    write_compare_json(rep, f);
    write_compare_json(rep, std::cout);
  } else {
    auto f = open_out(out / "compare.txt");
    write_compare_text(rep, f);
    write_compare_text(rep, std::cout);
  }
  return 0;
}

int cmd_energy(double lat, int day, double dt, double p_max) {
  EnergyConfig cfg;
  cfg.latitude_deg = lat;
  cfg.day_of_year = day;
  cfg.dt_seconds = dt;
  cfg.p_max = p_max;
  validate(cfg);
  const DailyEnergy e = daily_energy(cfg.latitude_deg, cfg.day_of_year,
                                     cfg.p_max, cfg.dt_seconds);
  std::cout << "fixed_wh=" << fmt(e.fixed_wh) << '\n';
  std::cout << "tracked_wh=" << fmt(e.tracked_wh) << '\n';
  std::cout << "gain=" << fmt(e.gain()) << '\n';
  std::cout << "gain_pct=" << fmt(100.0 * e.gain()) << '\n';
  return 0;
}

int cmd_sweep(const std::string& file, const std::string& param,
              const std::vector<double>& values, const std::string& out_dir) {
  if (values.empty()) throw std::invalid_argument("no sweep values given");
  toml::Document doc = toml::parse_file(file);

  fs::create_directories(out_dir);
  auto csv = open_out(fs::path(out_dir) / "sweep.csv");
  csv << param
      << ",settling_time_2pct,settled,steady_state_error,chattering_pp,"
         "switching_rate,rms_control,max_observer_error,"
         "reaching_violation_frac\n";

  for (double value : values) {
    toml::set_scalar(doc, param, value);
    const Scenario sc = scenario_from_document(doc);
    const RunResult rr = run(sc);
    if (rr.aborted) {
      std::cout << param << "=" << fmt(value) << " aborted at t="
                << fmt(rr.abort_time) << ": " << rr.diagnostic << '\n';
      csv << fmt(value) << ",,,,,,,,\n";
      continue;
    }
    const SimMetrics m = metrics(rr, sc, 0);
    std::cout << param << "=" << fmt(value)
              << " settling=" << fmt(m.settling_time_2pct)
              << " sse=" << fmt(m.steady_state_error)
              << " chattering_pp=" << fmt(m.chattering_pp)
              << " switching_rate=" << fmt(m.switching_rate) << '\n';
    csv << fmt(value) << ',' << fmt(m.settling_time_2pct) << ','
        << (m.settled ? 1 : 0) << ',' << fmt(m.steady_state_error) << ','
        << fmt(m.chattering_pp) << ',' << fmt(m.switching_rate) << ','
        << fmt(m.rms_control) << ',' << fmt(m.max_observer_error) << ','
        << fmt(m.reaching_violation_frac) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closed-loop sun tracker simulation"};
  app.require_subcommand(1);

  std::string scenario_file;
  std::string file_b;
  std::string out_dir = ".";
  bool as_json = false;
  bool gnuplot = false;

  CLI::App* run_cmd = app.add_subcommand("run", "simulate one scenario file");
  run_cmd->add_option("file", scenario_file, "scenario file")->required();
  run_cmd->add_option("--out", out_dir, "output directory (default .)");
  run_cmd->add_flag("--json", as_json, "emit metrics as JSON");
  run_cmd->add_flag("--gnuplot-script", gnuplot,
                    "also write plot.gp next to trace.csv");

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "run two scenarios and pair their metrics");
  compare_cmd->add_option("a", scenario_file, "first scenario file")
      ->required();
  compare_cmd->add_option("b", file_b, "second scenario file")->required();
  compare_cmd->add_option("--out", out_dir, "output directory (default .)");
  compare_cmd->add_flag("--json", as_json, "emit the report as JSON");

  double lat = 35.0;
  int day = 81;
  double energy_dt = 60.0;
  double p_max = 1.0;
  CLI::App* energy_cmd = app.add_subcommand(
      "energy", "daily panel energy, fixed mount vs tracked");
  energy_cmd->add_option("--lat", lat, "latitude in degrees")->required();
  energy_cmd->add_option("--day", day, "day of year (1..365)")->required();
  energy_cmd->add_option("--dt", energy_dt, "integration step in seconds");
  energy_cmd->add_option("--pmax", p_max, "panel peak power in watts");

  std::string sweep_param;
  std::vector<double> sweep_values;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "rerun a scenario over several values of one parameter");
  sweep_cmd->add_option("file", scenario_file, "scenario file")->required();
  sweep_cmd
      ->add_option("--param", sweep_param,
                   "table.key path of a value present in the file")
      ->required();
  sweep_cmd->add_option("--values", sweep_values, "comma separated values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--out", out_dir, "output directory (default .)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return cmd_run(scenario_file, out_dir, as_json, gnuplot);
    }
    if (compare_cmd->parsed()) {
      return cmd_compare(scenario_file, file_b, out_dir, as_json);
    }
    if (energy_cmd->parsed()) {
      return cmd_energy(lat, day, energy_dt, p_max);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(scenario_file, sweep_param, sweep_values, out_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
