#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "suntrack/sim_harness.hpp"

namespace suntrack {

/// Column layout: t, then per axis a (1-based suffix):
/// q_a, omega_a, q_hat_a, omega_hat_a, q_ref_a, i_d_a, i_q_a, u_a, s_a,
/// s_dot_a, S_a, s1_a..sN_a, v1_a..vN_a, dist_a, clamped_a.
/// The per-model columns are always present (N = bank_columns); runs that
/// produce no value for a column leave its cells empty. Floats are %.17g,
/// rows are decimated by trace_every, line endings are LF.
std::vector<std::string> trace_csv_header(const SimTrace& trace);
void write_trace_csv(const SimTrace& trace, std::ostream& os);
void write_trace_csv_file(const SimTrace& trace, const std::string& path);

/// key=value lines, one metric per line, keys prefixed axis_<n>.
void write_metrics_text(const std::vector<SimMetrics>& per_axis,
                        std::ostream& os);
/// One JSON object per axis under "axis_<n>"; non-finite values are null.
void write_metrics_json(const std::vector<SimMetrics>& per_axis,
                        std::ostream& os);

void write_compare_text(const CompareReport& rep, std::ostream& os);
void write_compare_json(const CompareReport& rep, std::ostream& os);

/// Minimal gnuplot script plotting position against its reference for every
/// axis of the given CSV.
void write_gnuplot_script(const SimTrace& trace, const std::string& csv_name,
                          std::ostream& os);

}  // namespace suntrack
