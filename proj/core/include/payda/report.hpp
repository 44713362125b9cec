#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "payda/engine.hpp"
#include "payda/kpi.hpp"

namespace payda {

// One timeseries.csv line: the KPI window of one bearer in one run.
struct OutputRow {
  int run = 0;
  SchedulerKind scheduler = SchedulerKind::PayDA;
  int n_ues = 0;
  double time_s = 0.0;
  int ue_id = 0;
  int drb_id = 0;
  int qci = 0;
  bool is_rt = false;
  double hol_delay_ms = 0.0;
  double dmr = 0.0;
  double throughput_kbps = 0.0;
  bool operator==(const OutputRow&) const = default;
};

// Fixed float formatting for CSV output: 6 significant digits.
std::string fmt_g6(double value);

// Expand one finished run into rows, ordered by (window, drb).
std::vector<OutputRow> make_rows(const RunResult& result);

// Header plus one line per row, LF endings. Rows are written as given;
// callers pass them ordered by (run, time, drb).
void write_timeseries_csv(std::ostream& out, const std::vector<OutputRow>& rows);

// Contents of summary.json: every run of the batch plus the cross-run mean.
struct SummaryFile {
  std::vector<RunSummary> runs;
  RunSummary mean;
  bool operator==(const SummaryFile&) const = default;
};

void write_summary_json(std::ostream& out, const SummaryFile& summary);

// Inverse of write_summary_json; throws std::runtime_error on malformed
// input. Round-trips every field exactly.
SummaryFile read_summary_json(std::istream& in);

// sweep.csv: one line per (scheduler, n_ues) grid point. DMR is pooled over
// both classes; throughput is the cell total.
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);

}  // namespace payda
