#pragma once

#include <cstdint>
#include <vector>

#include "payda/model.hpp"
#include "payda/sched.hpp"

namespace payda {

// Deadline-miss ratio over decided packets. A packet is decided once it was
// either counted as a miss (expiry or drop) or delivered in time. 0/0 -> 0.
double dmr(std::int64_t missed, std::int64_t decided);

// One KPI window for one bearer. Windows close at multiples of the window
// length; the last window may be shorter when the run length is not a
// multiple. mean_hol_delay_ms averages only TTIs where the queue was
// non-empty; a window with no such TTI repeats the previous window's value.
struct KpiRecord {
  int drb_id = 0;
  Millis window_end_ms = 0;
  double mean_hol_delay_ms = 0.0;
  double dmr = 0.0;
  double throughput_kbps = 0.0;
  std::int64_t packets_generated = 0;
  std::int64_t packets_delivered = 0;
  std::int64_t packets_missed = 0;
  std::int64_t packets_dropped = 0;
  bool operator==(const KpiRecord&) const = default;
};

// Whole-run counters for one bearer. Counters are doubles so that averaging
// across runs keeps ratio KPIs exact (pooled ratios equal ratios of averaged
// counters).
struct DrbKpis {
  double mean_hol_delay_ms = 0.0;
  double dmr = 0.0;
  double throughput_kbps = 0.0;

  double packets_generated = 0.0;
  double packets_delivered = 0.0;
  double packets_missed = 0.0;
  double packets_dropped = 0.0;
  double hits = 0.0;          // delivered and never counted as a miss
  double hol_samples = 0.0;   // TTIs with a non-empty queue
  double hol_sum_ms = 0.0;

  double generated_bits = 0.0;
  double delivered_bits = 0.0;
  double transmitted_bits = 0.0;  // consumed by the MAC, incl. partial packets
  double dropped_bits = 0.0;

  double queued_packets_end = 0.0;
  double queued_size_bits_end = 0.0;       // original sizes of packets still queued
  double queued_remaining_bits_end = 0.0;  // untransmitted bits still queued

  // Recompute the three headline figures from the counters.
  void derive(double duration_ms);

  bool operator==(const DrbKpis&) const = default;
};

struct DrbSummary {
  int drb_id = 0;
  int ue_id = 0;
  QciClass qci;
  DrbKpis kpis;
  bool operator==(const DrbSummary&) const = default;
};

// Aggregate over all bearers of one traffic class. HOL delay and DMR are
// pooled (packet- resp. sample-weighted); throughput is the class total.
struct ClassKpis {
  int n_drbs = 0;
  double mean_hol_delay_ms = 0.0;
  double dmr = 0.0;
  double throughput_kbps = 0.0;
  double packets_missed = 0.0;
  double packets_decided = 0.0;
  double hol_samples = 0.0;
  double hol_sum_ms = 0.0;
  bool operator==(const ClassKpis&) const = default;
};

ClassKpis pool_class(const std::vector<DrbSummary>& drbs, bool is_rt, double duration_ms);

struct RunSummary {
  SchedulerKind scheduler = SchedulerKind::PayDA;
  int n_ues = 0;
  std::uint64_t seed = 0;
  int run_index = 0;  // -1 in an averaged summary
  int n_runs = 1;
  Millis duration_ms = 0;
  std::vector<DrbSummary> drbs;
  ClassKpis rt;
  ClassKpis nrt;
  bool operator==(const RunSummary&) const = default;
};

// Average several runs of the same setup into one summary: counters become
// per-run means, headline KPIs are re-derived, so ratios stay pooled across
// the whole batch. seed is cleared and run_index set to -1.
RunSummary average_summaries(const std::vector<RunSummary>& runs);

// Streaming KPI accounting for one run. The engine reports events as they
// happen; the collector closes windows on TTI boundaries.
class KpiCollector {
 public:
  KpiCollector(std::vector<int> drb_ids, Millis window_ms);

  void on_generated(int drb_index, const Packet& p);
  // A packet rejected at enqueue. Counts as dropped and as a decided miss.
  void on_dropped(int drb_index, const Packet& p);
  void on_hol_sample(int drb_index, Millis hol_delay_ms);
  void on_deadline_miss(int drb_index, const Packet& p);
  void on_transmitted(int drb_index, Bits bits);
  void on_delivered(int drb_index, const Packet& p);
  // Call once per TTI with the time at which the TTI ends.
  void on_tti_end(Millis tti_end_ms);

  // Close the final (possibly partial) window and build per-bearer totals.
  // `queues` supplies the end-of-run queue occupancy, in drb_index order.
  std::vector<DrbKpis> finalize(Millis duration_ms, const std::vector<DrbQueue>& queues);

  const std::vector<KpiRecord>& windows() const { return windows_; }

 private:
  struct WindowAcc {
    double hol_sum_ms = 0.0;
    std::int64_t hol_samples = 0;
    Bits transmitted_bits = 0;
    std::int64_t generated = 0, delivered = 0, missed = 0, dropped = 0, hits = 0;
    double last_mean_hol_ms = 0.0;  // carried into empty windows
  };

  void flush(Millis window_end_ms);

  std::vector<int> drb_ids_;
  Millis window_ms_;
  Millis last_flush_ms_ = 0;
  std::vector<WindowAcc> window_;
  std::vector<DrbKpis> total_;
  std::vector<KpiRecord> windows_;
};

// Trailing moving average of an irregular time series. Output points sit at
// multiples of window_ms up to end_ms (plus a final partial window when
// end_ms is not a multiple); each value is the mean of samples with
// t in [end - window, end). Samples must be sorted by t.
enum class EmptyWindowPolicy { HoldLast, Zero };

struct Sample {
  Millis t = 0;
  double value = 0.0;
  bool operator==(const Sample&) const = default;
};

std::vector<Sample> moving_average(const std::vector<Sample>& samples, Millis window_ms,
                                   Millis end_ms, EmptyWindowPolicy policy);

}  // namespace payda
