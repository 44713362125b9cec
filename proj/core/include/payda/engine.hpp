#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "payda/kpi.hpp"
#include "payda/model.hpp"
#include "payda/phy.hpp"
#include "payda/sched.hpp"
#include "payda/traffic.hpp"

namespace payda {

struct RunConfig {
  Scenario scenario;
  SchedulerKind scheduler = SchedulerKind::PayDA;
  Millis duration_ms = 300'000;
  int n_runs = 10;
  std::uint64_t base_seed = 1;
  Millis kpi_window_ms = 1000;
  SchedParams sched{};
  Bits queue_cap_bits = 0;  // 0 = uncapped; per-app max_queue_bits wins when set
};

// Snapshot handed to an observer after the scheduling decision of each TTI,
// before transmission. Queue contents are the ones the scheduler saw; the
// cursors are the pre-decision values so the decision can be replayed.
struct TtiContext {
  Millis now = 0;
  const std::vector<DrbQueue>& drbs;
  const AllocationPlan& plan;
  int rr_cursor_before = -1;
  int tie_cursor_before = -1;
};

using TtiObserver = std::function<void(const TtiContext&)>;

struct RunResult {
  RunSummary summary;
  std::vector<KpiRecord> windows;  // ordered by (window_end_ms, drb_id)
};

// One cell, one scheduler, one run. Each TTI advances through a fixed phase
// order: traffic arrival, HOL sampling, deadline-expiry scan, scheduling,
// transmission. Packets that arrive in a TTI are eligible in that same TTI.
class Engine {
 public:
  Engine(RunConfig config, int run_index);

  void set_observer(TtiObserver observer) { observer_ = std::move(observer); }

  void step();
  Millis now() const { return now_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<DrbQueue>& drbs() const { return drbs_; }
  const SchedulerState& sched_state() const { return state_; }
  const KpiCollector& collector() const { return collector_; }

  // Close KPI accounting at the current time and build the run summary.
  RunResult finish();

 private:
  struct Source {
    AppProfile app;
    std::uint64_t next_seq = 1;
  };

  RunConfig config_;
  int run_index_ = 0;
  std::uint64_t seed_ = 0;
  LinkModel link_;
  std::vector<DrbQueue> drbs_;
  std::vector<Source> sources_;
  SchedulerState state_;
  KpiCollector collector_;
  TtiObserver observer_;
  std::vector<Bits> served_;  // per-bearer bits consumed in the current TTI
  Millis now_ = 0;
};

// Run run_index of the configured batch to completion. Deterministic: the
// run seed is base_seed + run_index and drives only the start-offset draw.
RunResult run_one(const RunConfig& config, int run_index, TtiObserver observer = {});

// Scenario family sweep: every (scheduler, n_ues) cell of the grid is run
// n_runs times and averaged. Runs execute on a small thread pool;
// PAYDA_SIM_THREADS caps the worker count. Results do not depend on the
// thread schedule.
struct SweepOptions {
  std::vector<SchedulerKind> schedulers{kAllSchedulers.begin(), kAllSchedulers.end()};
  int ue_min = 1;
  int ue_max = 30;
  Millis duration_ms = 300'000;
  int n_runs = 10;
  std::uint64_t base_seed = 1;
  Millis kpi_window_ms = 1000;
  SchedParams sched{};
  Bits queue_cap_bits = 0;
  StartOffsetMode offset_mode = StartOffsetMode::Equal;
};

struct SweepPoint {
  SchedulerKind scheduler = SchedulerKind::PayDA;
  int n_ues = 0;
  RunSummary mean;  // average_summaries over the point's runs
};

std::vector<SweepPoint> sweep(const std::function<Scenario(int)>& family,
                              const SweepOptions& opts);

}  // namespace payda
