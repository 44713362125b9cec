#include "payda/engine.hpp"

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>

namespace payda {

namespace {

std::vector<int> drb_ids_of(const std::vector<Scenario::DrbSpec>& specs) {
  std::vector<int> ids;
  ids.reserve(specs.size());
  for (const Scenario::DrbSpec& s : specs) ids.push_back(s.drb_id);
  return ids;
}

}  // namespace

Engine::Engine(RunConfig config, int run_index)
    : config_(std::move(config)),
      run_index_(run_index),
      seed_(config_.base_seed + static_cast<std::uint64_t>(run_index)),
      link_(LinkModel::from_cell(config_.scenario.cell)),
      collector_(drb_ids_of(config_.scenario.drbs()), config_.kpi_window_ms) {
  if (run_index < 0 || run_index >= config_.n_runs)
    throw std::invalid_argument("Engine: run_index outside [0, n_runs)");
  // duration_ms == 0 is a legal degenerate run: empty summary, all counters 0.
  if (config_.duration_ms < 0) throw std::invalid_argument("Engine: duration_ms must be >= 0");

  // The run seed drives the start-offset draw only; raw 64-bit words modulo
  // the window keep the draw independent of the standard library's
  // distribution implementation.
  std::mt19937_64 rng(seed_);
  const auto specs = config_.scenario.drbs();
  drbs_.reserve(specs.size());
  sources_.reserve(specs.size());
  for (const Scenario::DrbSpec& spec : specs) {
    const Bits cap = spec.app.max_queue_bits > 0 ? spec.app.max_queue_bits : config_.queue_cap_bits;
    drbs_.emplace_back(spec.drb_id, spec.ue_id, spec.app.qci, cap);
    Source src{spec.app, 1};
    if (config_.scenario.offset_mode == StartOffsetMode::SeededRandom) {
      assert(config_.scenario.offset_window_ms > 0);
      src.app.start_offset_ms = static_cast<Millis>(
          rng() % static_cast<std::uint64_t>(config_.scenario.offset_window_ms));
    }
    sources_.push_back(std::move(src));
  }
  state_.params = config_.sched;
  state_.reset(drbs_.size());
  served_.assign(drbs_.size(), 0);
}

void Engine::step() {
  const Millis tti = config_.scenario.cell.tti_ms;
  const int n = static_cast<int>(drbs_.size());

  // 1. Traffic arrival. Packets arriving now compete in this TTI already.
  for (int i = 0; i < n; ++i) {
    Source& src = sources_[i];
    std::optional<Packet> pkt = generate(src.app, now_);
    if (!pkt) continue;
    if (src.app.fragment_bits > 0) {
      for (Packet part : fragment(*pkt, src.app.fragment_bits)) {
        part.seq = src.next_seq++;
        collector_.on_generated(i, part);
        if (!drbs_[i].enqueue(part)) collector_.on_dropped(i, part);
      }
    } else {
      pkt->seq = src.next_seq++;
      collector_.on_generated(i, *pkt);
      if (!drbs_[i].enqueue(*pkt)) collector_.on_dropped(i, *pkt);
    }
  }

  // 2. HOL sampling, before any service this TTI.
  for (int i = 0; i < n; ++i)
    if (auto hol = drbs_[i].hol_delay(now_)) collector_.on_hol_sample(i, *hol);

  // 3. Deadline-expiry scan. Expired packets stay queued (they still get
  // delivered late) but count as missed exactly once.
  for (int i = 0; i < n; ++i)
    drbs_[i].scan_expired(now_, [&](const Packet& p) { collector_.on_deadline_miss(i, p); });

  // 4. Scheduling decision.
  const int rr_before = state_.rr_cursor;
  const int tie_before = state_.tie_cursor;
  const AllocationPlan plan =
      allocate_tti(drbs_, config_.scheduler, state_, config_.scenario.cell, link_, now_);
  if (observer_) observer_(TtiContext{now_, drbs_, plan, rr_before, tie_before});

  // 5. Transmission.
  served_.assign(drbs_.size(), 0);
  for (const AllocationPlan::Grant& g : plan.grants) {
    const int i = g.drb_id - 1;  // engine queues are id-ordered by construction
    assert(i >= 0 && i < n && drbs_[i].drb_id == g.drb_id);
    const TransmitResult tr =
        drbs_[i].transmit_from_head(link_.tbs(g.rbs, drbs_[i].ue_id), now_);
    collector_.on_transmitted(i, tr.consumed_bits);
    for (const Packet& p : tr.delivered) collector_.on_delivered(i, p);
    served_[i] = tr.consumed_bits;
  }
  for (int i = 0; i < n; ++i)
    state_.update_pf(static_cast<std::size_t>(i),
                     static_cast<double>(served_[i]) * 1000.0 / static_cast<double>(tti));

  now_ += tti;
  collector_.on_tti_end(now_);
}

RunResult Engine::finish() {
  const std::vector<DrbKpis> kpis = collector_.finalize(now_, drbs_);
  const auto specs = config_.scenario.drbs();

  RunResult out;
  out.summary.scheduler = config_.scheduler;
  out.summary.n_ues = config_.scenario.n_ues();
  out.summary.seed = seed_;
  out.summary.run_index = run_index_;
  out.summary.n_runs = config_.n_runs;
  out.summary.duration_ms = now_;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    DrbSummary d;
    d.drb_id = specs[i].drb_id;
    d.ue_id = specs[i].ue_id;
    d.qci = specs[i].app.qci;
    d.kpis = kpis[i];
    out.summary.drbs.push_back(std::move(d));
  }
  out.summary.rt = pool_class(out.summary.drbs, true, static_cast<double>(now_));
  out.summary.nrt = pool_class(out.summary.drbs, false, static_cast<double>(now_));
  out.windows = collector_.windows();
  return out;
}

RunResult run_one(const RunConfig& config, int run_index, TtiObserver observer) {
  Engine engine(config, run_index);
  if (observer) engine.set_observer(std::move(observer));
  while (engine.now() < config.duration_ms) engine.step();
  return engine.finish();
}

namespace {

unsigned worker_count(std::size_t n_tasks) {
  unsigned workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (const char* env = std::getenv("PAYDA_SIM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      workers = std::min(workers, static_cast<unsigned>(std::min<long>(v, 1024)));
  }
  if (n_tasks < workers) workers = static_cast<unsigned>(n_tasks);
  return workers == 0 ? 1 : workers;
}

}  // namespace

std::vector<SweepPoint> sweep(const std::function<Scenario(int)>& family,
                              const SweepOptions& opts) {
  if (opts.ue_min < 1 || opts.ue_max < opts.ue_min)
    throw std::invalid_argument("sweep: UE range is empty");
  if (opts.schedulers.empty()) throw std::invalid_argument("sweep: no schedulers selected");
  if (opts.n_runs < 1) throw std::invalid_argument("sweep: n_runs must be >= 1");

  struct GridCell {
    RunConfig config;
    std::vector<RunSummary> runs;
  };
  std::vector<GridCell> cells;
  for (SchedulerKind kind : opts.schedulers) {
    for (int n = opts.ue_min; n <= opts.ue_max; ++n) {
      RunConfig rc;
      rc.scenario = family(n);
      rc.scenario.offset_mode = opts.offset_mode;
      rc.scheduler = kind;
      rc.duration_ms = opts.duration_ms;
      rc.n_runs = opts.n_runs;
      rc.base_seed = opts.base_seed;
      rc.kpi_window_ms = opts.kpi_window_ms;
      rc.sched = opts.sched;
      rc.queue_cap_bits = opts.queue_cap_bits;
      cells.push_back(GridCell{std::move(rc), std::vector<RunSummary>(opts.n_runs)});
    }
  }

  struct Task {
    std::size_t cell;
    int run;
  };
  std::vector<Task> tasks;
  tasks.reserve(cells.size() * static_cast<std::size_t>(opts.n_runs));
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (int r = 0; r < opts.n_runs; ++r) tasks.push_back(Task{c, r});

  // Fixed result slots keep the output independent of thread scheduling.
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      GridCell& cell = cells[tasks[t].cell];
      cell.runs[tasks[t].run] = run_one(cell.config, tasks[t].run).summary;
    }
  };
  const unsigned workers = worker_count(tasks.size());
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }

  std::vector<SweepPoint> out;
  out.reserve(cells.size());
  for (GridCell& cell : cells) {
    SweepPoint point;
    point.scheduler = cell.config.scheduler;
    point.n_ues = cell.config.scenario.n_ues();
    point.mean = average_summaries(cell.runs);
    out.push_back(std::move(point));
  }
  return out;
}

}  // namespace payda
