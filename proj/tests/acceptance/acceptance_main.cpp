// Acceptance gate for the cell simulator. Each check prints one line,
// [PASS] or [FAIL] plus a measured detail, and the exit code is the number
// of failures. Pass criterion numbers as arguments to run a subset:
//
//   acceptance          # all ten
//   acceptance 4 5      # only the two scheduler-comparison checks
//
// The slower checks (3-5) share one cached parameter sweep; a full pass
// runs in a few minutes on one core.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "payda/engine.hpp"
#include "payda/report.hpp"
#include "payda/sched.hpp"
#include "payda/traffic.hpp"
#include "sched_oracle.hpp"

using namespace payda;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream out;
  out.precision(digits);
  out << v;
  return out.str();
}

RunConfig base_config(Scenario scenario, SchedulerKind kind, Millis duration, int n_runs = 1,
                      std::uint64_t seed = 1) {
  RunConfig rc;
  rc.scenario = std::move(scenario);
  rc.scheduler = kind;
  rc.duration_ms = duration;
  rc.n_runs = n_runs;
  rc.base_seed = seed;
  return rc;
}

Scenario with_seeded_offsets(Scenario sc) {
  sc.offset_mode = StartOffsetMode::SeededRandom;
  return sc;
}

// Pooled DMR over both traffic classes of one summary.
double overall_dmr(const RunSummary& s) {
  const double missed = s.rt.packets_missed + s.nrt.packets_missed;
  const double decided = s.rt.packets_decided + s.nrt.packets_decided;
  return decided > 0.0 ? missed / decided : 0.0;
}

// Mean of the per-class mean HOL delays (the two curves a delay-vs-users
// plot shows). Classes with no samples do not contribute.
double balanced_hol(const RunSummary& s) {
  double sum = 0.0;
  int classes = 0;
  for (const ClassKpis* c : {&s.rt, &s.nrt}) {
    if (c->n_drbs == 0 || c->hol_samples == 0.0) continue;
    sum += c->mean_hol_delay_ms;
    ++classes;
  }
  return classes > 0 ? sum / classes : 0.0;
}

// Criteria 3 and 4 read different cells of the same homogeneous grid:
// 1..8 UEs x all schedulers, 300 s, 10 runs each. Offsets stay on the
// scenario's native equal spacing: with random per-run phases the overload
// victim is an arbitrary bearer (the RT UE roughly 1 time in 7), which is a
// different experiment from the staggered one these checks encode.
const std::vector<SweepPoint>& homogeneous_grid() {
  static const std::vector<SweepPoint> grid = [] {
    SweepOptions opts;
    opts.ue_min = 1;
    opts.ue_max = 8;
    opts.duration_ms = 300'000;
    opts.n_runs = 10;
    opts.base_seed = 1;
    return sweep(build_homogeneous, opts);
  }();
  return grid;
}

const RunSummary& grid_cell(SchedulerKind kind, int n_ues) {
  for (const SweepPoint& p : homogeneous_grid())
    if (p.scheduler == kind && p.n_ues == n_ues) return p.mean;
  throw std::logic_error("grid cell missing");
}

// --- 1: a single backlogged bearer saturates the cell ----------------------

Outcome check_capacity() {
  AppProfile app;
  app.name = "bulk";
  app.payload_bits = 24'000'000;  // 24 Mbit/s offered against 18.3 Mbit/s
  app.interval_ms = 1000;
  app.deadline_ms = 1000;
  app.qci = QciClass{9, 1000, false};

  Scenario sc;
  sc.name = "saturation";
  sc.ues.push_back(UeSpec{1, {app}});

  const RunResult r = run_one(base_config(std::move(sc), SchedulerKind::PayDA, 10'000), 0);
  const double kbps = r.summary.drbs[0].kpis.throughput_kbps;
  const double target = 18'300.0;
  const bool pass = std::abs(kbps - target) <= 0.001 * target;
  return {pass, "sustained " + fmt(kbps / 1000.0, 6) + " Mbit/s over 10 s (target 18.3 " +
                    std::string("\xc2\xb1") + "0.1%)"};
}

// --- 2: seven equal users overload the cell under every scheduler ----------

Outcome check_saturation_growth() {
  std::string detail;
  bool pass = true;
  for (SchedulerKind kind : kAllSchedulers) {
    RunConfig rc = base_config(build_homogeneous(7), kind, 60'000);
    Engine engine(rc, 0);
    std::vector<std::vector<Bits>> at_boundary;
    while (engine.now() < rc.duration_ms) {
      engine.step();
      if (engine.now() % 20'000 == 0) {
        std::vector<Bits> snapshot;
        for (const DrbQueue& q : engine.drbs()) snapshot.push_back(q.queued_bits());
        at_boundary.push_back(std::move(snapshot));
      }
    }
    Bits best_growth = -1;
    bool grows = false;
    for (std::size_t i = 0; i < engine.drbs().size(); ++i) {
      if (at_boundary[1][i] > at_boundary[0][i] && at_boundary[2][i] > at_boundary[1][i]) {
        grows = true;
        best_growth = std::max(best_growth, at_boundary[2][i] - at_boundary[0][i]);
      }
    }
    pass = pass && grows;
    if (!detail.empty()) detail += ", ";
    detail += std::string(scheduler_name(kind)) + " " +
              (grows ? "+" + fmt(static_cast<double>(best_growth) / 1e6, 3) + " Mbit" : "flat");
  }
  return {pass, "20 s queue growth after warm-up: " + detail};
}

// --- 3: deadline-aware schedulers protect the RT user at n=7 ---------------

Outcome check_rt_protection() {
  bool pass = true;
  std::string detail;
  for (SchedulerKind kind : {SchedulerKind::PayDA, SchedulerKind::Edf}) {
    const RunSummary& mean = grid_cell(kind, 7);
    const bool ok = mean.rt.dmr < 0.01 && mean.nrt.dmr > 0.10;
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += std::string(scheduler_name(kind)) + " rt " + fmt(100.0 * mean.rt.dmr, 3) +
              "% / nrt " + fmt(100.0 * mean.nrt.dmr, 3) + "%";
  }
  return {pass, detail + " (need rt < 1%, nrt > 10%)"};
}

// --- 4: payda tracks edf on HOL delay and both beat the baselines ----------
//
// Known red at two grid points. The equal-spacing offsets collide arrival
// phases modulo the 100 ms period (all five UEs share one phase at n=5,
// pairs collide at n=4/6/8). Under a fully synchronized burst payda drains
// the parade smallest-remaining-first while edf round-robins its exact
// slack ties, ~19% apart on a ~20 ms scale at n=5. At n=8 a partially
// drained 16 kbit head outranks a fresh 267 kbit one ~10x under payda, so
// started heads run to completion, the RT bearer's 15-tti service window
// vanishes, and one missed cycle locks it out of the fresh-head set for
// good (queues are never flushed). edf preempts mid-head on slack alone
// and keeps the RT bearer alive at the same point.

Outcome check_hol_agreement() {
  bool pass = true;
  std::string gaps, breaches;
  for (int n = 1; n <= 8; ++n) {
    const double payda = balanced_hol(grid_cell(SchedulerKind::PayDA, n));
    const double edf = balanced_hol(grid_cell(SchedulerKind::Edf, n));
    const double hi = std::max(payda, edf);
    const double gap = hi > 0.0 ? std::abs(payda - edf) / hi : 0.0;
    if (!gaps.empty()) gaps += " ";
    gaps += std::to_string(n) + ":" + fmt(100.0 * gap, 3) + "%";
    if (gap > 0.15) {
      pass = false;
      breaches += "; payda/edf disagree at n=" + std::to_string(n) + " (" + fmt(payda, 4) +
                  " vs " + fmt(edf, 4) + " ms)";
    }
    if (n >= 7) {
      for (SchedulerKind base :
           {SchedulerKind::MaxThroughput, SchedulerKind::ProportionalFair,
            SchedulerKind::RoundRobin}) {
        const double other = balanced_hol(grid_cell(base, n));
        for (auto [name, ours] : {std::pair{"payda", payda}, std::pair{"edf", edf}}) {
          if (ours < other) continue;
          pass = false;
          breaches += std::string("; ") + name + "@" + std::to_string(n) + " " + fmt(ours, 4) +
                      " ms not below " + std::string(scheduler_name(base)) + " " + fmt(other, 4) +
                      " ms";
        }
      }
    }
  }
  return {pass, "payda/edf gap per n [" + gaps + "] (limit 15%)" + breaches};
}

// --- 5: heterogeneous mix orders the schedulers by DMR ---------------------
//
// Known red by one seed: payda wins 8 of 10 paired seeds and exactly ties
// the other two (bit-identical miss/decided counts). Every 24 Mbit/s bulk
// packet misses its 1 s deadline on an 18.3 Mbit/s cell no matter who
// schedules it, so the two metrics diverge only when an RT head reaches
// fatal contention under edf, which two of the ten phase draws never
// produce. The check requires nine strict wins.

Outcome check_heterogeneous_ordering() {
  constexpr int kSeeds = 10;
  std::map<SchedulerKind, std::vector<double>> dmr;
  for (SchedulerKind kind : kAllSchedulers) {
    RunConfig rc = base_config(with_seeded_offsets(build_heterogeneous(8)), kind, 300'000,
                               kSeeds, 1);
    for (int run = 0; run < kSeeds; ++run)
      dmr[kind].push_back(overall_dmr(run_one(rc, run).summary));
  }
  const auto mean = [&](SchedulerKind k) {
    double sum = 0.0;
    for (double v : dmr[k]) sum += v;
    return sum / kSeeds;
  };
  const double payda = mean(SchedulerKind::PayDA);
  const double edf = mean(SchedulerKind::Edf);
  const double worst_baseline = std::max(
      {mean(SchedulerKind::MaxThroughput), mean(SchedulerKind::ProportionalFair),
       mean(SchedulerKind::RoundRobin)});
  int wins = 0, ties = 0;
  for (int run = 0; run < kSeeds; ++run) {
    if (dmr[SchedulerKind::PayDA][run] < dmr[SchedulerKind::Edf][run]) ++wins;
    if (dmr[SchedulerKind::PayDA][run] == dmr[SchedulerKind::Edf][run]) ++ties;
  }

  const bool pass = payda < edf && edf < worst_baseline && wins >= 9;
  return {pass, "mean dmr payda " + fmt(payda, 5) + " vs edf " + fmt(edf, 5) +
                    " vs worst baseline " + fmt(worst_baseline, 5) + "; paired seeds: " +
                    std::to_string(wins) + " wins / " + std::to_string(ties) + " exact ties / " +
                    std::to_string(kSeeds - wins - ties) + " losses (need 9 wins)"};
}

// --- 6: the engine's decisions match an independent reference --------------

Outcome check_reference_equivalence() {
  std::mt19937 rng(7);
  int bad_instances = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n_drbs = 1 + static_cast<int>(rng() % 5);
    Scenario sc;
    sc.name = "random";
    for (int u = 1; u <= n_drbs; ++u) {
      AppProfile app;
      app.name = "flow";
      app.payload_bits = 400 + static_cast<Bits>(rng() % 60'000);
      app.interval_ms = 1 + static_cast<Millis>(rng() % 40);
      app.deadline_ms = 5 + static_cast<Millis>(rng() % 200);
      app.qci = QciClass{static_cast<int>(5 + rng() % 5), app.deadline_ms, rng() % 2 == 0};
      app.start_offset_ms = static_cast<Millis>(rng() % 30);
      sc.ues.push_back(UeSpec{u, {app}});
    }
    const SchedulerKind kind = kAllSchedulers[trial % kAllSchedulers.size()];
    const Millis duration = 20 + static_cast<Millis>(rng() % 181);

    payda::testing::OracleState oracle;
    oracle.avg_rate_bps.assign(static_cast<std::size_t>(n_drbs), 1.0);
    const CellConfig cell = sc.cell;
    const LinkModel link = LinkModel::from_cell(cell);

    bool ok = true;
    run_one(base_config(std::move(sc), kind, duration), 0, [&](const TtiContext& ctx) {
      if (ctx.rr_cursor_before != oracle.rr_cursor || ctx.tie_cursor_before != oracle.tie_cursor)
        ok = false;
      const AllocationPlan want =
          payda::testing::oracle_allocate(ctx.drbs, kind, oracle, cell, link, ctx.now);
      if (!(ctx.plan == want)) ok = false;
      payda::testing::oracle_update_rates(ctx.drbs, ctx.plan, oracle, cell, link);
    });
    if (!ok) ++bad_instances;
  }
  return {bad_instances == 0,
          std::to_string(100 - bad_instances) + "/100 randomized runs replayed tti-for-tti"};
}

// --- 7: metric clamp and equal-size degeneration ----------------------------

Outcome check_metric_properties() {
  std::mt19937 rng(11);
  long bad = 0;
  constexpr int kTrials = 100'000;
  for (int i = 0; i < kTrials; ++i) {
    const Millis deadline1 = 1 + static_cast<Millis>(rng() % 2000);
    const Millis hol1 = static_cast<Millis>(rng() % 4000);
    const Millis deadline2 = 1 + static_cast<Millis>(rng() % 2000);
    const Millis hol2 = static_cast<Millis>(rng() % 4000);
    const Bits delta = 1 + static_cast<Bits>(rng() % 30'000'000);

    const double e1 = edf_metric(deadline1, hol1);
    const double e2 = edf_metric(deadline2, hol2);
    const double p1 = payda_metric(deadline1, hol1, delta);
    const double p2 = payda_metric(deadline2, hol2, delta);

    if (e1 < 0.0 || p1 < 0.0) ++bad;
    if ((e1 == 0.0) != (deadline1 <= hol1)) ++bad;
    if ((p1 == 0.0) != (deadline1 <= hol1)) ++bad;
    // Equal remaining size: the pair must order identically under both.
    const int edf_order = (e1 > e2) - (e1 < e2);
    const int payda_order = (p1 > p2) - (p1 < p2);
    if (edf_order != payda_order) ++bad;
  }
  return {bad == 0, std::to_string(kTrials) + " random (deadline, age, size) draws, " +
                        std::to_string(bad) + " violations"};
}

// --- 8: rescaling the size unit never changes a plan ------------------------

Outcome check_scale_invariance() {
  const auto plans_with_scale = [](double scale) {
    RunConfig rc = base_config(build_homogeneous(7), SchedulerKind::PayDA, 10'000);
    rc.sched.payda_delta_unit_scale = scale;
    std::vector<AllocationPlan> plans;
    plans.reserve(10'000);
    const RunResult r =
        run_one(rc, 0, [&](const TtiContext& ctx) { plans.push_back(ctx.plan); });
    return std::make_pair(std::move(plans), r.summary);
  };
  const auto [plans_bits, summary_bits] = plans_with_scale(1.0);
  const auto [plans_kbits, summary_kbits] = plans_with_scale(1000.0);
  const bool plans_equal = plans_bits == plans_kbits;
  const bool kpis_equal = summary_bits.drbs == summary_kbits.drbs;
  return {plans_equal && kpis_equal,
          std::to_string(plans_bits.size()) + " tti plans compared after a x1000 size-unit " +
              "rescale: " + (plans_equal ? "identical" : "diverged") +
              (kpis_equal ? "" : " (kpis diverged)")};
}

// --- 9: the command-line tool is byte-deterministic --------------------------

Outcome check_cli_determinism() {
  const char* bin = std::getenv("PAYDA_SIM_BIN");
  if (bin == nullptr) return {false, "PAYDA_SIM_BIN not set (run under ctest)"};

  const fs::path dir =
      fs::temp_directory_path() / ("payda-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto invoke = [&](const std::string& out) {
    const std::string cmd = std::string("'") + bin +
                            "' run --scenario heterogeneous --ues 4 --duration-s 2 --runs 2"
                            " --seed 3 --start-offsets seeded --window-ms 100 --out '" +
                            out + "' >/dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return raw != -1 && WIFEXITED(raw) && WEXITSTATUS(raw) == 0;
  };
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  if (!invoke((dir / "a").string()) || !invoke((dir / "b").string())) {
    fs::remove_all(dir);
    return {false, "tool invocation failed"};
  }
  const std::string csv_a = slurp(dir / "a" / "timeseries.csv");
  const std::string json_a = slurp(dir / "a" / "summary.json");
  const bool csv_same = !csv_a.empty() && csv_a == slurp(dir / "b" / "timeseries.csv");
  const bool json_same = !json_a.empty() && json_a == slurp(dir / "b" / "summary.json");
  fs::remove_all(dir);
  return {csv_same && json_same,
          "repeated invocation: timeseries.csv " + std::string(csv_same ? "identical" : "differs") +
              " (" + std::to_string(csv_a.size()) + " B), summary.json " +
              (json_same ? "identical" : "differs") + " (" + std::to_string(json_a.size()) +
              " B)"};
}

// --- 10: per-bearer accounting closes on every run ---------------------------

Outcome check_accounting() {
  struct Setup {
    RunConfig rc;
    int run_index;
  };
  std::vector<Setup> setups;
  setups.push_back({base_config(build_homogeneous(7), SchedulerKind::PayDA, 10'000), 0});
  setups.push_back({base_config(build_heterogeneous(8), SchedulerKind::RoundRobin, 5'000), 0});
  {
    RunConfig capped = base_config(build_homogeneous(3), SchedulerKind::ProportionalFair, 5'000);
    capped.queue_cap_bits = 50'000;
    setups.push_back({std::move(capped), 0});
  }
  {
    AppProfile app;
    app.name = "chunked";
    app.payload_bits = 100'000;
    app.interval_ms = 50;
    app.deadline_ms = 60;
    app.qci = QciClass{7, 60, true};
    app.fragment_bits = 7'320;
    Scenario sc;
    sc.name = "fragmented";
    sc.ues.push_back(UeSpec{1, {app}});
    sc.ues.push_back(UeSpec{2, {app}});
    setups.push_back({base_config(std::move(sc), SchedulerKind::MaxThroughput, 5'000), 0});
  }
  setups.push_back(
      {base_config(with_seeded_offsets(build_homogeneous(5)), SchedulerKind::Edf, 5'000, 5), 3});

  int bearers = 0;
  long violations = 0;
  for (const Setup& setup : setups) {
    const RunResult r = run_one(setup.rc, setup.run_index);
    std::map<int, KpiRecord> window_totals;
    for (const KpiRecord& w : r.windows) {
      KpiRecord& t = window_totals[w.drb_id];
      t.packets_generated += w.packets_generated;
      t.packets_delivered += w.packets_delivered;
      t.packets_missed += w.packets_missed;
      t.packets_dropped += w.packets_dropped;
    }
    for (const DrbSummary& d : r.summary.drbs) {
      ++bearers;
      const DrbKpis& k = d.kpis;
      if (k.packets_generated !=
          k.packets_delivered + k.packets_dropped + k.queued_packets_end)
        ++violations;
      if (k.generated_bits != k.delivered_bits + k.dropped_bits + k.queued_size_bits_end)
        ++violations;
      if (k.transmitted_bits !=
          k.delivered_bits + (k.queued_size_bits_end - k.queued_remaining_bits_end))
        ++violations;
      if (k.hits + k.packets_missed > k.packets_generated) ++violations;
      const KpiRecord& t = window_totals[d.drb_id];
      if (static_cast<double>(t.packets_generated) != k.packets_generated ||
          static_cast<double>(t.packets_delivered) != k.packets_delivered ||
          static_cast<double>(t.packets_missed) != k.packets_missed ||
          static_cast<double>(t.packets_dropped) != k.packets_dropped)
        ++violations;
    }
  }
  return {violations == 0, std::to_string(setups.size()) + " runs / " + std::to_string(bearers) +
                               " bearers checked (packet, bit and window closures), " +
                               std::to_string(violations) + " violations"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> fn;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "capacity reproduction", check_capacity},
      {2, "seven-user saturation", check_saturation_growth},
      {3, "rt protection under payda/edf", check_rt_protection},
      {4, "payda tracks edf on hol delay", check_hol_agreement},
      {5, "heterogeneous dmr ordering", check_heterogeneous_ordering},
      {6, "reference allocator equivalence", check_reference_equivalence},
      {7, "metric clamp and degeneration", check_metric_properties},
      {8, "size-unit scale invariance", check_scale_invariance},
      {9, "cli byte determinism", check_cli_determinism},
      {10, "accounting closure", check_accounting},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    try {
      std::size_t used = 0;
      const int id = std::stoi(argv[i], &used);
      if (used != std::string(argv[i]).size() || id < 1 || id > 10) throw std::invalid_argument("");
      selected.push_back(id);
    } catch (const std::exception&) {
      std::cerr << "usage: acceptance [criterion numbers 1..10]\n";
      return 2;
    }
  }

  int failures = 0;
  for (const Criterion& c : criteria()) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), c.id) == selected.end())
      continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.name << ": "
              << outcome.detail << " [" << fmt(secs, 3) << " s]" << std::endl;
    if (!outcome.pass) ++failures;
  }
  return failures;
}
