#include "cli.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "payda/engine.hpp"
#include "payda/report.hpp"
#include "payda/scenario_io.hpp"

namespace payda {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
  std::string scenario = "homogeneous";
  std::string scheduler = "payda";
  int ues = 7;
  double duration_s = 300.0;
  int runs = 10;
  std::uint64_t seed = 1;
  std::string out_dir = "results";
  std::string start_offsets = "equal";
  std::int64_t window_ms = 1000;
  double pf_tc = 1000.0;
  double pf_floor = 1.0;
  std::int64_t queue_cap_bits = 0;
};

struct SweepOpts {
  std::string ues_range;
  std::string schedulers = "payda,edf,mt,pf,rr";
};

void add_common_flags(CLI::App& cmd, CommonOpts& o) {
  cmd.add_option("--scenario", o.scenario,
                 "homogeneous, heterogeneous, or a scenario JSON file")
      ->capture_default_str();
  cmd.add_option("--scheduler", o.scheduler, "scheduling metric (" + valid_scheduler_names() + ")")
      ->capture_default_str();
  cmd.add_option("--ues", o.ues, "number of UEs (preset scenarios only)")->capture_default_str();
  cmd.add_option("--duration-s", o.duration_s, "simulated seconds per run")->capture_default_str();
  cmd.add_option("--runs", o.runs, "independent runs to average")->capture_default_str();
  cmd.add_option("--seed", o.seed, "base seed; run i uses seed + i")->capture_default_str();
  cmd.add_option("--out", o.out_dir, "output directory")->capture_default_str();
  cmd.add_option("--start-offsets", o.start_offsets,
                 "application start spacing: equal or seeded")
      ->capture_default_str();
  cmd.add_option("--window-ms", o.window_ms, "KPI reporting window")->capture_default_str();
  cmd.add_option("--pf-tc", o.pf_tc, "PF averaging time constant in TTIs")->capture_default_str();
  cmd.add_option("--pf-floor", o.pf_floor, "PF average-rate floor in bit/s")
      ->capture_default_str();
  cmd.add_option("--queue-cap-bits", o.queue_cap_bits,
                 "per-bearer queue cap in bits, 0 = uncapped")
      ->capture_default_str();
}

bool is_preset(const std::string& scenario) {
  return scenario == "homogeneous" || scenario == "heterogeneous";
}

// Shared flag validation; returns nullopt and prints to stderr on failure.
std::optional<StartOffsetMode> parse_offsets(const std::string& value) {
  if (value == "equal") return StartOffsetMode::Equal;
  if (value == "seeded") return StartOffsetMode::SeededRandom;
  std::cerr << "error: --start-offsets must be 'equal' or 'seeded', got '" << value << "'\n";
  return std::nullopt;
}

std::optional<SchedulerKind> parse_scheduler(const std::string& name) {
  const auto kind = scheduler_from_name(name);
  if (!kind)
    std::cerr << "error: unknown scheduler '" << name << "' (valid: " << valid_scheduler_names()
              << ")\n";
  return kind;
}

bool validate_common(const CommonOpts& o) {
  if (o.ues < 1) {
    std::cerr << "error: --ues must be >= 1\n";
    return false;
  }
  if (o.runs < 1) {
    std::cerr << "error: --runs must be >= 1\n";
    return false;
  }
  if (!(o.duration_s > 0.0)) {
    std::cerr << "error: --duration-s must be positive\n";
    return false;
  }
  if (o.window_ms < 1) {
    std::cerr << "error: --window-ms must be >= 1\n";
    return false;
  }
  if (!(o.pf_tc >= 1.0)) {
    std::cerr << "error: --pf-tc must be >= 1\n";
    return false;
  }
  if (!(o.pf_floor > 0.0)) {
    std::cerr << "error: --pf-floor must be positive\n";
    return false;
  }
  if (o.queue_cap_bits < 0) {
    std::cerr << "error: --queue-cap-bits must be >= 0\n";
    return false;
  }
  return true;
}

// Load a preset or scenario file. Exit-code semantics: unreadable file is an
// I/O failure, unparseable content is a configuration error.
std::optional<Scenario> resolve_scenario(const CommonOpts& o, bool ues_explicit, int* exit_code) {
  if (is_preset(o.scenario)) {
    Scenario sc = o.scenario == "homogeneous" ? build_homogeneous(o.ues)
                                              : build_heterogeneous(o.ues);
    return sc;
  }
  if (ues_explicit) {
    std::cerr << "error: --ues applies to preset scenarios only; '" << o.scenario
              << "' defines its own UEs\n";
    *exit_code = kExitUsage;
    return std::nullopt;
  }
  std::ifstream in(o.scenario, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open scenario file '" << o.scenario << "'\n";
    *exit_code = kExitIo;
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    std::cerr << "error: failed reading scenario file '" << o.scenario << "'\n";
    *exit_code = kExitIo;
    return std::nullopt;
  }
  try {
    return parse_scenario(buf.str(), o.scenario);
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    *exit_code = kExitUsage;
    return std::nullopt;
  }
}

RunConfig make_run_config(Scenario scenario, SchedulerKind kind, const CommonOpts& o,
                          bool duration_explicit, bool seed_explicit) {
  RunConfig rc;
  rc.scenario = std::move(scenario);
  rc.scheduler = kind;
  // An explicit flag beats the scenario file; otherwise the file's cell
  // settings win (presets carry the same defaults as the flags).
  rc.duration_ms = duration_explicit || rc.scenario.cell.duration_ms <= 0
                       ? static_cast<Millis>(std::llround(o.duration_s * 1000.0))
                       : rc.scenario.cell.duration_ms;
  rc.n_runs = o.runs;
  rc.base_seed = seed_explicit ? o.seed : rc.scenario.cell.seed;
  rc.kpi_window_ms = o.window_ms;
  rc.sched.pf_time_constant_ttis = o.pf_tc;
  rc.sched.pf_rate_floor_bps = o.pf_floor;
  rc.queue_cap_bits = o.queue_cap_bits;
  return rc;
}

bool write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open '" << path.string() << "' for writing\n";
    return false;
  }
  out << contents;
  out.flush();
  if (!out) {
    std::cerr << "error: failed writing '" << path.string() << "'\n";
    return false;
  }
  return true;
}

bool ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory '" << dir << "': " << ec.message()
              << "\n";
    return false;
  }
  return true;
}

int cmd_run(const CommonOpts& o, bool ues_explicit, bool duration_explicit, bool seed_explicit,
            bool offsets_explicit) {
  if (!validate_common(o)) return kExitUsage;
  const auto kind = parse_scheduler(o.scheduler);
  if (!kind) return kExitUsage;
  const auto offsets = parse_offsets(o.start_offsets);
  if (!offsets) return kExitUsage;

  int exit_code = kExitUsage;
  auto scenario = resolve_scenario(o, ues_explicit, &exit_code);
  if (!scenario) return exit_code;
  if (offsets_explicit || is_preset(o.scenario)) scenario->offset_mode = *offsets;

  const RunConfig rc = make_run_config(std::move(*scenario), *kind, o, duration_explicit,
                                       seed_explicit);

  std::vector<OutputRow> rows;
  SummaryFile summary;
  for (int run = 0; run < rc.n_runs; ++run) {
    RunResult result = run_one(rc, run);
    std::vector<OutputRow> run_rows = make_rows(result);
    rows.insert(rows.end(), run_rows.begin(), run_rows.end());
    summary.runs.push_back(std::move(result.summary));
  }
  summary.mean = average_summaries(summary.runs);

  if (!ensure_out_dir(o.out_dir)) return kExitIo;
  std::ostringstream csv;
  write_timeseries_csv(csv, rows);
  std::ostringstream json;
  write_summary_json(json, summary);
  const std::filesystem::path dir(o.out_dir);
  if (!write_file(dir / "timeseries.csv", csv.str())) return kExitIo;
  if (!write_file(dir / "summary.json", json.str())) return kExitIo;
  return kExitOk;
}

bool parse_ue_range(const std::string& text, int* lo, int* hi) {
  const auto sep = text.find("..");
  if (sep == std::string::npos) return false;
  try {
    std::size_t used = 0;
    const std::string a = text.substr(0, sep);
    const std::string b = text.substr(sep + 2);
    *lo = std::stoi(a, &used);
    if (used != a.size()) return false;
    *hi = std::stoi(b, &used);
    if (used != b.size()) return false;
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

int cmd_sweep(const CommonOpts& o, const SweepOpts& s) {
  if (!validate_common(o)) return kExitUsage;
  if (!is_preset(o.scenario)) {
    std::cerr << "error: sweep needs a preset scenario family (homogeneous or heterogeneous); "
                 "a scenario file fixes its own UE count\n";
    return kExitUsage;
  }
  const auto offsets = parse_offsets(o.start_offsets);
  if (!offsets) return kExitUsage;

  int lo = 0, hi = 0;
  if (!parse_ue_range(s.ues_range, &lo, &hi)) {
    std::cerr << "error: --ues-range must look like A..B, got '" << s.ues_range << "'\n";
    return kExitUsage;
  }
  if (lo < 1 || hi < lo) {
    std::cerr << "error: --ues-range " << s.ues_range << " is empty\n";
    return kExitUsage;
  }

  std::vector<SchedulerKind> kinds;
  std::stringstream names(s.schedulers);
  std::string token;
  while (std::getline(names, token, ',')) {
    if (token.empty()) continue;
    const auto kind = parse_scheduler(token);
    if (!kind) return kExitUsage;
    kinds.push_back(*kind);
  }
  if (kinds.empty()) {
    std::cerr << "error: --schedulers selected nothing\n";
    return kExitUsage;
  }

  SweepOptions opts;
  opts.schedulers = std::move(kinds);
  opts.ue_min = lo;
  opts.ue_max = hi;
  opts.duration_ms = static_cast<Millis>(std::llround(o.duration_s * 1000.0));
  opts.n_runs = o.runs;
  opts.base_seed = o.seed;
  opts.kpi_window_ms = o.window_ms;
  opts.sched.pf_time_constant_ttis = o.pf_tc;
  opts.sched.pf_rate_floor_bps = o.pf_floor;
  opts.queue_cap_bits = o.queue_cap_bits;
  opts.offset_mode = *offsets;

  const auto family =
      o.scenario == "homogeneous" ? build_homogeneous : build_heterogeneous;
  const std::vector<SweepPoint> points = sweep(family, opts);

  if (!ensure_out_dir(o.out_dir)) return kExitIo;
  std::ostringstream csv;
  write_sweep_csv(csv, points);
  if (!write_file(std::filesystem::path(o.out_dir) / "sweep.csv", csv.str())) return kExitIo;
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"LTE downlink cell simulator: PayDA and baseline MAC schedulers"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  CLI::App* run = app.add_subcommand("run", "simulate one (scenario, scheduler) configuration");
  add_common_flags(*run, run_opts);

  CommonOpts sweep_common;
  SweepOpts sweep_opts;
  CLI::App* sw = app.add_subcommand("sweep", "grid of runs over UE counts and schedulers");
  add_common_flags(*sw, sweep_common);
  sw->add_option("--ues-range", sweep_opts.ues_range, "UE counts to sweep, e.g. 1..8")
      ->required();
  sw->add_option("--schedulers", sweep_opts.schedulers, "comma list of schedulers")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed())
      return cmd_run(run_opts, run->count("--ues") > 0, run->count("--duration-s") > 0,
                     run->count("--seed") > 0, run->count("--start-offsets") > 0);
    return cmd_sweep(sweep_common, sweep_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace payda
