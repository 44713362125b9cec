#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "payda/model.hpp"
#include "payda/phy.hpp"

namespace payda {

enum class SchedulerKind {
  PayDA,
  Edf,
  MaxThroughput,
  ProportionalFair,
  RoundRobin,
};

inline constexpr std::array<SchedulerKind, 5> kAllSchedulers = {
    SchedulerKind::PayDA,
    SchedulerKind::Edf,
    SchedulerKind::MaxThroughput,
    SchedulerKind::ProportionalFair,
    SchedulerKind::RoundRobin,
};

// Wire names: payda | edf | mt | pf | rr (case-insensitive).
std::optional<SchedulerKind> scheduler_from_name(std::string_view name);
std::string_view scheduler_name(SchedulerKind kind);
std::string valid_scheduler_names();

struct SchedParams {
  double pf_time_constant_ttis = 1000.0;
  double pf_rate_floor_bps = 1.0;
  // Unit conversion applied to the remaining-size input of the PayDA metric.
  // Rescales every metric by a common factor and cannot change the argmax.
  double payda_delta_unit_scale = 1.0;

  friend bool operator==(const SchedParams&, const SchedParams&) = default;
};

// Mutable bookkeeping one scheduler instance carries across TTIs.
struct SchedulerState {
  SchedParams params{};
  std::vector<double> avg_rate_bps;  // per bearer, floored at pf_rate_floor_bps
  int rr_cursor = -1;   // rotation for RR order and the best-effort pass
  int tie_cursor = -1;  // rotation for exact metric ties

  void reset(std::size_t n_drbs) {
    avg_rate_bps.assign(n_drbs, params.pf_rate_floor_bps);
    rr_cursor = -1;
    tie_cursor = -1;
  }

  // EWMA of the served rate; the floor keeps the PF ratio defined.
  void update_pf(std::size_t drb_index, double served_bps) {
    const double a = 1.0 / params.pf_time_constant_ttis;
    double& avg = avg_rate_bps[drb_index];
    avg = (1.0 - a) * avg + a * served_bps;
    if (avg < params.pf_rate_floor_bps) avg = params.pf_rate_floor_bps;
  }
};

// Inverse time-to-deadline of the head packet. Expired heads clamp to zero
// so a negative priority can never starve anyone; the allocator serves them
// from leftover capacity instead.
double edf_metric(Millis deadline_ms, Millis hol_delay_ms);

// Inverse (time-to-deadline x remaining head size): with similar slack the
// smaller remaining transmission wins.
double payda_metric(Millis deadline_ms, Millis hol_delay_ms, Bits remaining_bits);

// Achievable instantaneous rate. Under the fixed wired channel every
// non-empty bearer scores the same, so allocation reduces to tie rotation.
double mt_metric(Bits achievable_bits_this_tti);

// Achievable over served average rate.
double pf_metric(double achievable_rate_bps, double avg_rate_bps);

// Active bearers rotated so the one after rr_cursor comes first.
std::vector<int> rr_order(const SchedulerState& state, const std::vector<int>& active_drb_indexes,
                          int n_drbs);

struct AllocationPlan {
  struct Grant {
    int drb_id = 0;
    int rbs = 0;

    friend bool operator==(const Grant&, const Grant&) = default;
  };
  std::vector<Grant> grants;  // in service order

  int total_rbs() const {
    int sum = 0;
    for (const Grant& g : grants) sum += g.rbs;
    return sum;
  }
  int rbs_for(int drb_id) const {
    for (const Grant& g : grants)
      if (g.drb_id == drb_id) return g.rbs;
    return 0;
  }

  friend bool operator==(const AllocationPlan&, const AllocationPlan&) = default;
};

// One TTI of downlink allocation: score every non-empty bearer, then walk
// them best-first, granting each the RBs its whole queue needs until the
// grid is spent. Bearers whose metric clamped to zero are held back and
// share whatever is left, in rotation (best-effort service of late data).
AllocationPlan allocate_tti(const std::vector<DrbQueue>& drbs, SchedulerKind kind,
                            SchedulerState& state, const CellConfig& cell, const LinkModel& link,
                            Millis now);

}  // namespace payda
