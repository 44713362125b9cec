#include "payda/sched.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>

namespace payda {

std::optional<SchedulerKind> scheduler_from_name(std::string_view name) {
  std::string lower;
  lower.reserve(name.size());
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "payda") return SchedulerKind::PayDA;
  if (lower == "edf") return SchedulerKind::Edf;
  if (lower == "mt") return SchedulerKind::MaxThroughput;
  if (lower == "pf") return SchedulerKind::ProportionalFair;
  if (lower == "rr") return SchedulerKind::RoundRobin;
  return std::nullopt;
}

std::string_view scheduler_name(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::PayDA: return "payda";
    case SchedulerKind::Edf: return "edf";
    case SchedulerKind::MaxThroughput: return "mt";
    case SchedulerKind::ProportionalFair: return "pf";
    case SchedulerKind::RoundRobin: return "rr";
  }
  return "?";
}

std::string valid_scheduler_names() { return "payda, edf, mt, pf, rr"; }

double edf_metric(Millis deadline_ms, Millis hol_delay_ms) {
  assert(deadline_ms > 0 && hol_delay_ms >= 0);
  const double slack_ms = static_cast<double>(deadline_ms - hol_delay_ms);
  if (slack_ms <= 0.0) return 0.0;
  return 1.0 / slack_ms;
}

double payda_metric(Millis deadline_ms, Millis hol_delay_ms, Bits remaining_bits) {
  assert(remaining_bits > 0);
  assert(deadline_ms > 0 && hol_delay_ms >= 0);
  const double slack_ms = static_cast<double>(deadline_ms - hol_delay_ms);
  if (slack_ms <= 0.0) return 0.0;
  return 1.0 / (slack_ms * static_cast<double>(remaining_bits));
}

double mt_metric(Bits achievable_bits_this_tti) {
  assert(achievable_bits_this_tti >= 0);
  return static_cast<double>(achievable_bits_this_tti);
}

double pf_metric(double achievable_rate_bps, double avg_rate_bps) {
  assert(avg_rate_bps > 0.0);
  return achievable_rate_bps / avg_rate_bps;
}

namespace {

// Position of drb index i in the rotation that starts right after cursor.
int rotation_pos(int index, int cursor, int n_drbs) {
  int pos = (index - cursor - 1) % n_drbs;
  return pos < 0 ? pos + n_drbs : pos;
}

Bits rb_need(const DrbQueue& q, const LinkModel& link) {
  const Bits per_rb = link.bits_per_rb(q.ue_id);
  return (q.queued_bits() + per_rb - 1) / per_rb;  // ceil
}

struct Candidate {
  int index;
  double metric;
};

}  // namespace

std::vector<int> rr_order(const SchedulerState& state, const std::vector<int>& active_drb_indexes,
                          int n_drbs) {
  std::vector<int> order = active_drb_indexes;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return rotation_pos(a, state.rr_cursor, n_drbs) < rotation_pos(b, state.rr_cursor, n_drbs);
  });
  return order;
}

AllocationPlan allocate_tti(const std::vector<DrbQueue>& drbs, SchedulerKind kind,
                            SchedulerState& state, const CellConfig& cell, const LinkModel& link,
                            Millis now) {
  const int n = static_cast<int>(drbs.size());
  assert(state.avg_rate_bps.size() == drbs.size());

  std::vector<Candidate> main_pass;
  std::vector<int> best_effort;  // expired heads, metric clamped to zero
  for (int i = 0; i < n; ++i) {
    const DrbQueue& q = drbs[i];
    if (q.empty()) continue;
    double metric = 0.0;
    switch (kind) {
      case SchedulerKind::PayDA: {
        const Millis hol = *q.hol_delay(now);
        const double slack_ms = static_cast<double>(q.qci.deadline_ms - hol);
        const double delta =
            static_cast<double>(q.head().remaining_bits) * state.params.payda_delta_unit_scale;
        metric = slack_ms <= 0.0 ? 0.0 : 1.0 / (slack_ms * delta);
        break;
      }
      case SchedulerKind::Edf:
        metric = edf_metric(q.qci.deadline_ms, *q.hol_delay(now));
        break;
      case SchedulerKind::MaxThroughput:
        metric = mt_metric(link.tbs(cell.bandwidth_rbs, q.ue_id));
        break;
      case SchedulerKind::ProportionalFair: {
        const double achievable_bps =
            static_cast<double>(link.tbs(cell.bandwidth_rbs, q.ue_id)) * 1000.0 /
            static_cast<double>(cell.tti_ms);
        metric = pf_metric(achievable_bps, state.avg_rate_bps[i]);
        break;
      }
      case SchedulerKind::RoundRobin:
        metric = 0.0;  // ordering comes from the rotation instead
        break;
    }
    if ((kind == SchedulerKind::PayDA || kind == SchedulerKind::Edf) && metric == 0.0) {
      best_effort.push_back(i);
    } else {
      main_pass.push_back(Candidate{i, metric});
    }
  }

  std::vector<int> main_order;
  if (kind == SchedulerKind::RoundRobin) {
    std::vector<int> active;
    for (const Candidate& c : main_pass) active.push_back(c.index);
    main_order = rr_order(state, active, n);
  } else {
    std::sort(main_pass.begin(), main_pass.end(), [&](const Candidate& a, const Candidate& b) {
      if (a.metric != b.metric) return a.metric > b.metric;
      return rotation_pos(a.index, state.tie_cursor, n) < rotation_pos(b.index, state.tie_cursor, n);
    });
    for (const Candidate& c : main_pass) main_order.push_back(c.index);
  }

  AllocationPlan plan;
  int rbs_left = cell.bandwidth_rbs;
  int last_main = -1;
  for (int i : main_order) {
    if (rbs_left == 0) break;
    const int grant = static_cast<int>(std::min<Bits>(rb_need(drbs[i], link), rbs_left));
    if (grant == 0) continue;
    plan.grants.push_back({drbs[i].drb_id, grant});
    rbs_left -= grant;
    last_main = i;
  }

  int last_best_effort = -1;
  if (rbs_left > 0 && !best_effort.empty()) {
    std::sort(best_effort.begin(), best_effort.end(), [&](int a, int b) {
      return rotation_pos(a, state.rr_cursor, n) < rotation_pos(b, state.rr_cursor, n);
    });
    for (int i : best_effort) {
      if (rbs_left == 0) break;
      const int grant = static_cast<int>(std::min<Bits>(rb_need(drbs[i], link), rbs_left));
      if (grant == 0) continue;
      plan.grants.push_back({drbs[i].drb_id, grant});
      rbs_left -= grant;
      last_best_effort = i;
    }
  }

  // Cursors advance past the last bearer each rotation actually served.
  if (kind == SchedulerKind::RoundRobin) {
    if (last_main >= 0) state.rr_cursor = last_main;
  } else {
    if (last_main >= 0) state.tie_cursor = last_main;
    if (last_best_effort >= 0) state.rr_cursor = last_best_effort;
  }

  assert(plan.total_rbs() <= cell.bandwidth_rbs);
  return plan;
}

}  // namespace payda
