#include "payda/kpi.hpp"

#include <cassert>
#include <stdexcept>
#include <utility>

namespace payda {

double dmr(std::int64_t missed, std::int64_t decided) {
  assert(missed >= 0 && decided >= missed);
  if (decided == 0) return 0.0;
  return static_cast<double>(missed) / static_cast<double>(decided);
}

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

void DrbKpis::derive(double duration_ms) {
  mean_hol_delay_ms = ratio(hol_sum_ms, hol_samples);
  dmr = ratio(packets_missed, packets_missed + hits);
  throughput_kbps = duration_ms > 0.0 ? transmitted_bits / duration_ms : 0.0;
}

ClassKpis pool_class(const std::vector<DrbSummary>& drbs, bool is_rt, double duration_ms) {
  ClassKpis out;
  double transmitted = 0.0;
  for (const DrbSummary& d : drbs) {
    if (d.qci.is_rt != is_rt) continue;
    ++out.n_drbs;
    out.packets_missed += d.kpis.packets_missed;
    out.packets_decided += d.kpis.packets_missed + d.kpis.hits;
    out.hol_samples += d.kpis.hol_samples;
    out.hol_sum_ms += d.kpis.hol_sum_ms;
    transmitted += d.kpis.transmitted_bits;
  }
  out.mean_hol_delay_ms = ratio(out.hol_sum_ms, out.hol_samples);
  out.dmr = ratio(out.packets_missed, out.packets_decided);
  out.throughput_kbps = duration_ms > 0.0 ? transmitted / duration_ms : 0.0;
  return out;
}

RunSummary average_summaries(const std::vector<RunSummary>& runs) {
  if (runs.empty()) throw std::invalid_argument("average_summaries: no runs");
  RunSummary out = runs.front();
  const double n = static_cast<double>(runs.size());
  for (std::size_t r = 1; r < runs.size(); ++r) {
    const RunSummary& run = runs[r];
    if (run.drbs.size() != out.drbs.size())
      throw std::invalid_argument("average_summaries: runs have different bearer sets");
    for (std::size_t i = 0; i < out.drbs.size(); ++i) {
      DrbKpis& acc = out.drbs[i].kpis;
      const DrbKpis& k = run.drbs[i].kpis;
      acc.packets_generated += k.packets_generated;
      acc.packets_delivered += k.packets_delivered;
      acc.packets_missed += k.packets_missed;
      acc.packets_dropped += k.packets_dropped;
      acc.hits += k.hits;
      acc.hol_samples += k.hol_samples;
      acc.hol_sum_ms += k.hol_sum_ms;
      acc.generated_bits += k.generated_bits;
      acc.delivered_bits += k.delivered_bits;
      acc.transmitted_bits += k.transmitted_bits;
      acc.dropped_bits += k.dropped_bits;
      acc.queued_packets_end += k.queued_packets_end;
      acc.queued_size_bits_end += k.queued_size_bits_end;
      acc.queued_remaining_bits_end += k.queued_remaining_bits_end;
    }
  }
  for (DrbSummary& d : out.drbs) {
    DrbKpis& k = d.kpis;
    k.packets_generated /= n;
    k.packets_delivered /= n;
    k.packets_missed /= n;
    k.packets_dropped /= n;
    k.hits /= n;
    k.hol_samples /= n;
    k.hol_sum_ms /= n;
    k.generated_bits /= n;
    k.delivered_bits /= n;
    k.transmitted_bits /= n;
    k.dropped_bits /= n;
    k.queued_packets_end /= n;
    k.queued_size_bits_end /= n;
    k.queued_remaining_bits_end /= n;
    k.derive(static_cast<double>(out.duration_ms));
  }
  out.rt = pool_class(out.drbs, true, static_cast<double>(out.duration_ms));
  out.nrt = pool_class(out.drbs, false, static_cast<double>(out.duration_ms));
  out.seed = 0;
  out.run_index = -1;
  out.n_runs = static_cast<int>(runs.size());
  return out;
}

KpiCollector::KpiCollector(std::vector<int> drb_ids, Millis window_ms)
    : drb_ids_(std::move(drb_ids)), window_ms_(window_ms) {
  if (window_ms_ <= 0) throw std::invalid_argument("KpiCollector: window_ms must be positive");
  window_.resize(drb_ids_.size());
  total_.resize(drb_ids_.size());
}

void KpiCollector::on_generated(int i, const Packet& p) {
  ++window_[i].generated;
  total_[i].packets_generated += 1;
  total_[i].generated_bits += static_cast<double>(p.size_bits);
}

void KpiCollector::on_dropped(int i, const Packet& p) {
  ++window_[i].dropped;
  ++window_[i].missed;
  total_[i].packets_dropped += 1;
  total_[i].packets_missed += 1;
  total_[i].dropped_bits += static_cast<double>(p.size_bits);
}

void KpiCollector::on_hol_sample(int i, Millis hol_delay_ms) {
  window_[i].hol_sum_ms += static_cast<double>(hol_delay_ms);
  ++window_[i].hol_samples;
  total_[i].hol_sum_ms += static_cast<double>(hol_delay_ms);
  total_[i].hol_samples += 1;
}

void KpiCollector::on_deadline_miss(int i, const Packet&) {
  ++window_[i].missed;
  total_[i].packets_missed += 1;
}

void KpiCollector::on_transmitted(int i, Bits bits) {
  window_[i].transmitted_bits += bits;
  total_[i].transmitted_bits += static_cast<double>(bits);
}

void KpiCollector::on_delivered(int i, const Packet& p) {
  ++window_[i].delivered;
  total_[i].packets_delivered += 1;
  total_[i].delivered_bits += static_cast<double>(p.size_bits);
  if (!p.miss_recorded) {
    ++window_[i].hits;
    total_[i].hits += 1;
  }
}

void KpiCollector::on_tti_end(Millis tti_end_ms) {
  if (tti_end_ms % window_ms_ == 0) flush(tti_end_ms);
}

void KpiCollector::flush(Millis window_end_ms) {
  const double span_ms = static_cast<double>(window_end_ms - last_flush_ms_);
  assert(span_ms > 0.0);
  for (std::size_t i = 0; i < window_.size(); ++i) {
    WindowAcc& w = window_[i];
    KpiRecord rec;
    rec.drb_id = drb_ids_[i];
    rec.window_end_ms = window_end_ms;
    rec.mean_hol_delay_ms =
        w.hol_samples > 0 ? w.hol_sum_ms / static_cast<double>(w.hol_samples) : w.last_mean_hol_ms;
    rec.dmr = dmr(w.missed, w.missed + w.hits);
    rec.throughput_kbps = static_cast<double>(w.transmitted_bits) / span_ms;
    rec.packets_generated = w.generated;
    rec.packets_delivered = w.delivered;
    rec.packets_missed = w.missed;
    rec.packets_dropped = w.dropped;
    windows_.push_back(rec);
    const double carry = rec.mean_hol_delay_ms;
    w = WindowAcc{};
    w.last_mean_hol_ms = carry;
  }
  last_flush_ms_ = window_end_ms;
}

std::vector<DrbKpis> KpiCollector::finalize(Millis duration_ms,
                                            const std::vector<DrbQueue>& queues) {
  assert(queues.size() == total_.size());
  if (duration_ms > last_flush_ms_) flush(duration_ms);
  for (std::size_t i = 0; i < total_.size(); ++i) {
    DrbKpis& k = total_[i];
    k.queued_packets_end = static_cast<double>(queues[i].size());
    k.queued_size_bits_end = static_cast<double>(queues[i].queued_size_bits());
    k.queued_remaining_bits_end = static_cast<double>(queues[i].queued_bits());
    k.derive(static_cast<double>(duration_ms));
  }
  return total_;
}

std::vector<Sample> moving_average(const std::vector<Sample>& samples, Millis window_ms,
                                   Millis end_ms, EmptyWindowPolicy policy) {
  if (window_ms <= 0) throw std::invalid_argument("moving_average: window_ms must be positive");
  std::vector<Sample> out;
  double last = 0.0;
  std::size_t lo = 0, hi = 0;
  for (Millis end = window_ms; end - window_ms < end_ms; end += window_ms) {
    const Millis window_end = std::min(end, end_ms);
    const Millis window_start = window_end - window_ms;
    while (lo < samples.size() && samples[lo].t < window_start) ++lo;
    while (hi < samples.size() && samples[hi].t < window_end) ++hi;
    double mean;
    if (hi > lo) {
      double sum = 0.0;
      for (std::size_t i = lo; i < hi; ++i) sum += samples[i].value;
      mean = sum / static_cast<double>(hi - lo);
    } else {
      mean = policy == EmptyWindowPolicy::HoldLast ? last : 0.0;
    }
    out.push_back({window_end, mean});
    last = mean;
    if (window_end == end_ms) break;
  }
  return out;
}

}  // namespace payda
