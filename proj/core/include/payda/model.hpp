#pragma once

#include <cassert>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

namespace payda {

using Millis = std::int64_t;  // simulation timestamps: milliseconds since run start
using Bits = std::int64_t;

// One application-layer payload unit. Only times and sizes are tracked, in
// bits, so the per-RB transport grain never forces fractional accounting.
struct Packet {
  std::uint64_t seq = 0;
  Millis arrival_time_ms = 0;
  Bits size_bits = 0;
  Bits remaining_bits = 0;
  Millis deadline_offset_ms = 0;
  std::optional<Millis> delivered_time_ms{};
  bool miss_recorded = false;

  // Expired once the head-of-line age reaches the delay budget: service in
  // the current TTI would complete after the deadline.
  bool expired(Millis now) const { return now - arrival_time_ms >= deadline_offset_ms; }

  friend bool operator==(const Packet&, const Packet&) = default;
};

// LTE QoS class label plus the delay budget a scenario attaches to it.
// Real-time membership is defined by the scenario, never by the QCI value.
struct QciClass {
  int qci = 9;
  Millis deadline_ms = 300;
  bool is_rt = false;

  friend bool operator==(const QciClass&, const QciClass&) = default;
};

// Static cell parameters. The default 25 RB x 732 bit grid carries
// 18.3 Mbit/s at one scheduling decision per millisecond.
struct CellConfig {
  int bandwidth_rbs = 25;
  Millis tti_ms = 1;
  Bits bits_per_rb_per_tti = 732;
  Millis duration_ms = 300'000;
  std::uint64_t seed = 1;

  std::int64_t capacity_bps() const {
    return static_cast<std::int64_t>(bandwidth_rbs) * bits_per_rb_per_tti * (1000 / tti_ms);
  }

  friend bool operator==(const CellConfig&, const CellConfig&) = default;
};

// Priority a scheduler assigned to one bearer for the current TTI.
struct SchedulingMetric {
  double value = 0.0;
  int drb_id = 0;
};

struct TransmitResult {
  Bits consumed_bits = 0;
  std::vector<Packet> delivered;
};

// Per-bearer FIFO at the eNodeB. The head packet is the only one that is
// ever partially transmitted; everything behind it is untouched.
class DrbQueue {
 public:
  DrbQueue() = default;
  DrbQueue(int drb_id, int ue_id, QciClass qci, Bits max_queue_bits = 0)
      : drb_id(drb_id), ue_id(ue_id), qci(qci), max_queue_bits(max_queue_bits) {}

  int drb_id = 0;
  int ue_id = 0;
  QciClass qci{};
  Bits max_queue_bits = 0;  // 0 = uncapped

  bool empty() const { return packets_.empty(); }
  std::size_t size() const { return packets_.size(); }
  const Packet& head() const { return packets_.front(); }
  const std::deque<Packet>& packets() const { return packets_; }

  // Un-sent bits over the whole queue (the partially drained head counts
  // its remaining share only).
  Bits queued_bits() const { return queued_bits_; }
  // Sum of size_bits over queued packets, for accounting closure.
  Bits queued_size_bits() const { return queued_size_bits_; }

  std::int64_t dropped_packets() const { return dropped_packets_; }
  Bits dropped_bits() const { return dropped_bits_; }

  // Age of the head packet; empty queues have no head-of-line delay.
  std::optional<Millis> hol_delay(Millis now) const {
    if (packets_.empty()) return std::nullopt;
    assert(now >= packets_.front().arrival_time_ms);
    return now - packets_.front().arrival_time_ms;
  }

  // Tail append, all-or-nothing against the cap. Rejection is a normal
  // outcome and is tallied as a queue-overflow drop.
  bool enqueue(Packet pkt) {
    assert(pkt.remaining_bits == pkt.size_bits);
    if (max_queue_bits > 0 && queued_bits_ + pkt.size_bits > max_queue_bits) {
      ++dropped_packets_;
      dropped_bits_ += pkt.size_bits;
      return false;
    }
    queued_bits_ += pkt.size_bits;
    queued_size_bits_ += pkt.size_bits;
    packets_.push_back(std::move(pkt));
    return true;
  }

  TransmitResult transmit_from_head(Bits bits, Millis now);

  // Walk the not-yet-counted queue prefix and flag packets whose deadline
  // has passed. Deadlines are uniform within a bearer, so expired packets
  // always form a head-side prefix.
  template <typename Fn>
  void scan_expired(Millis now, Fn&& on_miss) {
    while (expired_prefix_ < packets_.size()) {
      Packet& p = packets_[expired_prefix_];
      if (!p.expired(now)) break;
      assert(!p.miss_recorded);
      p.miss_recorded = true;
      on_miss(p);
      ++expired_prefix_;
    }
  }

 private:
  std::deque<Packet> packets_;
  Bits queued_bits_ = 0;
  Bits queued_size_bits_ = 0;
  std::size_t expired_prefix_ = 0;  // head-side packets already miss-counted
  std::int64_t dropped_packets_ = 0;
  Bits dropped_bits_ = 0;
};

}  // namespace payda
