#include "payda/traffic.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace payda {

Bits payload_from_rate(double rate_kbps, double interval_ms) {
  assert(rate_kbps > 0.0 && interval_ms > 0.0);
  // kbit/s * ms == bits
  return static_cast<Bits>(std::llround(rate_kbps * interval_ms));
}

std::optional<Packet> generate(const AppProfile& profile, Millis now_ms) {
  const Millis since_start = now_ms - profile.start_offset_ms;
  if (since_start < 0 || since_start % profile.interval_ms != 0) return std::nullopt;
  Packet pkt;
  pkt.arrival_time_ms = now_ms;
  pkt.size_bits = profile.payload_bits;
  pkt.remaining_bits = profile.payload_bits;
  pkt.deadline_offset_ms = profile.deadline_ms;
  return pkt;
}

std::vector<Packet> fragment(const Packet& packet, Bits max_bits) {
  assert(max_bits > 0);
  std::vector<Packet> parts;
  Bits left = packet.size_bits;
  while (left > 0) {
    Packet part = packet;
    part.size_bits = std::min(left, max_bits);
    part.remaining_bits = part.size_bits;
    parts.push_back(part);
    left -= part.size_bits;
  }
  return parts;
}

std::vector<Scenario::DrbSpec> Scenario::drbs() const {
  std::vector<DrbSpec> out;
  int next_id = 1;
  for (const UeSpec& ue : ues)
    for (const AppProfile& app : ue.apps) out.push_back(DrbSpec{next_id++, ue.ue_id, app});
  return out;
}

namespace {

Millis equal_offset(int ue_index_1based, int n_ues, Millis window_ms) {
  return static_cast<Millis>(ue_index_1based - 1) * window_ms / n_ues;
}

}  // namespace

Scenario build_homogeneous(int n_ues) {
  if (n_ues < 1) throw std::invalid_argument("build_homogeneous: n_ues must be >= 1");

  const Bits payload = payload_from_rate(2666.0, 100.0);  // 266600 bits per burst

  Scenario sc;
  sc.name = "homogeneous";
  for (int i = 1; i <= n_ues; ++i) {
    AppProfile app;
    app.payload_bits = payload;
    app.interval_ms = 100;
    app.start_offset_ms = equal_offset(i, n_ues, sc.offset_window_ms);
    if (i == 1) {
      app.name = "crash-avoidance-rt";
      app.deadline_ms = 100;
      app.qci = QciClass{7, 100, true};
    } else {
      app.name = "crash-avoidance-nrt";
      app.deadline_ms = 300;
      app.qci = QciClass{9, 300, false};
    }
    sc.ues.push_back(UeSpec{i, {app}});
  }
  return sc;
}

Scenario build_heterogeneous(int n_ues) {
  if (n_ues < 1) throw std::invalid_argument("build_heterogeneous: n_ues must be >= 1");

  Scenario sc;
  sc.name = "heterogeneous";
  for (int i = 1; i <= n_ues; ++i) {
    AppProfile app;
    app.start_offset_ms = equal_offset(i, n_ues, sc.offset_window_ms);
    switch (i) {
      case 1:
        app.name = "voltage-control";
        app.payload_bits = payload_from_rate(625.0, 1000.0);  // 625000
        app.interval_ms = 1000;
        app.deadline_ms = 100;
        app.qci = QciClass{5, 100, true};
        break;
      case 2:
        app.name = "crash-avoidance-50ms";
        app.payload_bits = payload_from_rate(500.0, 50.0);  // 25000
        app.interval_ms = 50;
        app.deadline_ms = 100;
        app.qci = QciClass{7, 100, true};
        break;
      case 3:
        app.name = "crash-avoidance-100ms";
        app.payload_bits = payload_from_rate(2666.0, 100.0);  // 266600
        app.interval_ms = 100;
        app.deadline_ms = 100;
        app.qci = QciClass{9, 100, true};
        break;
      default:
        app.name = "bulk-download";
        app.payload_bits = 24'000'000;  // one 3 MB chunk
        app.interval_ms = 1000;
        app.deadline_ms = 1000;
        app.qci = QciClass{9, 1000, false};
        break;
    }
    sc.ues.push_back(UeSpec{i, {app}});
  }
  return sc;
}

}  // namespace payda
