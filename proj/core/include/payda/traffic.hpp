#pragma once

#include <optional>
#include <string>
#include <vector>

#include "payda/model.hpp"

namespace payda {

// Periodic application traffic description: one fixed-size transmission
// every interval_ms, first one at start_offset_ms.
struct AppProfile {
  std::string name;
  Bits payload_bits = 0;
  Millis interval_ms = 0;
  Millis deadline_ms = 0;
  QciClass qci{};
  Millis start_offset_ms = 0;
  Bits fragment_bits = 0;   // 0 = emit the payload as one packet
  Bits max_queue_bits = 0;  // 0 = uncapped

  // bits per millisecond == kbit/s
  double rate_kbps() const { return static_cast<double>(payload_bits) / static_cast<double>(interval_ms); }

  friend bool operator==(const AppProfile&, const AppProfile&) = default;
};

// (data rate, interval) -> per-transmission payload, nearest bit.
Bits payload_from_rate(double rate_kbps, double interval_ms);

// Emits one packet exactly on the profile's grid, nothing otherwise. The
// caller assigns seq numbers; generation itself is jitter-free.
std::optional<Packet> generate(const AppProfile& profile, Millis now_ms);

// Splits a generated packet into <= max_bits pieces sharing its arrival
// time and deadline (scenario-file option for chunked transfers).
std::vector<Packet> fragment(const Packet& packet, Bits max_bits);

enum class StartOffsetMode {
  Equal,         // deterministic spacing over the first second
  SeededRandom,  // per-run uniform draw over the same window
};

struct UeSpec {
  int ue_id = 0;
  std::vector<AppProfile> apps;

  friend bool operator==(const UeSpec&, const UeSpec&) = default;
};

struct Scenario {
  std::string name;
  std::vector<UeSpec> ues;
  CellConfig cell{};
  StartOffsetMode offset_mode = StartOffsetMode::Equal;
  Millis offset_window_ms = 1000;

  struct DrbSpec {
    int drb_id = 0;
    int ue_id = 0;
    AppProfile app;
  };

  // One bearer per (UE, profile), ids 1..N in listed order.
  std::vector<DrbSpec> drbs() const;
  int n_ues() const { return static_cast<int>(ues.size()); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Validation scenario presets. Homogeneous: equal 2666 kbit/s / 100 ms
// crash-avoidance streams, UE 1 with a 100 ms budget (RT) and the rest with
// 300 ms (NRT). Heterogeneous: voltage control + two crash-avoidance RT
// streams, then 3 MB/s bulk downloads.
Scenario build_homogeneous(int n_ues);
Scenario build_heterogeneous(int n_ues);

}  // namespace payda
