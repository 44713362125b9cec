#pragma once

#include <stdexcept>
#include <string>

#include "payda/traffic.hpp"

namespace payda {

// Parse or validation failure while loading a scenario file. The message
// names the file and the offending field.
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Load a scenario from a JSON file:
//
//   {
//     "name": "homogeneous",
//     "cell": {"bandwidth_rbs": 25, "bits_per_rb": 732, "tti_ms": 1},
//     "start_offsets": "equal",          // or "seeded" (optional)
//     "offset_window_ms": 1000,          // optional
//     "apps": [
//       {"ue": 1, "qci": 7, "rt": true, "deadline_ms": 100,
//        "interval_ms": 100, "payload_bytes": 33325, "start_ms": 0,
//        "name": "crash-avoidance-rt"}
//     ]
//   }
//
// Each app entry becomes one bearer. Payload size comes from payload_bytes
// or from rate_kbps (converted over the interval); giving both is allowed
// only when they agree. Optional per-app fields: fragment_bits,
// max_queue_bits. Optional cell fields: duration_ms, seed.
Scenario load_scenario(const std::string& path);

// Same, parsing from a string (origin only labels error messages).
Scenario parse_scenario(const std::string& text, const std::string& origin);

}  // namespace payda
