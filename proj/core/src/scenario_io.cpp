#include "payda/scenario_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace payda {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ScenarioError(origin + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& origin,
                    const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(origin, where + ": missing required field '" + key + "'");
  return *it;
}

std::int64_t require_int(const json& obj, const char* key, const std::string& origin,
                         const std::string& where) {
  const json& v = require(obj, key, origin, where);
  if (!v.is_number_integer()) fail(origin, where + ": field '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::int64_t optional_int(const json& obj, const char* key, std::int64_t fallback,
                          const std::string& origin, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) fail(origin, where + ": field '" + key + "' must be an integer");
  return it->get<std::int64_t>();
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& origin, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const bool ok = std::any_of(known.begin(), known.end(),
                                [&](const char* k) { return it.key() == k; });
    if (!ok) fail(origin, where + ": unknown field '" + it.key() + "'");
  }
}

AppProfile parse_app(const json& entry, int index, const std::string& origin) {
  const std::string where = "apps[" + std::to_string(index) + "]";
  if (!entry.is_object()) fail(origin, where + ": must be an object");
  reject_unknown_keys(entry,
                      {"ue", "qci", "rt", "deadline_ms", "interval_ms", "payload_bytes",
                       "rate_kbps", "start_ms", "name", "fragment_bits", "max_queue_bits"},
                      origin, where);

  AppProfile app;
  if (auto it = entry.find("name"); it != entry.end()) {
    if (!it->is_string()) fail(origin, where + ": field 'name' must be a string");
    app.name = it->get<std::string>();
  }

  app.qci.qci = static_cast<int>(require_int(entry, "qci", origin, where));
  const json& rt = require(entry, "rt", origin, where);
  if (!rt.is_boolean()) fail(origin, where + ": field 'rt' must be a boolean");
  app.qci.is_rt = rt.get<bool>();

  app.deadline_ms = require_int(entry, "deadline_ms", origin, where);
  if (app.deadline_ms <= 0) fail(origin, where + ": field 'deadline_ms' must be positive");
  app.qci.deadline_ms = app.deadline_ms;

  app.interval_ms = require_int(entry, "interval_ms", origin, where);
  if (app.interval_ms <= 0) fail(origin, where + ": field 'interval_ms' must be positive");

  app.start_offset_ms = optional_int(entry, "start_ms", 0, origin, where);
  if (app.start_offset_ms < 0) fail(origin, where + ": field 'start_ms' must be non-negative");

  const auto bytes_it = entry.find("payload_bytes");
  const auto rate_it = entry.find("rate_kbps");
  if (bytes_it == entry.end() && rate_it == entry.end())
    fail(origin, where + ": one of 'payload_bytes' or 'rate_kbps' is required");
  if (bytes_it != entry.end()) {
    if (!bytes_it->is_number_integer())
      fail(origin, where + ": field 'payload_bytes' must be an integer");
    app.payload_bits = bytes_it->get<std::int64_t>() * 8;
  }
  if (rate_it != entry.end()) {
    if (!rate_it->is_number()) fail(origin, where + ": field 'rate_kbps' must be a number");
    const double rate = rate_it->get<double>();
    if (rate <= 0.0) fail(origin, where + ": field 'rate_kbps' must be positive");
    const Bits from_rate = payload_from_rate(rate, static_cast<double>(app.interval_ms));
    if (bytes_it != entry.end() && from_rate != app.payload_bits)
      fail(origin, where + ": 'payload_bytes' and 'rate_kbps' disagree (" +
                       std::to_string(app.payload_bits) + " vs " + std::to_string(from_rate) +
                       " bits over interval_ms)");
    app.payload_bits = from_rate;
  }
  if (app.payload_bits <= 0) fail(origin, where + ": payload must be positive");

  app.fragment_bits = optional_int(entry, "fragment_bits", 0, origin, where);
  if (app.fragment_bits < 0) fail(origin, where + ": field 'fragment_bits' must be non-negative");
  app.max_queue_bits = optional_int(entry, "max_queue_bits", 0, origin, where);
  if (app.max_queue_bits < 0) fail(origin, where + ": field 'max_queue_bits' must be non-negative");
  return app;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, e.what());  // includes line/offset context from the parser
  }
  if (!doc.is_object()) fail(origin, "top level must be an object");
  reject_unknown_keys(doc, {"name", "cell", "start_offsets", "offset_window_ms", "apps"}, origin,
                      "top level");

  Scenario sc;
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) fail(origin, "field 'name' must be a string");
    sc.name = it->get<std::string>();
  }

  const json& cell = require(doc, "cell", origin, "top level");
  if (!cell.is_object()) fail(origin, "'cell' must be an object");
  reject_unknown_keys(cell, {"bandwidth_rbs", "bits_per_rb", "tti_ms", "duration_ms", "seed"},
                      origin, "cell");
  sc.cell.bandwidth_rbs = static_cast<int>(require_int(cell, "bandwidth_rbs", origin, "cell"));
  sc.cell.bits_per_rb_per_tti = require_int(cell, "bits_per_rb", origin, "cell");
  sc.cell.tti_ms = require_int(cell, "tti_ms", origin, "cell");
  sc.cell.duration_ms = optional_int(cell, "duration_ms", sc.cell.duration_ms, origin, "cell");
  sc.cell.seed = static_cast<std::uint64_t>(
      optional_int(cell, "seed", static_cast<std::int64_t>(sc.cell.seed), origin, "cell"));
  if (sc.cell.bandwidth_rbs <= 0) fail(origin, "cell: 'bandwidth_rbs' must be positive");
  if (sc.cell.bits_per_rb_per_tti <= 0) fail(origin, "cell: 'bits_per_rb' must be positive");
  if (sc.cell.tti_ms <= 0) fail(origin, "cell: 'tti_ms' must be positive");

  if (auto it = doc.find("start_offsets"); it != doc.end()) {
    if (!it->is_string()) fail(origin, "field 'start_offsets' must be a string");
    const std::string mode = it->get<std::string>();
    if (mode == "equal")
      sc.offset_mode = StartOffsetMode::Equal;
    else if (mode == "seeded")
      sc.offset_mode = StartOffsetMode::SeededRandom;
    else
      fail(origin, "field 'start_offsets' must be 'equal' or 'seeded', got '" + mode + "'");
  }
  sc.offset_window_ms =
      optional_int(doc, "offset_window_ms", sc.offset_window_ms, origin, "top level");
  if (sc.offset_window_ms <= 0) fail(origin, "field 'offset_window_ms' must be positive");

  const json& apps = require(doc, "apps", origin, "top level");
  if (!apps.is_array() || apps.empty()) fail(origin, "'apps' must be a non-empty array");

  // Bearers group under their UE; UEs are ordered by id no matter how the
  // file interleaves entries.
  std::map<int, UeSpec> ues;
  int index = 0;
  for (const json& entry : apps) {
    const std::string where = "apps[" + std::to_string(index) + "]";
    if (!entry.is_object()) fail(origin, where + ": must be an object");
    const std::int64_t ue_id = require_int(entry, "ue", origin, where);
    if (ue_id < 1) fail(origin, where + ": field 'ue' must be >= 1");
    AppProfile app = parse_app(entry, index, origin);
    UeSpec& ue = ues[static_cast<int>(ue_id)];
    ue.ue_id = static_cast<int>(ue_id);
    ue.apps.push_back(std::move(app));
    ++index;
  }
  for (auto& [id, ue] : ues) sc.ues.push_back(std::move(ue));
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw ScenarioError(path + ": read failed");
  return parse_scenario(buf.str(), path);
}

}  // namespace payda
