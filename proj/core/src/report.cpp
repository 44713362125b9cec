#include "payda/report.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace payda {

std::string fmt_g6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::vector<OutputRow> make_rows(const RunResult& result) {
  struct DrbIdent {
    int ue_id;
    int qci;
    bool is_rt;
  };
  std::unordered_map<int, DrbIdent> ident;
  for (const DrbSummary& d : result.summary.drbs)
    ident.emplace(d.drb_id, DrbIdent{d.ue_id, d.qci.qci, d.qci.is_rt});

  std::vector<OutputRow> rows;
  rows.reserve(result.windows.size());
  for (const KpiRecord& w : result.windows) {
    const DrbIdent& id = ident.at(w.drb_id);
    OutputRow row;
    row.run = result.summary.run_index;
    row.scheduler = result.summary.scheduler;
    row.n_ues = result.summary.n_ues;
    row.time_s = static_cast<double>(w.window_end_ms) / 1000.0;
    row.ue_id = id.ue_id;
    row.drb_id = w.drb_id;
    row.qci = id.qci;
    row.is_rt = id.is_rt;
    row.hol_delay_ms = w.mean_hol_delay_ms;
    row.dmr = w.dmr;
    row.throughput_kbps = w.throughput_kbps;
    rows.push_back(row);
  }
  return rows;
}

void write_timeseries_csv(std::ostream& out, const std::vector<OutputRow>& rows) {
  out << "run,scheduler,n_ues,time_s,ue_id,drb_id,qci,is_rt,hol_delay_ms,dmr,throughput_kbps\n";
  for (const OutputRow& r : rows) {
    out << r.run << ',' << scheduler_name(r.scheduler) << ',' << r.n_ues << ','
        << fmt_g6(r.time_s) << ',' << r.ue_id << ',' << r.drb_id << ',' << r.qci << ','
        << (r.is_rt ? 1 : 0) << ',' << fmt_g6(r.hol_delay_ms) << ',' << fmt_g6(r.dmr) << ','
        << fmt_g6(r.throughput_kbps) << '\n';
  }
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json class_to_json(const ClassKpis& c) {
  return ordered_json{{"n_drbs", c.n_drbs},
                      {"mean_hol_delay_ms", c.mean_hol_delay_ms},
                      {"dmr", c.dmr},
                      {"throughput_kbps", c.throughput_kbps},
                      {"packets_missed", c.packets_missed},
                      {"packets_decided", c.packets_decided},
                      {"hol_samples", c.hol_samples},
                      {"hol_sum_ms", c.hol_sum_ms}};
}

ClassKpis class_from_json(const ordered_json& j) {
  ClassKpis c;
  c.n_drbs = j.at("n_drbs").get<int>();
  c.mean_hol_delay_ms = j.at("mean_hol_delay_ms").get<double>();
  c.dmr = j.at("dmr").get<double>();
  c.throughput_kbps = j.at("throughput_kbps").get<double>();
  c.packets_missed = j.at("packets_missed").get<double>();
  c.packets_decided = j.at("packets_decided").get<double>();
  c.hol_samples = j.at("hol_samples").get<double>();
  c.hol_sum_ms = j.at("hol_sum_ms").get<double>();
  return c;
}

ordered_json kpis_to_json(const DrbKpis& k) {
  return ordered_json{{"mean_hol_delay_ms", k.mean_hol_delay_ms},
                      {"dmr", k.dmr},
                      {"throughput_kbps", k.throughput_kbps},
                      {"packets_generated", k.packets_generated},
                      {"packets_delivered", k.packets_delivered},
                      {"packets_missed", k.packets_missed},
                      {"packets_dropped", k.packets_dropped},
                      {"hits", k.hits},
                      {"hol_samples", k.hol_samples},
                      {"hol_sum_ms", k.hol_sum_ms},
                      {"generated_bits", k.generated_bits},
                      {"delivered_bits", k.delivered_bits},
                      {"transmitted_bits", k.transmitted_bits},
                      {"dropped_bits", k.dropped_bits},
                      {"queued_packets_end", k.queued_packets_end},
                      {"queued_size_bits_end", k.queued_size_bits_end},
                      {"queued_remaining_bits_end", k.queued_remaining_bits_end}};
}

DrbKpis kpis_from_json(const ordered_json& j) {
  DrbKpis k;
  k.mean_hol_delay_ms = j.at("mean_hol_delay_ms").get<double>();
  k.dmr = j.at("dmr").get<double>();
  k.throughput_kbps = j.at("throughput_kbps").get<double>();
  k.packets_generated = j.at("packets_generated").get<double>();
  k.packets_delivered = j.at("packets_delivered").get<double>();
  k.packets_missed = j.at("packets_missed").get<double>();
  k.packets_dropped = j.at("packets_dropped").get<double>();
  k.hits = j.at("hits").get<double>();
  k.hol_samples = j.at("hol_samples").get<double>();
  k.hol_sum_ms = j.at("hol_sum_ms").get<double>();
  k.generated_bits = j.at("generated_bits").get<double>();
  k.delivered_bits = j.at("delivered_bits").get<double>();
  k.transmitted_bits = j.at("transmitted_bits").get<double>();
  k.dropped_bits = j.at("dropped_bits").get<double>();
  k.queued_packets_end = j.at("queued_packets_end").get<double>();
  k.queued_size_bits_end = j.at("queued_size_bits_end").get<double>();
  k.queued_remaining_bits_end = j.at("queued_remaining_bits_end").get<double>();
  return k;
}

ordered_json summary_to_json(const RunSummary& s) {
  ordered_json drbs = ordered_json::array();
  for (const DrbSummary& d : s.drbs) {
    drbs.push_back(ordered_json{{"drb_id", d.drb_id},
                                {"ue_id", d.ue_id},
                                {"qci", d.qci.qci},
                                {"deadline_ms", d.qci.deadline_ms},
                                {"is_rt", d.qci.is_rt},
                                {"kpis", kpis_to_json(d.kpis)}});
  }
  return ordered_json{{"scheduler", std::string(scheduler_name(s.scheduler))},
                      {"n_ues", s.n_ues},
                      {"seed", s.seed},
                      {"run_index", s.run_index},
                      {"n_runs", s.n_runs},
                      {"duration_ms", s.duration_ms},
                      {"rt", class_to_json(s.rt)},
                      {"nrt", class_to_json(s.nrt)},
                      {"drbs", std::move(drbs)}};
}

RunSummary summary_from_json(const ordered_json& j) {
  RunSummary s;
  const std::string name = j.at("scheduler").get<std::string>();
  const auto kind = scheduler_from_name(name);
  if (!kind) throw std::runtime_error("summary.json: unknown scheduler '" + name + "'");
  s.scheduler = *kind;
  s.n_ues = j.at("n_ues").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.run_index = j.at("run_index").get<int>();
  s.n_runs = j.at("n_runs").get<int>();
  s.duration_ms = j.at("duration_ms").get<Millis>();
  s.rt = class_from_json(j.at("rt"));
  s.nrt = class_from_json(j.at("nrt"));
  for (const ordered_json& d : j.at("drbs")) {
    DrbSummary drb;
    drb.drb_id = d.at("drb_id").get<int>();
    drb.ue_id = d.at("ue_id").get<int>();
    drb.qci.qci = d.at("qci").get<int>();
    drb.qci.deadline_ms = d.at("deadline_ms").get<Millis>();
    drb.qci.is_rt = d.at("is_rt").get<bool>();
    drb.kpis = kpis_from_json(d.at("kpis"));
    s.drbs.push_back(std::move(drb));
  }
  return s;
}

}  // namespace

void write_summary_json(std::ostream& out, const SummaryFile& summary) {
  ordered_json runs = ordered_json::array();
  for (const RunSummary& r : summary.runs) runs.push_back(summary_to_json(r));
  const ordered_json doc{{"runs", std::move(runs)}, {"mean", summary_to_json(summary.mean)}};
  out << doc.dump(2) << '\n';
}

SummaryFile read_summary_json(std::istream& in) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const ordered_json::parse_error& e) {
    throw std::runtime_error(std::string("summary.json: ") + e.what());
  }
  SummaryFile out;
  for (const ordered_json& r : doc.at("runs")) out.runs.push_back(summary_from_json(r));
  out.mean = summary_from_json(doc.at("mean"));
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
  out << "scheduler,n_ues,mean_hol_rt_ms,mean_hol_nrt_ms,mean_dmr,mean_throughput_kbps\n";
  for (const SweepPoint& p : points) {
    const double missed = p.mean.rt.packets_missed + p.mean.nrt.packets_missed;
    const double decided = p.mean.rt.packets_decided + p.mean.nrt.packets_decided;
    const double pooled_dmr = decided > 0.0 ? missed / decided : 0.0;
    out << scheduler_name(p.scheduler) << ',' << p.n_ues << ','
        << fmt_g6(p.mean.rt.mean_hol_delay_ms) << ',' << fmt_g6(p.mean.nrt.mean_hol_delay_ms)
        << ',' << fmt_g6(pooled_dmr) << ','
        << fmt_g6(p.mean.rt.throughput_kbps + p.mean.nrt.throughput_kbps) << '\n';
  }
}

}  // namespace payda
