/*
 * Copyright 2026 The Versa Simulator Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "versa/stats.hpp"

#include <numeric>

namespace versa {

using nlohmann::json;

std::string_view stall_reason_name(StallReason r) {
  switch (r) {
    case StallReason::Mem: return "mem";
    case StallReason::R2rReadEmpty: return "r2r_read_empty";
    case StallReason::R2rWriteFull: return "r2r_write_full";
    case StallReason::Barrier: return "barrier";
    case StallReason::Fifo: return "fifo";
    case StallReason::Reconfig: return "reconfig";
  }
  return "?";
}

std::uint64_t CoreStats::stalled_total() const {
  return std::accumulate(stalled.begin(), stalled.end(), std::uint64_t{0});
}

EnergyReport EnergyReport::from(const EnergyLedger& ledger) {
  EnergyReport r;
  for (auto c : all_energy_classes()) {
    r.counts[static_cast<std::size_t>(c)] = ledger.count(c);
    r.energy[static_cast<std::size_t>(c)] = ledger.energy(c);
  }
  for (int t = 0; t < ledger.n_tiles(); ++t) r.per_tile.push_back(ledger.tile_total(t));
  r.total = ledger.total();
  r.word_accesses = ledger.word_accesses();
  r.subbank_word_energy = ledger.subbank_word_energy();
  r.monolithic_word_energy = ledger.monolithic_word_energy();
  return r;
}

bool StatRecord::accounting_closes() const {
  for (const auto& c : cores)
    if (c.total() != cycles) return false;
  return true;
}

void StatRecord::apply_dvfs(const DvfsPoint& p) {
  dvfs = p;
  efficiency = versa::efficiency(flops, cycles, energy.total, p);
}

std::string tool_version() {
#ifdef VERSA_VERSION
  return VERSA_VERSION;
#else
  return "unknown";
#endif
}

namespace {

json slice_mode_json(const SliceMode& m) {
  json j{{"kind", slice_kind_name(m.kind)}};
  if (m.kind == SliceKind::Cache) j["line_words"] = m.line_words;
  if (m.kind == SliceKind::Fifo) j["capacity"] = m.fifo_capacity;
  return j;
}

json dvfs_json(const DvfsPoint& p) {
  return json{{"vdd", p.vdd},
              {"freq_hz", p.freq_hz},
              {"energy_per_cycle_pj", p.energy_per_cycle_pj},
              {"power_full_w", p.power_full_w},
              {"activity", p.activity},
              {"gflops", p.gflops},
              {"interpolated", p.interpolated}};
}

}  // namespace

json to_json(const StatRecord& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["tool_version"] = r.tool_version;
  j["timestamp"] = r.timestamp;
  j["kernel"] = r.kernel;
  j["plan"] = r.plan;
  j["output_match"] = r.output_match ? json(*r.output_match) : json(nullptr);
  j["cycles"] = r.cycles;
  j["flops"] = r.flops;
  j["r2r_transfers"] = r.r2r_transfers;
  j["accounting_closes"] = r.accounting_closes();

  json cores = json::array();
  for (const auto& c : r.cores) {
    json stalls;
    for (std::size_t i = 0; i < kStallReasonCount; ++i)
      stalls[std::string(stall_reason_name(static_cast<StallReason>(i)))] = c.stalled[i];
    cores.push_back({{"core", to_string(c.id)},
                     {"busy", c.busy},
                     {"stalled", stalls},
                     {"idle", c.idle},
                     {"ops", c.ops},
                     {"flops", c.flops}});
  }
  j["cores"] = std::move(cores);

  json slices = json::array();
  for (const auto& s : r.slices) {
    slices.push_back({{"tile", s.tile},
                      {"slice", s.slice},
                      {"mode", slice_mode_json(s.mode)},
                      {"reads", s.stats.reads},
                      {"writes", s.stats.writes},
                      {"hits", s.stats.hits},
                      {"misses", s.stats.misses},
                      {"evictions", s.stats.evictions},
                      {"writebacks", s.stats.writebacks},
                      {"conflicts", s.stats.conflicts},
                      {"grants", s.stats.grants},
                      {"pushes", s.stats.pushes},
                      {"pops", s.stats.pops},
                      {"fifo_max_fill", s.stats.fifo_max_fill},
                      {"flushes", s.stats.flushes},
                      {"port_busy_cycles", s.port_busy_cycles},
                      {"occupancy", r.cycles ? static_cast<double>(s.port_busy_cycles) / static_cast<double>(r.cycles)
                                             : 0.0}});
  }
  j["slices"] = std::move(slices);

  json spms = json::array();
  for (const auto& s : r.scratchpads)
    spms.push_back({{"name", s.name},
                    {"ops", s.stats.ops},
                    {"conflicts", s.stats.conflicts},
                    {"busy_cycles", s.stats.busy_cycles}});
  j["scratchpads"] = std::move(spms);

  json bars = json::array();
  for (const auto& b : r.barriers)
    bars.push_back({{"scope", barrier_scope_name(b.scope)},
                    {"index", b.index},
                    {"arrivals", b.arrivals},
                    {"expected", b.expected},
                    {"first_entry", b.first_entry},
                    {"last_entry", b.last_entry},
                    {"last_release", b.last_release},
                    {"latency", b.latency()}});
  j["barriers"] = std::move(bars);

  json energy;
  json classes;
  for (auto c : all_energy_classes()) {
    const auto i = static_cast<std::size_t>(c);
    classes[std::string(energy_class_name(c))] = {{"count", r.energy.counts[i]}, {"energy", r.energy.energy[i]}};
  }
  energy["classes"] = std::move(classes);
  energy["per_tile"] = r.energy.per_tile;
  energy["total"] = r.energy.total;
  energy["word_accesses"] = r.energy.word_accesses;
  energy["subbank_word_energy"] = r.energy.subbank_word_energy;
  energy["monolithic_word_energy"] = r.energy.monolithic_word_energy;
  energy["area_increase_subbanking"] = 0.34;  // reported constant
  j["energy"] = std::move(energy);

  if (r.dvfs) j["dvfs"] = dvfs_json(*r.dvfs);
  if (r.efficiency) {
    const auto& e = *r.efficiency;
    j["gflops"] = e.gflops;
    j["event_model"] = {{"watts", e.event_watts}, {"gflops_per_watt", e.event_gflops_per_watt}};
    j["envelope_model"] = {{"watts", e.envelope_watts}, {"gflops_per_watt", e.envelope_gflops_per_watt}};
    j["seconds"] = e.seconds;
  }
  j["config"] = r.config;
  return j;
}

json to_json_canonical(const StatRecord& r) {
  json j = to_json(r);
  j.erase("timestamp");
  return j;
}

}  // namespace versa
