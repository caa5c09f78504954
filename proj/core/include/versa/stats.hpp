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

/**
 * @file stats.hpp
 * @brief Run statistics and their JSON form.
 */

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "versa/energy.hpp"
#include "versa/program.hpp"
#include "versa/rocm.hpp"
#include "versa/sync.hpp"
#include "versa/topology.hpp"

namespace versa {

inline constexpr int kStatSchemaVersion = 1;

enum class StallReason : std::uint8_t { Mem, R2rReadEmpty, R2rWriteFull, Barrier, Fifo, Reconfig };
inline constexpr std::size_t kStallReasonCount = 6;
std::string_view stall_reason_name(StallReason r);

struct CoreStats {
  CoreId id;
  std::uint64_t busy = 0;
  std::uint64_t idle = 0;
  std::array<std::uint64_t, kStallReasonCount> stalled{};
  std::uint64_t ops = 0;
  std::uint64_t flops = 0;

  std::uint64_t stalled_total() const;
  std::uint64_t total() const { return busy + stalled_total() + idle; }
};

struct SliceRecord {
  int tile = 0;
  int slice = 0;
  SliceMode mode;
  SliceStats stats;
  std::uint64_t port_busy_cycles = 0;
};

struct ScratchpadRecord {
  std::string name;
  ScratchpadStats stats;
};

struct BarrierEpisode {
  BarrierScope scope = BarrierScope::Tree;
  int index = 0;
  int arrivals = 0;
  int expected = 0;
  Cycle first_entry = 0;
  Cycle last_entry = 0;
  Cycle last_release = 0;
  int released = 0;

  /// Cycles from the last arrival until every participant has left.
  Cycle latency() const { return last_release - last_entry; }
};

struct EnergyReport {
  std::array<std::uint64_t, kEnergyClassCount> counts{};
  std::array<double, kEnergyClassCount> energy{};
  std::vector<double> per_tile;
  double total = 0;
  std::uint64_t word_accesses = 0;
  double subbank_word_energy = 0;
  double monolithic_word_energy = 0;

  static EnergyReport from(const EnergyLedger& ledger);
};

struct StatRecord {
  int schema_version = kStatSchemaVersion;
  std::string tool_version;
  std::string timestamp;  // excluded from determinism comparisons

  Cycle cycles = 0;
  std::uint64_t flops = 0;
  std::vector<CoreStats> cores;
  std::vector<SliceRecord> slices;
  std::vector<ScratchpadRecord> scratchpads;
  std::vector<BarrierEpisode> barriers;
  std::uint64_t r2r_transfers = 0;
  EnergyReport energy;

  std::optional<DvfsPoint> dvfs;
  std::optional<Efficiency> efficiency;

  std::string kernel;
  std::string plan;
  std::optional<bool> output_match;
  nlohmann::json config;  // echo of the configuration that produced the run

  /// busy + stalled + idle == cycles for every core.
  bool accounting_closes() const;
  /// Fills `dvfs` and `efficiency` from the ledger total.
  void apply_dvfs(const DvfsPoint& p);
};

std::string tool_version();

nlohmann::json to_json(const StatRecord& r);
/// Same as to_json with the timestamp removed; used for determinism checks.
nlohmann::json to_json_canonical(const StatRecord& r);

}  // namespace versa
