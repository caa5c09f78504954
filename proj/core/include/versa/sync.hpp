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
 * @file sync.hpp
 * @brief Tile/global scratchpads with atomics, and the barrier protocols.
 *
 * A scratchpad port is not pipelined: a granted operation holds the port for
 * its full latency, so concurrent atomics complete one per latency slot.
 * Requesters are ordered least-recently-granted.
 *
 * Barriers are sense-reversing and run as short micro-programs of atomics:
 *
 *   centralized  fetch_add on one G-SPM counter; the last arriver publishes
 *                the new sense, everyone else spins on the G-SPM sense word
 *   tree         fetch_add on the tile's T-SPM counter; each tile's last
 *                arriver escalates to a G-SPM counter and spins there; the
 *                last tile publishes the global sense, representatives copy
 *                it into their T-SPM sense word, locals spin on T-SPM
 *   tile         the tree's first level only
 *
 * The top words of each scratchpad are reserved for barrier state.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "versa/program.hpp"
#include "versa/rxb.hpp"
#include "versa/topology.hpp"

namespace versa {

struct ScratchpadStats {
  std::uint64_t ops = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t busy_cycles = 0;
};

class Scratchpad {
 public:
  Scratchpad(std::string name, std::uint32_t bytes, std::uint32_t word_size, int latency, int n_requesters);

  const std::string& name() const { return name_; }
  int latency() const { return latency_; }
  std::uint32_t words() const { return static_cast<std::uint32_t>(data_.size()); }

  /// Executes one atomic operation and returns the word observed before it.
  /// Throws OutOfRange.
  Word apply(AtomicKind kind, std::uint32_t word, Word operand);
  Word peek(std::uint32_t word) const;

  bool port_free(Cycle now) const { return now >= free_at_; }
  /// Grants one requester if the port is free; the port is then held for
  /// `latency` cycles. Losers are counted as conflicts.
  std::optional<int> arbitrate(Cycle now, std::span<const int> requesters);

  ScratchpadStats stats;

 private:
  std::string name_;
  std::vector<Word> data_;
  int latency_;
  LrgArbiter lrg_;
  Cycle free_at_ = 0;
};

/// Word indices of the reserved barrier state.
struct BarrierLayout {
  std::uint32_t tspm_counter;
  std::uint32_t tspm_sense;
  std::uint32_t gspm_central_counter;
  std::uint32_t gspm_central_sense;
  std::uint32_t gspm_tree_counter;
  std::uint32_t gspm_tree_sense;

  static constexpr std::uint32_t kTspmReserved = 2;
  static constexpr std::uint32_t kGspmReserved = 4;

  static BarrierLayout for_geometry(const ChipGeometry& g);
};

/// Everything one participant needs to run one barrier episode.
struct BarrierContext {
  BarrierScope scope = BarrierScope::Tree;
  BarrierLayout layout{};
  int tile_participants = 1;  // arrivals expected at this worker's tile
  int tiles = 1;              // tiles with at least one participant
  int total = 1;              // arrivals expected chip-wide
  Word sense = 0;             // the participant's sense after flipping
  bool backoff = false;
};

Addr tspm_addr(std::uint32_t word);
Addr gspm_addr(std::uint32_t word);

/// The barrier micro-program. Only issues Atomic (and, with backoff, Compute).
Task<void> barrier_protocol(BarrierContext ctx);

}  // namespace versa
