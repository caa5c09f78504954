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
 * @file rxb.hpp
 * @brief The per-tile reconfigurable crossbar.
 *
 * Shared mode stripes addresses over all slices and arbitrates each slice
 * port least-recently-granted. A granted crosspoint stays locked for the
 * traverse and array stages, so one slice port accepts a new grant every
 * `latency - 1` cycles. Private mode locks worker i onto slice i and skips
 * the arbitration stage. Queue mode carries address-free FIFO traffic only;
 * a split crosspoint lets the producer push and the consumer pop through
 * the same port in one cycle.
 *
 * Uncontended latencies (cycles, issue cycle included):
 *
 *   outcome       shared            private
 *   spm           3                 2
 *   cache hit     4                 3
 *   cache miss    4 + L + F         3 + L + F      (L next-level latency,
 *   dirty miss    miss + F          miss + F        F = ceil(line/width))
 *   uncached      3 + L + 1         2 + L + 1
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "versa/modes.hpp"
#include "versa/topology.hpp"

namespace versa {

struct TimingParams {
  int shared_spm = 3;   // arbitrate + traverse + array
  int private_spm = 2;  // traverse + array
  int tag_check = 1;
  int fifo = 1;
  int tspm = 2;
  int gspm = 5;

  friend bool operator==(const TimingParams&, const TimingParams&) = default;
};

struct MemRequest {
  CoreId origin;
  bool write = false;
  Word value = 0;
  Addr addr = 0;
  Cycle issue_cycle = 0;
};

/// Where a crossbar request lands.
struct Route {
  int slice = 0;
  Region region = Region::Rocm;
  /// Slice-local word: the SRAM index for ROCM, the projected word used for
  /// cache indexing for global addresses.
  std::uint64_t local_word = 0;
  /// Word index into next-level memory (global region only).
  std::uint64_t global_word = 0;
};

/// Routes a load/store under the tile's current mode. Throws ModeViolation
/// for loads/stores in queue mode, OutOfRange for private addresses beyond
/// the slice, IllegalOp for unmapped or scratchpad addresses.
Route route(const MemRequest& req, const TileMode& mode, const Chip& chip);

enum class AccessOutcome : std::uint8_t { Spm, CacheHit, CacheMiss, CacheMissDirty, Uncached, Fifo };

int access_latency(RxbKind mode, AccessOutcome outcome, const TimingParams& t,
                   const ChipGeometry& g, int line_words = 8);

/// Cycles a shared-mode slice port stays locked after a grant.
int port_occupancy(int latency);

/// Least-recently-granted arbiter for one slice port (or scratchpad port).
class LrgArbiter {
 public:
  explicit LrgArbiter(int n_requesters = 0);

  /// Requester appearing earliest in the LRG order, without updating state.
  std::optional<int> pick(std::span<const int> requesters) const;
  /// Moves `id` to the most-recently-granted position.
  void grant(int id);
  /// pick + grant.
  std::optional<int> arbitrate(std::span<const int> requesters);

  const std::vector<int>& order() const { return order_; }
  int size() const { return static_cast<int>(order_.size()); }

 private:
  std::vector<int> order_;  // least recently granted first
  std::vector<int> pos_;    // id -> index in order_
};

/// One arbitration round over all slices: grants[s] is the requester granted
/// on slice s, if any. Losers are expected to retry next cycle.
std::vector<std::optional<int>> arbitrate(const std::vector<std::vector<int>>& requests_per_slice,
                                          std::vector<LrgArbiter>& lrg);

}  // namespace versa
