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
 * @file engine.hpp
 * @brief The synchronous cycle engine.
 *
 * Every cycle runs three phases:
 *
 *   1. step     cores in stepping order issue at most one operation each;
 *               private-mode accesses and compute complete their bookkeeping
 *               here, everything else registers a request
 *   2. arbitrate  slice ports (shared mode) and scratchpad ports grant one
 *               requester each, least-recently-granted first
 *   3. commit   register links and queue FIFOs resolve all requests of the
 *               cycle against pre-cycle state
 *
 * Losers and blocked requesters retry the same operation next cycle. The
 * engine is single-threaded and deterministic; one Simulator instance owns
 * all of its state and may be moved to another thread between runs.
 */

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "versa/energy.hpp"
#include "versa/modes.hpp"
#include "versa/program.hpp"
#include "versa/r2r.hpp"
#include "versa/rocm.hpp"
#include "versa/rxb.hpp"
#include "versa/stats.hpp"
#include "versa/sync.hpp"
#include "versa/topology.hpp"

namespace versa {

struct SimOptions {
  Cycle cycle_limit = 50'000'000;
  bool strict_dirty = true;
  TimingParams timing;
  EnergyCoefficients energy;
  /// Worker indices taking part in barriers; empty means every worker.
  std::vector<int> barrier_participants;
  bool spin_backoff = false;
  bool trace = false;
};

/// One accepted operation, recorded when `SimOptions::trace` is set.
struct TraceEvent {
  int core = 0;
  std::string op;
  Cycle issue = 0;     // first cycle the core tried to issue it
  Cycle accept = 0;    // cycle it was granted / resolved
  Cycle complete = 0;  // first cycle the core may issue again
  Word value = 0;
};

class Simulator {
 public:
  explicit Simulator(Chip chip, SimOptions opts = {});
  ~Simulator();
  Simulator(Simulator&&) noexcept;
  Simulator& operator=(Simulator&&) noexcept;

  const Chip& chip() const;
  const SimOptions& options() const;

  void load(const CoreId& core, Program program);
  /// Installs a tile mode before the run, at no cycle cost.
  void set_initial_mode(int tile, const TileMode& mode);
  const TileMode& tile_mode(int tile) const;

  NextLevelMemory& memory();
  Slice& slice(int tile, int slice);
  Scratchpad& tspm(int tile);
  Scratchpad& gspm();
  const LinkMesh& links() const;
  const EnergyLedger& ledger() const;

  Cycle now() const;
  bool all_halted() const;
  /// Advances one cycle. Returns false once every core has halted.
  bool step();
  /// Runs until every core halts. Throws Deadlock, CycleLimitExceeded or
  /// TargetMismatch, and any error raised by an operation.
  StatRecord run();
  StatRecord stats() const;

  const std::vector<TraceEvent>& trace() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Builds a simulator with every tile in shared/spm mode, installs the given
/// programs and runs to completion.
StatRecord run_until_halt(const Chip& chip, std::vector<std::pair<CoreId, Program>> programs, Cycle limit,
                          SimOptions opts = {});

}  // namespace versa
