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
 * @file r2r.hpp
 * @brief Register-to-register links between mesh-adjacent workers.
 *
 * Every directed link is a single-entry buffer with two control bits (FULL
 * and writer-pending) plus a one-word payload. Reads and writes registered
 * during a cycle are resolved together in the commit phase:
 *
 *  - a read succeeds iff the link was FULL at the start of the cycle, and
 *    observes that payload;
 *  - a write succeeds iff the link was EMPTY, or a read drains it in the
 *    same cycle; the written word is visible from the next cycle;
 *  - a move (read one link, write another) succeeds iff both halves do.
 *
 * Resolution takes the greatest fixed point, so a full chain of moves shifts
 * in lock-step and sustains one word per cycle. Failed requesters retry next
 * cycle; nothing is ever overwritten or read twice.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "versa/topology.hpp"

namespace versa {

struct LinkState {
  bool full = false;
  bool writer_pending = false;
  Word payload = 0;  // meaningful only when full
};

class LinkMesh {
 public:
  explicit LinkMesh(const Chip& chip);

  /// Outgoing link of worker `w` toward `d`, or -1 at the mesh boundary.
  int out_link(int worker_index, Direction d) const;
  /// Link arriving at worker `w` from its neighbour in direction `d`, or -1.
  int in_link(int worker_index, Direction d) const;
  /// Destination worker index of a link.
  int link_target(int link) const { return targets_[static_cast<std::size_t>(link)]; }
  int link_source(int link) const { return link / 4; }
  int link_count() const { return static_cast<int>(links_.size()); }

  const LinkState& state(int link) const { return links_[static_cast<std::size_t>(link)]; }

  using Ticket = int;
  Ticket request_read(int link);
  Ticket request_write(int link, Word value);
  Ticket request_move(int in, int out);

  struct Outcome {
    bool ok = false;
    bool read_side_failed = false;  // for moves: which half blocked
    Word value = 0;                 // word read (reads and moves)
  };

  /// Resolves every registered request, applies successes, clears requests.
  void resolve();
  const Outcome& outcome(Ticket t) const { return outcomes_[static_cast<std::size_t>(t)]; }
  bool has_requests() const { return !reqs_.empty(); }

  std::uint64_t transfers() const { return transfers_; }

 private:
  enum class Kind : std::uint8_t { Read, Write, Move };
  struct Req {
    Kind kind;
    int in = -1;
    int out = -1;
    Word value = 0;
  };

  std::vector<LinkState> links_;
  std::vector<int> targets_;
  std::vector<Req> reqs_;
  std::vector<Outcome> outcomes_;
  std::vector<int> reader_of_;
  std::vector<int> writer_of_;
  std::uint64_t transfers_ = 0;
};

}  // namespace versa
