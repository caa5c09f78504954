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

#include "versa/sync.hpp"

#include <algorithm>

#include "versa/errors.hpp"

namespace versa {

Scratchpad::Scratchpad(std::string name, std::uint32_t bytes, std::uint32_t word_size, int latency,
                       int n_requesters)
    : name_(std::move(name)), data_(bytes / word_size, 0), latency_(latency), lrg_(n_requesters) {}

Word Scratchpad::apply(AtomicKind kind, std::uint32_t word, Word operand) {
  if (word >= data_.size())
    throw Error(ErrorCode::OutOfRange, name_ + ": word " + std::to_string(word) + " beyond capacity");
  ++stats.ops;
  Word& cell = data_[word];
  const Word old = cell;
  switch (kind) {
    case AtomicKind::FetchAdd: cell = old + operand; break;
    case AtomicKind::Read: break;
    case AtomicKind::Write: cell = operand; break;
  }
  return old;
}

Word Scratchpad::peek(std::uint32_t word) const {
  if (word >= data_.size())
    throw Error(ErrorCode::OutOfRange, name_ + ": word " + std::to_string(word) + " beyond capacity");
  return data_[word];
}

std::optional<int> Scratchpad::arbitrate(Cycle now, std::span<const int> requesters) {
  if (requesters.empty()) return std::nullopt;
  if (!port_free(now)) {
    stats.conflicts += requesters.size();
    return std::nullopt;
  }
  auto winner = lrg_.arbitrate(requesters);
  stats.conflicts += requesters.size() - 1;
  free_at_ = now + static_cast<Cycle>(latency_);
  stats.busy_cycles += static_cast<std::uint64_t>(latency_);
  return winner;
}

BarrierLayout BarrierLayout::for_geometry(const ChipGeometry& g) {
  const std::uint32_t tw = g.tspm_capacity / g.word_size;
  const std::uint32_t gw = g.gspm_capacity / g.word_size;
  if (tw < kTspmReserved || gw < kGspmReserved)
    throw Error(ErrorCode::InvalidGeometry, "scratchpads too small for barrier state");
  return BarrierLayout{tw - 1, tw - 2, gw - 1, gw - 2, gw - 3, gw - 4};
}

Addr tspm_addr(std::uint32_t word) { return AddressMap::kTspmBase + word * 4u; }
Addr gspm_addr(std::uint32_t word) { return AddressMap::kGspmBase + word * 4u; }

namespace {

Task<void> spin_until(Addr addr, Word sense, bool backoff) {
  std::uint32_t wait = 1;
  while (co_await op::Atomic{AtomicKind::Read, addr, 0} != sense) {
    if (backoff) {
      co_await op::Compute{wait, 0};
      wait = std::min<std::uint32_t>(wait * 2, 64);
    }
  }
}

bool last_arrival(Word before, int target) {
  return (before + 1) % static_cast<Word>(target) == 0;
}

}  // namespace

Task<void> barrier_protocol(BarrierContext ctx) {
  const auto& l = ctx.layout;
  if (ctx.scope == BarrierScope::Centralized) {
    Word r = co_await op::Atomic{AtomicKind::FetchAdd, gspm_addr(l.gspm_central_counter), 1};
    if (last_arrival(r, ctx.total))
      co_await op::Atomic{AtomicKind::Write, gspm_addr(l.gspm_central_sense), ctx.sense};
    else
      co_await spin_until(gspm_addr(l.gspm_central_sense), ctx.sense, ctx.backoff);
    co_return;
  }

  Word r = co_await op::Atomic{AtomicKind::FetchAdd, tspm_addr(l.tspm_counter), 1};
  if (!last_arrival(r, ctx.tile_participants)) {
    co_await spin_until(tspm_addr(l.tspm_sense), ctx.sense, ctx.backoff);
    co_return;
  }
  if (ctx.scope == BarrierScope::Tree && ctx.tiles > 1) {
    Word g = co_await op::Atomic{AtomicKind::FetchAdd, gspm_addr(l.gspm_tree_counter), 1};
    if (last_arrival(g, ctx.tiles))
      co_await op::Atomic{AtomicKind::Write, gspm_addr(l.gspm_tree_sense), ctx.sense};
    else
      co_await spin_until(gspm_addr(l.gspm_tree_sense), ctx.sense, ctx.backoff);
  }
  co_await op::Atomic{AtomicKind::Write, tspm_addr(l.tspm_sense), ctx.sense};
}

}  // namespace versa
