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

#include "versa/rxb.hpp"

#include <algorithm>
#include <numeric>

#include "versa/errors.hpp"

namespace versa {

Route route(const MemRequest& req, const TileMode& mode, const Chip& chip) {
  const auto& g = chip.geometry();
  const auto& map = chip.address_map();
  if (!req.origin.is_worker())
    throw Error(ErrorCode::IllegalOp, to_string(req.origin) + ": managers have no crossbar data port");
  if (mode.rxb.kind == RxbKind::Queue)
    throw Error(ErrorCode::ModeViolation,
                to_string(req.origin) + ": load/store issued while the crossbar is in queue mode");
  auto loc = map.decode(req.addr);
  if (!loc) throw Error(ErrorCode::IllegalOp, "access to unmapped address " + std::to_string(req.addr));
  if (req.addr % g.word_size != 0)
    throw Error(ErrorCode::IllegalOp, "unaligned address " + std::to_string(req.addr));
  if (loc->region != Region::Rocm && loc->region != Region::Global)
    throw Error(ErrorCode::IllegalOp, "scratchpad address routed through the crossbar");

  const std::uint64_t word = loc->offset / g.word_size;
  Route r;
  r.region = loc->region;
  if (loc->region == Region::Global) r.global_word = word;
  if (mode.rxb.kind == RxbKind::Private) {
    r.slice = req.origin.local;
    if (loc->region == Region::Rocm && word >= g.slice_words())
      throw Error(ErrorCode::OutOfRange, to_string(req.origin) + ": private address " +
                                             std::to_string(req.addr) + " beyond slice capacity");
    r.local_word = word;
    return r;
  }
  auto sw = map.shared_slice(word);
  r.slice = sw.slice;
  // For global addresses this is the projected index space of a striped cache.
  r.local_word = sw.local_word;
  return r;
}

int access_latency(RxbKind mode, AccessOutcome outcome, const TimingParams& t, const ChipGeometry& g,
                   int line_words) {
  const int base = mode == RxbKind::Private ? t.private_spm : t.shared_spm;
  const int fill = (line_words + g.next_level_width - 1) / g.next_level_width;
  switch (outcome) {
    case AccessOutcome::Spm: return base;
    case AccessOutcome::CacheHit: return base + t.tag_check;
    case AccessOutcome::CacheMiss: return base + t.tag_check + g.next_level_latency + fill;
    case AccessOutcome::CacheMissDirty: return base + t.tag_check + g.next_level_latency + 2 * fill;
    case AccessOutcome::Uncached: return base + g.next_level_latency + 1;
    case AccessOutcome::Fifo: return t.fifo;
  }
  return base;
}

int port_occupancy(int latency) { return std::max(1, latency - 1); }

// ---------------------------------------------------------------------------

LrgArbiter::LrgArbiter(int n_requesters)
    : order_(static_cast<std::size_t>(n_requesters)), pos_(static_cast<std::size_t>(n_requesters)) {
  std::iota(order_.begin(), order_.end(), 0);
  std::iota(pos_.begin(), pos_.end(), 0);
}

std::optional<int> LrgArbiter::pick(std::span<const int> requesters) const {
  std::optional<int> best;
  int best_pos = 0;
  for (int id : requesters) {
    const int p = pos_[static_cast<std::size_t>(id)];
    if (!best || p < best_pos) {
      best = id;
      best_pos = p;
    }
  }
  return best;
}

void LrgArbiter::grant(int id) {
  const auto p = static_cast<std::size_t>(pos_[static_cast<std::size_t>(id)]);
  std::rotate(order_.begin() + static_cast<std::ptrdiff_t>(p),
              order_.begin() + static_cast<std::ptrdiff_t>(p) + 1, order_.end());
  for (std::size_t i = p; i < order_.size(); ++i) pos_[static_cast<std::size_t>(order_[i])] = static_cast<int>(i);
}

std::optional<int> LrgArbiter::arbitrate(std::span<const int> requesters) {
  auto winner = pick(requesters);
  if (winner) grant(*winner);
  return winner;
}

std::vector<std::optional<int>> arbitrate(const std::vector<std::vector<int>>& requests_per_slice,
                                          std::vector<LrgArbiter>& lrg) {
  std::vector<std::optional<int>> grants(requests_per_slice.size());
  for (std::size_t s = 0; s < requests_per_slice.size(); ++s)
    grants[s] = lrg[s].arbitrate(requests_per_slice[s]);
  return grants;
}

}  // namespace versa
