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

#include "versa/engine.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <set>
#include <sstream>

#include "versa/errors.hpp"

namespace versa {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

enum class Wait : std::uint8_t { None, Mem, Atomic, R2r, Fifo, Retry };
enum class Acc : std::uint8_t { Busy, Stall, Idle };

[[noreturn]] void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

int ceil_div(std::uint64_t a, int b) { return static_cast<int>((a + static_cast<std::uint64_t>(b) - 1) / static_cast<std::uint64_t>(b)); }

struct AccessResult {
  int latency = 0;
  int occupancy = 1;
  Word value = 0;
};

}  // namespace

struct CoreRt {
  CoreId id;
  int index = 0;
  int widx = -1;  // worker index, -1 for managers

  Program prog;
  Program macro;
  bool in_macro = false;
  bool halted = false;

  Cycle ready_at = 0;
  Word result = 0;
  Acc occ = Acc::Busy;
  StallReason occ_reason = StallReason::Mem;
  Acc acc = Acc::Idle;
  StallReason acc_reason = StallReason::Mem;

  Wait wait = Wait::None;
  std::optional<CoreOp> pending;
  Cycle pending_since = 0;
  Route route;
  int ticket = -1;
  // atomic request
  AtomicKind atomic_kind = AtomicKind::Read;
  std::uint32_t atomic_word = 0;
  Word atomic_operand = 0;
  bool atomic_global = false;

  bool r2r_enabled = false;
  std::array<Word, 2> sense{};
  std::array<int, 3> episode_count{};
  int barrier_group = -1;
  int barrier_k = -1;

  CoreStats stats;
};

struct TileRt {
  TileMode mode;
  std::vector<Slice> slices;
  std::vector<Cycle> port_free_at;
  std::vector<std::uint64_t> port_busy;
  std::vector<Cycle> blocked_until;
  std::vector<Cycle> miss_until;
  std::vector<LrgArbiter> lrg;
  std::vector<std::vector<int>> requests;
  Scratchpad tspm;
  std::vector<int> tspm_requests;
  std::vector<int> fifo_push;
  std::vector<int> fifo_pop;
  std::vector<int> worker_core;
  int manager_core = 0;

  TileRt(Scratchpad spm) : tspm(std::move(spm)) {}
};

struct Simulator::Impl {
  Chip chip;
  SimOptions opts;
  BarrierLayout layout;
  NextLevelMemory mem;
  std::vector<CoreRt> cores;
  std::vector<TileRt> tiles;
  Scratchpad gspm;
  std::vector<int> gspm_requests;
  LinkMesh links;
  EnergyLedger ledger;
  // Barrier groups: 0 centralized, 1 tree, 2 + t tile-scope barriers of tile t.
  std::vector<std::vector<BarrierEpisode>> episodes;
  std::vector<char> participant;
  std::vector<int> tile_participants;
  int participating_tiles = 0;
  int total_participants = 0;

  std::vector<int> r2r_waiters;
  Cycle t = 0;
  std::uint64_t flops = 0;
  std::vector<TraceEvent> trace;

  Impl(Chip c, SimOptions o)
      : chip(std::move(c)),
        opts(std::move(o)),
        layout(BarrierLayout::for_geometry(chip.geometry())),
        mem(chip.geometry().global_capacity / chip.geometry().word_size),
        gspm("gspm", chip.geometry().gspm_capacity, chip.geometry().word_size, opts.timing.gspm,
             static_cast<int>(chip.cores().size())),
        links(chip),
        ledger(opts.energy, chip.geometry().n_tiles) {
    opts.energy.validate();
    const auto& tm = opts.timing;
    if (tm.shared_spm < 1 || tm.private_spm < 1 || tm.tag_check < 0 || tm.fifo < 1 || tm.tspm < 1 || tm.gspm < 1)
      fail(ErrorCode::ConfigError, "timing parameters must be positive");
    const auto& g = chip.geometry();
    for (int i = 0; i < static_cast<int>(chip.cores().size()); ++i) {
      CoreRt rt;
      rt.id = chip.core(i);
      rt.index = i;
      rt.widx = rt.id.is_worker() ? chip.worker_index(rt.id) : -1;
      rt.stats.id = rt.id;
      cores.push_back(std::move(rt));
    }
    const auto S = static_cast<std::size_t>(g.slices_per_tile);
    for (int ti = 0; ti < g.n_tiles; ++ti) {
      TileRt tile(Scratchpad("tspm" + std::to_string(ti), g.tspm_capacity, g.word_size, tm.tspm,
                             g.workers_per_tile + 1));
      for (std::size_t s = 0; s < S; ++s) tile.slices.emplace_back(g.slice_words(), SliceMode::spm());
      tile.port_free_at.assign(S, 0);
      tile.port_busy.assign(S, 0);
      tile.blocked_until.assign(S, 0);
      tile.miss_until.assign(S, 0);
      tile.lrg.assign(S, LrgArbiter(g.workers_per_tile));
      tile.requests.assign(S, {});
      for (int l = 0; l < g.workers_per_tile; ++l) tile.worker_core.push_back(chip.core_index(CoreId::worker(ti, l)));
      tile.manager_core = chip.core_index(CoreId::manager(ti));
      tiles.push_back(std::move(tile));
    }
    episodes.assign(static_cast<std::size_t>(2 + g.n_tiles), {});

    participant.assign(static_cast<std::size_t>(g.total_workers()), opts.barrier_participants.empty() ? 1 : 0);
    for (int w : opts.barrier_participants) {
      if (w < 0 || w >= g.total_workers())
        fail(ErrorCode::ConfigError, "barrier participant " + std::to_string(w) + " is not a worker index");
      participant[static_cast<std::size_t>(w)] = 1;
    }
    tile_participants.assign(static_cast<std::size_t>(g.n_tiles), 0);
    for (int w = 0; w < g.total_workers(); ++w)
      if (participant[static_cast<std::size_t>(w)]) ++tile_participants[static_cast<std::size_t>(chip.worker_at(w).tile)];
    for (int n : tile_participants) {
      total_participants += n;
      if (n > 0) ++participating_tiles;
    }

    for (int ti = 0; ti < g.n_tiles; ++ti)
      install_mode(ti, TileMode::uniform(RxbMode::shared(), SliceMode::spm(), g.slices_per_tile), false);
  }

  const ChipGeometry& geom() const { return chip.geometry(); }

  Projection projection_for(RxbKind kind, int slice) const {
    Projection p;
    if (kind == RxbKind::Shared) {
      p.striped = true;
      p.slice = slice;
      p.slices = geom().slices_per_tile;
      p.granularity = geom().interleave_granularity;
    }
    return p;
  }

  std::string slice_name(int tile, int s) const {
    return "tile " + std::to_string(tile) + " slice " + std::to_string(s);
  }

  /// Applies `target` to a tile. With `timed`, affected ports are blocked for
  /// two cycles starting now.
  void install_mode(int ti, const TileMode& target, bool timed) {
    target.validate(geom());
    auto& tile = tiles[static_cast<std::size_t>(ti)];
    const auto S = tile.slices.size();
    const bool kind_changed = timed && target.rxb.kind != tile.mode.rxb.kind;
    std::vector<char> affected(S, 0);
    for (std::size_t s = 0; s < S; ++s) {
      const auto& sl = tile.slices[s];
      const Projection proj = projection_for(target.rxb.kind, static_cast<int>(s));
      const bool mapping_change = target.slices[s].kind == SliceKind::Cache && !(proj == sl.projection());
      affected[s] = !timed || kind_changed || !(target.slices[s] == sl.mode()) || mapping_change;
    }
    if (timed) {
      for (std::size_t s = 0; s < S; ++s) {
        if (!affected[s]) continue;
        if (tile.miss_until[s] > t)
          fail(ErrorCode::TransitionBusy, slice_name(ti, static_cast<int>(s)) + ": mode change while a miss is in flight");
      }
      if (opts.strict_dirty) {
        for (std::size_t s = 0; s < S; ++s) {
          const auto& sl = tile.slices[s];
          if (!affected[s] || sl.mode().kind != SliceKind::Cache || !sl.has_dirty()) continue;
          const Projection proj = projection_for(target.rxb.kind, static_cast<int>(s));
          if (!(target.slices[s] == sl.mode()) || !(proj == sl.projection()))
            fail(ErrorCode::DirtyDrop, slice_name(ti, static_cast<int>(s)) +
                                           ": leaving cache mode with dirty lines (flush first or disable strict mode)");
        }
      }
    }
    for (std::size_t s = 0; s < S; ++s) {
      if (!affected[s]) continue;
      tile.slices[s].transition(target.slices[s], projection_for(target.rxb.kind, static_cast<int>(s)),
                                timed && opts.strict_dirty, slice_name(ti, static_cast<int>(s)));
      if (timed) tile.blocked_until[s] = t + 2;
    }
    tile.mode = target;
    tile.fifo_push.assign(target.rxb.pairs.size(), -1);
    tile.fifo_pop.assign(target.rxb.pairs.size(), -1);
    for (int c : tile.worker_core) cores[static_cast<std::size_t>(c)].r2r_enabled = target.r2r_enabled;
  }

  // ---- completion helpers ------------------------------------------------

  void record(CoreRt& c, Cycle accept, Word value) {
    if (!opts.trace || !c.pending) return;
    trace.push_back(TraceEvent{c.index, op_name(*c.pending), c.pending_since, accept, c.ready_at, value});
  }

  void finish(CoreRt& c, int latency, Acc occ, StallReason reason, Word value) {
    if (c.in_macro && occ != Acc::Idle) {
      occ = Acc::Stall;
      reason = StallReason::Barrier;
    }
    c.ready_at = t + static_cast<Cycle>(latency);
    c.occ = occ;
    c.occ_reason = reason;
    c.acc = occ;
    c.acc_reason = reason;
    c.result = value;
    c.wait = Wait::None;
    record(c, t, value);
    c.pending.reset();
  }

  void waiting(CoreRt& c, Wait w, StallReason reason) {
    c.wait = w;
    c.acc = Acc::Stall;
    c.acc_reason = c.in_macro ? StallReason::Barrier : reason;
  }

  void require_worker(const CoreRt& c, const char* what) {
    if (!c.id.is_worker()) fail(ErrorCode::IllegalOp, to_string(c.id) + ": managers cannot issue " + what);
  }

  // ---- memory ------------------------------------------------------------

  AccessResult access(const CoreRt& c, TileRt& tile, const Route& r, bool write, Word value) {
    const auto& tm = opts.timing;
    const RxbKind rk = tile.mode.rxb.kind;
    const int base = rk == RxbKind::Private ? tm.private_spm : tm.shared_spm;
    auto& sl = tile.slices[static_cast<std::size_t>(r.slice)];
    const int ti = c.id.tile;
    AccessResult res;
    ledger.charge(EnergyClass::XbarTraversal, 1, ti);
    switch (sl.mode().kind) {
      case SliceKind::Fifo:
        fail(ErrorCode::ModeViolation, to_string(c.id) + ": load/store to " + slice_name(ti, r.slice) + " in fifo mode");
      case SliceKind::Spm:
        if (r.region == Region::Rocm) {
          if (write)
            sl.spm_write(r.local_word, value);
          else
            res.value = sl.spm_read(r.local_word);
          ledger.charge(EnergyClass::SubbankAccess, 1, ti);
          ledger.note_word_access();
          res.latency = access_latency(rk, AccessOutcome::Spm, tm, geom());
        } else {
          if (write)
            mem.write(r.global_word, value);
          else
            res.value = mem.read(r.global_word);
          ledger.charge(EnergyClass::NextlevelWord, 1, ti);
          res.latency = access_latency(rk, AccessOutcome::Uncached, tm, geom());
        }
        res.occupancy = port_occupancy(base);
        return res;
      case SliceKind::Cache: {
        if (r.region == Region::Rocm)
          fail(ErrorCode::IllegalOp,
               to_string(c.id) + ": scratchpad address on " + slice_name(ti, r.slice) + " which is in cache mode");
        const int lw = sl.mode().line_words;
        auto out = sl.cache_access(write, value, r.local_word, mem);
        ledger.charge(EnergyClass::TagCheck, 1, ti);
        ledger.charge(EnergyClass::SubbankAccess, 1, ti);
        ledger.note_word_access();
        AccessOutcome oc = AccessOutcome::CacheHit;
        if (!out.hit) {
          oc = out.dirty_eviction ? AccessOutcome::CacheMissDirty : AccessOutcome::CacheMiss;
          const auto words = static_cast<std::uint64_t>(lw) * (out.dirty_eviction ? 2 : 1);
          ledger.charge(EnergyClass::SubbankAccess, words, ti);
          ledger.charge(EnergyClass::NextlevelWord, words, ti);
        }
        res.value = out.value;
        res.latency = access_latency(rk, oc, tm, geom(), lw);
        res.occupancy = port_occupancy(res.latency);
        if (!out.hit) tile.miss_until[static_cast<std::size_t>(r.slice)] = t + static_cast<Cycle>(res.latency);
        return res;
      }
    }
    return res;
  }

  void mem_op(CoreRt& c, Addr addr, bool write, Word value) {
    auto loc = chip.address_map().decode(addr);
    if (!loc) fail(ErrorCode::IllegalOp, to_string(c.id) + ": access to unmapped address " + std::to_string(addr));
    if (loc->region == Region::Tspm || loc->region == Region::Gspm) {
      atomic_op(c, write ? AtomicKind::Write : AtomicKind::Read, addr, value);
      return;
    }
    auto& tile = tiles[static_cast<std::size_t>(c.id.tile)];
    const Route r = route(MemRequest{c.id, write, value, addr, t}, tile.mode, chip);
    if (t < tile.blocked_until[static_cast<std::size_t>(r.slice)]) {
      waiting(c, Wait::Retry, StallReason::Reconfig);
      return;
    }
    if (tile.mode.rxb.kind == RxbKind::Private) {
      auto res = access(c, tile, r, write, value);
      finish(c, res.latency, Acc::Stall, StallReason::Mem, res.value);
      return;
    }
    c.route = r;
    tile.requests[static_cast<std::size_t>(r.slice)].push_back(c.id.local);
    waiting(c, Wait::Mem, StallReason::Mem);
  }

  void copy_op(CoreRt& c, Addr global, Addr local, std::uint32_t words, bool in) {
    require_worker(c, in ? "copy_in" : "copy_out");
    auto& tile = tiles[static_cast<std::size_t>(c.id.tile)];
    if (tile.mode.rxb.kind == RxbKind::Queue)
      fail(ErrorCode::ModeViolation, to_string(c.id) + ": block copy while the crossbar is in queue mode");
    if (words == 0) fail(ErrorCode::IllegalOp, to_string(c.id) + ": empty block copy");
    const auto& map = chip.address_map();
    auto gl = map.decode(global);
    if (!gl || gl->region != Region::Global || global % geom().word_size)
      fail(ErrorCode::IllegalOp, to_string(c.id) + ": block copy needs an aligned global address");
    const std::uint64_t gw = gl->offset / geom().word_size;
    if (gw + words > mem.size_words()) fail(ErrorCode::OutOfRange, to_string(c.id) + ": block copy beyond next-level memory");
    std::vector<Route> routes;
    routes.reserve(words);
    for (std::uint32_t k = 0; k < words; ++k) {
      auto lloc = map.decode(local + k * geom().word_size);
      if (!lloc || lloc->region != Region::Rocm)
        fail(ErrorCode::IllegalOp, to_string(c.id) + ": block copy needs a ROCM scratchpad destination");
      Route r = route(MemRequest{c.id, in, 0, local + k * geom().word_size, t}, tile.mode, chip);
      if (t < tile.blocked_until[static_cast<std::size_t>(r.slice)]) {
        waiting(c, Wait::Retry, StallReason::Reconfig);
        return;
      }
      if (tile.slices[static_cast<std::size_t>(r.slice)].mode().kind != SliceKind::Spm)
        fail(ErrorCode::ModeViolation, to_string(c.id) + ": block copy to " + slice_name(c.id.tile, r.slice) +
                                           " which is not in spm mode");
      routes.push_back(r);
    }
    for (std::uint32_t k = 0; k < words; ++k) {
      auto& sl = tile.slices[static_cast<std::size_t>(routes[k].slice)];
      if (in)
        sl.spm_write(routes[k].local_word, mem.read(gw + k));
      else
        mem.write(gw + k, sl.spm_read(routes[k].local_word));
    }
    ledger.charge(EnergyClass::XbarTraversal, 1, c.id.tile);
    ledger.charge(EnergyClass::SubbankAccess, words, c.id.tile);
    ledger.charge(EnergyClass::NextlevelWord, words, c.id.tile);
    const int base = tile.mode.rxb.kind == RxbKind::Private ? opts.timing.private_spm : opts.timing.shared_spm;
    const int lat = base + geom().next_level_latency + ceil_div(words, geom().next_level_width);
    finish(c, lat, Acc::Stall, StallReason::Mem, 0);
  }

  void atomic_op(CoreRt& c, AtomicKind kind, Addr addr, Word operand) {
    auto loc = chip.address_map().decode(addr);
    if (!loc || (loc->region != Region::Tspm && loc->region != Region::Gspm) || addr % geom().word_size)
      fail(ErrorCode::IllegalOp, to_string(c.id) + ": atomic on a non-scratchpad address " + std::to_string(addr));
    c.atomic_kind = kind;
    c.atomic_word = loc->offset / geom().word_size;
    c.atomic_operand = operand;
    c.atomic_global = loc->region == Region::Gspm;
    if (c.atomic_global) {
      gspm.peek(c.atomic_word);  // range check
      gspm_requests.push_back(c.index);
    } else {
      auto& tile = tiles[static_cast<std::size_t>(c.id.tile)];
      tile.tspm.peek(c.atomic_word);
      tile.tspm_requests.push_back(c.id.is_worker() ? c.id.local : geom().workers_per_tile);
    }
    waiting(c, Wait::Atomic, StallReason::Mem);
  }

  // ---- register links and queues ------------------------------------------

  void r2r_op(CoreRt& c, const CoreOp& o) {
    require_worker(c, "register-link operations");
    if (!c.r2r_enabled)
      fail(ErrorCode::IllegalOp, to_string(c.id) + ": " + op_name(o) + " while register links are disabled");
    auto in_of = [&](Direction d) {
      int l = links.in_link(c.widx, d);
      if (l < 0)
        fail(ErrorCode::BoundaryRead,
             to_string(c.id) + ": read from " + std::string(direction_name(d)) + " leaves the mesh");
      return l;
    };
    auto out_of = [&](Direction d) {
      int l = links.out_link(c.widx, d);
      if (l < 0)
        fail(ErrorCode::BoundaryWrite,
             to_string(c.id) + ": write toward " + std::string(direction_name(d)) + " leaves the mesh");
      return l;
    };
    if (auto* w = std::get_if<op::R2rWrite>(&o)) c.ticket = links.request_write(out_of(w->dir), w->value);
    if (auto* r = std::get_if<op::R2rRead>(&o)) c.ticket = links.request_read(in_of(r->dir));
    if (auto* m = std::get_if<op::R2rMove>(&o)) {
      const int in = in_of(m->from);
      c.ticket = links.request_move(in, out_of(m->to));
    }
    r2r_waiters.push_back(c.index);
    waiting(c, Wait::R2r, std::holds_alternative<op::R2rWrite>(o) ? StallReason::R2rWriteFull
                                                                     : StallReason::R2rReadEmpty);
  }

  void fifo_op(CoreRt& c, int chan, bool push) {
    require_worker(c, push ? "fifo_push" : "fifo_pop");
    auto& tile = tiles[static_cast<std::size_t>(c.id.tile)];
    const auto& rxb = tile.mode.rxb;
    if (rxb.kind != RxbKind::Queue)
      fail(ErrorCode::ModeViolation, to_string(c.id) + ": fifo operation while the crossbar is not in queue mode");
    if (chan < 0 || chan >= static_cast<int>(rxb.pairs.size()))
      fail(ErrorCode::ModeViolation, to_string(c.id) + ": no queue channel " + std::to_string(chan));
    const auto& pair = rxb.pairs[static_cast<std::size_t>(chan)];
    if ((push ? pair.producer : pair.consumer) != c.id.local)
      fail(ErrorCode::ModeViolation, to_string(c.id) + ": not the " + (push ? "producer" : "consumer") +
                                         " of queue channel " + std::to_string(chan));
    if (t < tile.blocked_until[static_cast<std::size_t>(pair.slice)]) {
      waiting(c, Wait::Retry, StallReason::Reconfig);
      return;
    }
    (push ? tile.fifo_push : tile.fifo_pop)[static_cast<std::size_t>(chan)] = c.index;
    waiting(c, Wait::Fifo, StallReason::Fifo);
  }

  // ---- manager operations -----------------------------------------------

  void set_mode_op(CoreRt& c, const TileMode& m) {
    if (!c.id.is_manager())
      fail(ErrorCode::IllegalOp, to_string(c.id) + ": set_mode is reserved to the tile manager");
    install_mode(c.id.tile, m, true);
    finish(c, 2, Acc::Stall, StallReason::Reconfig, 0);
  }

  void flush_op(CoreRt& c, const op::FlushLine& f) {
    if (!c.id.is_manager()) fail(ErrorCode::IllegalOp, to_string(c.id) + ": flush_line is reserved to the tile manager");
    auto& tile = tiles[static_cast<std::size_t>(c.id.tile)];
    const auto& g = geom();
    if (f.slice < 0 || f.slice >= g.slices_per_tile) fail(ErrorCode::IllegalOp, "flush_line: bad slice index");
    auto loc = chip.address_map().decode(f.addr);
    if (!loc || loc->region != Region::Global) fail(ErrorCode::IllegalOp, "flush_line needs a global address");
    const std::uint64_t gw = loc->offset / g.word_size;
    std::uint64_t local = gw;
    if (tile.mode.rxb.kind == RxbKind::Shared) {
      auto sw = chip.address_map().shared_slice(gw);
      if (sw.slice != f.slice)
        fail(ErrorCode::IllegalOp, "flush_line: address does not map to slice " + std::to_string(f.slice));
      local = sw.local_word;
    }
    const auto s = static_cast<std::size_t>(f.slice);
    if (t < tile.blocked_until[s]) {
      waiting(c, Wait::Retry, StallReason::Reconfig);
      return;
    }
    if (t < tile.port_free_at[s] || t < tile.miss_until[s]) {
      waiting(c, Wait::Retry, StallReason::Mem);
      return;
    }
    auto& sl = tile.slices[s];
    ledger.charge(EnergyClass::TagCheck, 1, c.id.tile);
    const int words = sl.flush_line(local, mem);
    int lat = 1;
    if (words > 0) {
      ledger.charge(EnergyClass::SubbankAccess, static_cast<std::uint64_t>(words), c.id.tile);
      ledger.charge(EnergyClass::NextlevelWord, static_cast<std::uint64_t>(words), c.id.tile);
      // Posted write-back, same cost as the eviction half of a dirty miss.
      lat = 1 + static_cast<int>(ceil_div(static_cast<std::uint64_t>(words), g.next_level_width));
    }
    tile.port_free_at[s] = t + static_cast<Cycle>(lat);
    tile.port_busy[s] += static_cast<std::uint64_t>(lat);
    finish(c, lat, Acc::Stall, StallReason::Mem, 0);
  }

  // ---- barriers ----------------------------------------------------------

  int barrier_group(BarrierScope s, int tile) const {
    switch (s) {
      case BarrierScope::Centralized: return 0;
      case BarrierScope::Tree: return 1;
      case BarrierScope::Tile: return 2 + tile;
    }
    return 0;
  }

  void start_barrier(CoreRt& c, BarrierScope scope) {
    require_worker(c, "barrier");
    if (!participant[static_cast<std::size_t>(c.widx)])
      fail(ErrorCode::TargetMismatch, to_string(c.id) + ": barrier from a core outside the participant set");
    const int ti = c.id.tile;
    const std::size_t si = scope == BarrierScope::Centralized ? 0 : 1;
    c.sense[si] ^= 1u;

    const int group = barrier_group(scope, ti);
    const int k = c.episode_count[static_cast<std::size_t>(scope)]++;
    auto& eps = episodes[static_cast<std::size_t>(group)];
    if (static_cast<int>(eps.size()) <= k) {
      BarrierEpisode ep;
      ep.scope = scope;
      ep.index = k;
      ep.expected = scope == BarrierScope::Tile ? tile_participants[static_cast<std::size_t>(ti)] : total_participants;
      ep.first_entry = t;
      eps.push_back(ep);
    }
    auto& ep = eps[static_cast<std::size_t>(k)];
    ++ep.arrivals;
    ep.first_entry = std::min(ep.first_entry, t);
    ep.last_entry = std::max(ep.last_entry, t);

    BarrierContext ctx;
    ctx.scope = scope;
    ctx.layout = layout;
    ctx.tile_participants = tile_participants[static_cast<std::size_t>(ti)];
    ctx.tiles = participating_tiles;
    ctx.total = total_participants;
    ctx.sense = c.sense[si];
    ctx.backoff = opts.spin_backoff;
    c.macro = Program(barrier_protocol(ctx));
    c.in_macro = true;
    c.barrier_group = group;
    c.barrier_k = k;
  }

  void finish_barrier(CoreRt& c) {
    auto& ep = episodes[static_cast<std::size_t>(c.barrier_group)][static_cast<std::size_t>(c.barrier_k)];
    ++ep.released;
    ep.last_release = std::max(ep.last_release, t);
    c.in_macro = false;
    c.macro = Program();
  }

  // ---- stepping ------------------------------------------------------------

  std::optional<CoreOp> fetch(CoreRt& c) {
    if (c.in_macro) {
      if (auto o = c.macro.next(c.result)) return o;
      finish_barrier(c);
      c.result = 0;
    }
    return c.prog.next(c.result);
  }

  bool zero_cost(CoreRt& c, const CoreOp& o) {
    if (auto* e = std::get_if<op::R2rEnable>(&o)) {
      require_worker(c, "r2r_enable");
      c.r2r_enabled = e->on;
      return true;
    }
    if (auto* b = std::get_if<op::Barrier>(&o)) {
      start_barrier(c, b->scope);
      return true;
    }
    return false;
  }

  void issue(CoreRt& c) {
    const CoreOp& o = *c.pending;
    std::visit(Overloaded{
                   [&](const op::Compute& x) {
                     if (x.cycles < 1) fail(ErrorCode::IllegalOp, to_string(c.id) + ": compute needs >= 1 cycle");
                     c.stats.flops += x.flops;
                     flops += x.flops;
                     ledger.charge(EnergyClass::Flop, x.flops, c.id.tile);
                     finish(c, static_cast<int>(x.cycles), Acc::Busy, StallReason::Mem, 0);
                   },
                   [&](const op::Load& x) { mem_op(c, x.addr, false, 0); },
                   [&](const op::Store& x) { mem_op(c, x.addr, true, x.value); },
                   [&](const op::CopyIn& x) { copy_op(c, x.global, x.local, x.words, true); },
                   [&](const op::CopyOut& x) { copy_op(c, x.global, x.local, x.words, false); },
                   [&](const op::R2rWrite&) { r2r_op(c, o); },
                   [&](const op::R2rRead&) { r2r_op(c, o); },
                   [&](const op::R2rMove&) { r2r_op(c, o); },
                   [&](const op::R2rEnable&) {},
                   [&](const op::Barrier&) {},
                   [&](const op::FifoPush& x) { fifo_op(c, x.chan, true); },
                   [&](const op::FifoPop& x) { fifo_op(c, x.chan, false); },
                   [&](const op::Atomic& x) { atomic_op(c, x.kind, x.addr, x.operand); },
                   [&](const op::SetMode& x) { set_mode_op(c, x.mode); },
                   [&](const op::FlushLine& x) { flush_op(c, x); },
                   [&](const op::Halt&) {
                     c.ready_at = t + 1;
                     record(c, t, 0);
                     c.pending.reset();
                     c.wait = Wait::None;
                     c.halted = true;
                     c.acc = Acc::Idle;
                   },
               },
               o);
  }

  void step_core(CoreRt& c) {
    if (c.halted) {
      c.acc = Acc::Idle;
      return;
    }
    if (t < c.ready_at) {
      c.acc = c.occ;
      c.acc_reason = c.occ_reason;
      return;
    }
    if (c.wait != Wait::None) {
      issue(c);
      return;
    }
    for (;;) {
      auto o = fetch(c);
      if (!o) {
        c.halted = true;
        c.acc = Acc::Idle;
        return;
      }
      if (zero_cost(c, *o)) continue;
      c.pending = std::move(*o);
      c.pending_since = t;
      ++c.stats.ops;
      issue(c);
      return;
    }
  }

  CoreRt& core_of(int tile, int local) {
    return cores[static_cast<std::size_t>(tiles[static_cast<std::size_t>(tile)].worker_core[static_cast<std::size_t>(local)])];
  }

  void grant_atomic(CoreRt& c, Scratchpad& spm) {
    const Word v = spm.apply(c.atomic_kind, c.atomic_word, c.atomic_operand);
    ledger.charge(EnergyClass::SpmAtomic, 1, c.id.tile);
    finish(c, spm.latency(), Acc::Stall, StallReason::Mem, v);
  }

  void arbitrate_phase() {
    for (int ti = 0; ti < static_cast<int>(tiles.size()); ++ti) {
      auto& tile = tiles[static_cast<std::size_t>(ti)];
      for (std::size_t s = 0; s < tile.requests.size(); ++s) {
        auto& reqs = tile.requests[s];
        if (reqs.empty()) continue;
        auto& sl = tile.slices[s];
        if (t < tile.port_free_at[s] || t < tile.blocked_until[s]) {
          sl.stats.conflicts += reqs.size();
          reqs.clear();
          continue;
        }
        const int winner = *tile.lrg[s].arbitrate(reqs);
        sl.stats.conflicts += reqs.size() - 1;
        ++sl.stats.grants;
        reqs.clear();
        auto& c = core_of(ti, winner);
        const auto* st = std::get_if<op::Store>(&*c.pending);
        auto res = access(c, tile, c.route, st != nullptr, st ? st->value : 0);
        tile.port_free_at[s] = t + static_cast<Cycle>(res.occupancy);
        tile.port_busy[s] += static_cast<std::uint64_t>(res.occupancy);
        finish(c, res.latency, Acc::Stall, StallReason::Mem, res.value);
      }
      if (!tile.tspm_requests.empty()) {
        if (auto w = tile.tspm.arbitrate(t, tile.tspm_requests)) {
          const int ci = *w == geom().workers_per_tile ? tile.manager_core
                                                       : tile.worker_core[static_cast<std::size_t>(*w)];
          grant_atomic(cores[static_cast<std::size_t>(ci)], tile.tspm);
        }
        tile.tspm_requests.clear();
      }
    }
    if (!gspm_requests.empty()) {
      if (auto w = gspm.arbitrate(t, gspm_requests)) grant_atomic(cores[static_cast<std::size_t>(*w)], gspm);
      gspm_requests.clear();
    }
  }

  void commit_phase() {
    links.resolve();
    for (int ci : r2r_waiters) {
      auto& c = cores[static_cast<std::size_t>(ci)];
      const auto& out = links.outcome(c.ticket);
      c.ticket = -1;
      if (out.ok) {
        if (!std::holds_alternative<op::R2rRead>(*c.pending)) ledger.charge(EnergyClass::R2rTransfer, 1, c.id.tile);
        finish(c, 1, Acc::Busy, StallReason::Mem, out.value);
      } else {
        const bool read_side = std::holds_alternative<op::R2rRead>(*c.pending) || out.read_side_failed;
        c.acc_reason = read_side ? StallReason::R2rReadEmpty : StallReason::R2rWriteFull;
      }
    }
    r2r_waiters.clear();

    for (int ti = 0; ti < static_cast<int>(tiles.size()); ++ti) {
      auto& tile = tiles[static_cast<std::size_t>(ti)];
      for (std::size_t ch = 0; ch < tile.fifo_push.size(); ++ch) {
        const int pusher = tile.fifo_push[ch];
        const int popper = tile.fifo_pop[ch];
        if (pusher < 0 && popper < 0) continue;
        tile.fifo_push[ch] = tile.fifo_pop[ch] = -1;
        auto& sl = tile.slices[static_cast<std::size_t>(tile.mode.rxb.pairs[ch].slice)];
        const bool pop_ok = popper >= 0 && !sl.fifo_empty();
        const bool push_ok = pusher >= 0 && (!sl.fifo_full() || pop_ok);
        if (pop_ok) {
          const Word v = sl.fifo_pop();
          ledger.charge(EnergyClass::XbarTraversal, 1, ti);
          ledger.charge(EnergyClass::SubbankAccess, 1, ti);
          ledger.note_word_access();
          finish(cores[static_cast<std::size_t>(popper)], opts.timing.fifo, Acc::Busy, StallReason::Mem, v);
        }
        if (push_ok) {
          auto& c = cores[static_cast<std::size_t>(pusher)];
          sl.fifo_push(std::get<op::FifoPush>(*c.pending).value);
          ledger.charge(EnergyClass::XbarTraversal, 1, ti);
          ledger.charge(EnergyClass::SubbankAccess, 1, ti);
          ledger.note_word_access();
          finish(c, opts.timing.fifo, Acc::Busy, StallReason::Mem, 0);
        }
      }
    }
  }

  void account() {
    for (auto& c : cores) {
      switch (c.acc) {
        case Acc::Busy:
          ++c.stats.busy;
          ledger.charge(EnergyClass::CoreActiveCycle, 1, c.id.tile);
          break;
        case Acc::Stall:
          ++c.stats.stalled[static_cast<std::size_t>(c.acc_reason)];
          ledger.charge(EnergyClass::CoreActiveCycle, 1, c.id.tile);
          break;
        case Acc::Idle:
          ++c.stats.idle;
          ledger.charge(EnergyClass::IdleCycle, 1, c.id.tile);
          break;
      }
    }
  }

  // ---- deadlock and diagnostics -------------------------------------------

  bool passive(const CoreRt& c) const {
    return !c.halted && (c.wait == Wait::R2r || c.wait == Wait::Fifo) && c.ready_at <= t + 1;
  }

  /// Core the given passive core is waiting on.
  int waits_on(const CoreRt& c) const {
    const CoreOp& o = *c.pending;
    auto src = [&](Direction d) {
      const int l = links.in_link(c.widx, d);
      return chip.core_index(chip.worker_at(links.link_source(l)));
    };
    auto dst = [&](Direction d) {
      const int l = links.out_link(c.widx, d);
      return chip.core_index(chip.worker_at(links.link_target(l)));
    };
    if (auto* r = std::get_if<op::R2rRead>(&o)) return src(r->dir);
    if (auto* w = std::get_if<op::R2rWrite>(&o)) return dst(w->dir);
    if (auto* m = std::get_if<op::R2rMove>(&o)) {
      if (!links.state(links.in_link(c.widx, m->from)).full) return src(m->from);
      return dst(m->to);
    }
    const auto& pairs = tiles[static_cast<std::size_t>(c.id.tile)].mode.rxb.pairs;
    if (auto* p = std::get_if<op::FifoPop>(&o))
      return chip.core_index(CoreId::worker(c.id.tile, pairs[static_cast<std::size_t>(p->chan)].producer));
    if (auto* p = std::get_if<op::FifoPush>(&o))
      return chip.core_index(CoreId::worker(c.id.tile, pairs[static_cast<std::size_t>(p->chan)].consumer));
    return c.index;
  }

  std::string wait_label(const CoreRt& c) const {
    return to_string(c.id) + " (" + op_name(*c.pending) + ", " + std::string(stall_reason_name(c.acc_reason)) + ")";
  }

  void check_deadlock() {
    int live = 0;
    int first = -1;
    for (const auto& c : cores) {
      if (c.halted) continue;
      ++live;
      if (!passive(c)) return;
      if (first < 0) first = c.index;
    }
    if (live == 0) return;
    std::vector<int> path;
    std::vector<int> seen(cores.size(), -1);
    int cur = first;
    while (seen[static_cast<std::size_t>(cur)] < 0) {
      const auto& c = cores[static_cast<std::size_t>(cur)];
      if (c.halted) break;
      seen[static_cast<std::size_t>(cur)] = static_cast<int>(path.size());
      path.push_back(cur);
      cur = waits_on(c);
    }
    std::ostringstream os;
    os << "deadlock at cycle " << t << ": ";
    const auto& end = cores[static_cast<std::size_t>(cur)];
    if (end.halted) {
      for (int i : path) os << wait_label(cores[static_cast<std::size_t>(i)]) << " -> ";
      os << to_string(end.id) << " (halted)";
    } else {
      for (std::size_t i = static_cast<std::size_t>(seen[static_cast<std::size_t>(cur)]); i < path.size(); ++i)
        os << wait_label(cores[static_cast<std::size_t>(path[i])]) << " -> ";
      os << to_string(end.id);
    }
    fail(ErrorCode::Deadlock, os.str());
  }

  [[noreturn]] void limit_reached() {
    for (const auto& group : episodes)
      for (const auto& ep : group)
        if (ep.arrivals != ep.expected)
          fail(ErrorCode::TargetMismatch, std::string(barrier_scope_name(ep.scope)) + " barrier episode " +
                                              std::to_string(ep.index) + ": " + std::to_string(ep.arrivals) +
                                              " of " + std::to_string(ep.expected) + " participants arrived");
    std::ostringstream os;
    os << "cycle limit " << opts.cycle_limit << " reached; stalled cores:";
    for (const auto& c : cores) {
      if (c.halted) continue;
      os << "\n  " << to_string(c.id) << ": ";
      if (c.acc == Acc::Busy)
        os << "busy";
      else
        os << stall_reason_name(c.acc_reason);
      if (c.pending) os << " in " << op_name(*c.pending);
      if (passive(c)) os << " waiting on " << to_string(cores[static_cast<std::size_t>(waits_on(c))].id);
    }
    fail(ErrorCode::CycleLimitExceeded, os.str());
  }

  bool all_halted() const {
    return std::all_of(cores.begin(), cores.end(), [](const CoreRt& c) { return c.halted; });
  }

  bool step() {
    if (all_halted()) return false;
    for (auto& c : cores) step_core(c);
    arbitrate_phase();
    commit_phase();
    account();
    check_deadlock();
    ++t;
    return !all_halted();
  }

  StatRecord stats() const {
    StatRecord r;
    r.tool_version = tool_version();
    r.cycles = t;
    r.flops = flops;
    for (const auto& c : cores) r.cores.push_back(c.stats);
    for (int ti = 0; ti < static_cast<int>(tiles.size()); ++ti) {
      const auto& tile = tiles[static_cast<std::size_t>(ti)];
      for (std::size_t s = 0; s < tile.slices.size(); ++s)
        r.slices.push_back(SliceRecord{ti, static_cast<int>(s), tile.slices[s].mode(), tile.slices[s].stats,
                                       tile.port_busy[s]});
      r.scratchpads.push_back(ScratchpadRecord{tile.tspm.name(), tile.tspm.stats});
    }
    r.scratchpads.push_back(ScratchpadRecord{gspm.name(), gspm.stats});
    for (const auto& group : episodes) r.barriers.insert(r.barriers.end(), group.begin(), group.end());
    r.r2r_transfers = links.transfers();
    r.energy = EnergyReport::from(ledger);
    return r;
  }
};

// ---------------------------------------------------------------------------

Simulator::Simulator(Chip chip, SimOptions opts) : impl_(std::make_unique<Impl>(std::move(chip), std::move(opts))) {}
Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

const Chip& Simulator::chip() const { return impl_->chip; }
const SimOptions& Simulator::options() const { return impl_->opts; }

void Simulator::load(const CoreId& core, Program program) {
  impl_->cores[static_cast<std::size_t>(impl_->chip.core_index(core))].prog = std::move(program);
}

void Simulator::set_initial_mode(int tile, const TileMode& mode) {
  if (tile < 0 || tile >= impl_->geom().n_tiles) throw Error(ErrorCode::IllegalOp, "no tile " + std::to_string(tile));
  impl_->install_mode(tile, mode, false);
}

const TileMode& Simulator::tile_mode(int tile) const { return impl_->tiles[static_cast<std::size_t>(tile)].mode; }
NextLevelMemory& Simulator::memory() { return impl_->mem; }
Slice& Simulator::slice(int tile, int s) {
  return impl_->tiles[static_cast<std::size_t>(tile)].slices[static_cast<std::size_t>(s)];
}
Scratchpad& Simulator::tspm(int tile) { return impl_->tiles[static_cast<std::size_t>(tile)].tspm; }
Scratchpad& Simulator::gspm() { return impl_->gspm; }
const LinkMesh& Simulator::links() const { return impl_->links; }
const EnergyLedger& Simulator::ledger() const { return impl_->ledger; }
Cycle Simulator::now() const { return impl_->t; }
bool Simulator::all_halted() const { return impl_->all_halted(); }
bool Simulator::step() { return impl_->step(); }

StatRecord Simulator::run() {
  while (!impl_->all_halted()) {
    if (impl_->t >= impl_->opts.cycle_limit) impl_->limit_reached();
    impl_->step();
  }
  auto r = impl_->stats();
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  r.timestamp = buf;
  return r;
}

StatRecord Simulator::stats() const { return impl_->stats(); }
const std::vector<TraceEvent>& Simulator::trace() const { return impl_->trace; }

StatRecord run_until_halt(const Chip& chip, std::vector<std::pair<CoreId, Program>> programs, Cycle limit,
                          SimOptions opts) {
  opts.cycle_limit = limit;
  Simulator sim(chip, std::move(opts));
  for (auto& [id, p] : programs) sim.load(id, std::move(p));
  return sim.run();
}

}  // namespace versa
