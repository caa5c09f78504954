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

// Parallel i32 merge sort.
//
//   1. every worker sorts its chunk bottom-up, ping-ponging between buffers
//   2. tile-local merge tree, one tile barrier per level
//   3. chip-level merge tree across tiles, one merger per pair of runs
//
// shared_spm keeps phases 1-2 in the tile's shared scratchpad, copies the
// tile run out and synchronises phase 3 with tree barriers; the phase-3
// merges stream both inputs and the output through small scratchpad buffers.
//
// shared_cache works on the two global buffers directly. Tile caches are not
// coherent with each other, so before a run crosses tiles the owning manager
// flushes it and bumps a G-SPM counter the next merger waits on.

#include <bit>
#include <utility>
#include <vector>

#include "common.hpp"
#include "versa/errors.hpp"

namespace versa::kernels {

namespace {

constexpr std::uint64_t kStreamBlock = 256;

struct Buf {
  bool rocm = false;
  std::uint64_t base = 0;
  Addr at(std::uint64_t i) const { return rocm ? raddr(base + i) : gaddr(base + i); }
};

struct SortWorker {
  bool spm = false;
  std::uint64_t n = 0;
  std::uint64_t tile_words = 0;  // n / tiles
  std::uint64_t chunk = 0;
  int tile = 0;
  int local = 0;
  int workers = 0;  // per tile
  int tiles = 0;
  std::uint64_t g[2] = {0, 0};  // global buffers
};

int log2i(std::uint64_t v) { return std::bit_width(v) - 1; }
int passes(std::uint64_t chunk) { return chunk <= 1 ? 0 : std::bit_width(chunk - 1); }

Task<void> merge(Buf src, Buf dst, std::uint64_t lo, std::uint64_t mid, std::uint64_t hi) {
  std::uint64_t i = lo, j = mid, k = lo;
  Word a = 0, b = 0;
  if (i < mid) a = co_await op::Load{src.at(i)};
  if (j < hi) b = co_await op::Load{src.at(j)};
  while (i < mid && j < hi) {
    co_await op::Compute{1, 1};
    if (static_cast<std::int32_t>(b) < static_cast<std::int32_t>(a)) {
      co_await op::Store{dst.at(k++), b};
      if (++j < hi) b = co_await op::Load{src.at(j)};
    } else {
      co_await op::Store{dst.at(k++), a};
      if (++i < mid) a = co_await op::Load{src.at(i)};
    }
  }
  for (; i < mid; ++i) {
    co_await op::Store{dst.at(k++), a};
    if (i + 1 < mid) a = co_await op::Load{src.at(i + 1)};
  }
  for (; j < hi; ++j) {
    co_await op::Store{dst.at(k++), b};
    if (j + 1 < hi) b = co_await op::Load{src.at(j + 1)};
  }
}

// One input run of a streamed merge: a window of the run held in scratchpad.
struct Stream {
  std::uint64_t src = 0;   // global word of element 0 of the run space
  std::uint64_t spm = 0;   // scratchpad word of the window
  std::uint64_t pos = 0;   // next element
  std::uint64_t end = 0;
  std::uint64_t win = 0;   // element held at spm[0]
  std::uint64_t fill = 0;  // elements in the window
};

Task<Word> stream_next(Stream* s) {
  if (s->pos == s->win + s->fill) {
    s->win = s->pos;
    s->fill = std::min(kStreamBlock, s->end - s->pos);
    co_await op::CopyIn{gaddr(s->src + s->win), raddr(s->spm), static_cast<std::uint32_t>(s->fill)};
  }
  const Word v = co_await op::Load{raddr(s->spm + s->pos - s->win)};
  ++s->pos;
  co_return v;
}

struct Sink {
  std::uint64_t dst = 0;
  std::uint64_t spm = 0;
  std::uint64_t base = 0;  // element held at spm[0]
  std::uint64_t fill = 0;
};

Task<void> sink_flush(Sink* o) {
  if (o->fill == 0) co_return;
  co_await op::CopyOut{raddr(o->spm), gaddr(o->dst + o->base), static_cast<std::uint32_t>(o->fill)};
  o->base += o->fill;
  o->fill = 0;
}

Task<void> sink_put(Sink* o, Word v) {
  co_await op::Store{raddr(o->spm + o->fill), v};
  if (++o->fill == kStreamBlock) co_await sink_flush(o);
}

Task<void> stream_merge(std::uint64_t src, std::uint64_t dst, std::uint64_t lo, std::uint64_t mid,
                        std::uint64_t hi) {
  Stream a{src, 0, lo, mid, lo, 0};
  Stream b{src, kStreamBlock, mid, hi, mid, 0};
  Sink o{dst, 2 * kStreamBlock, lo, 0};
  Word va = 0, vb = 0;
  if (a.pos < a.end) va = co_await stream_next(&a);
  if (b.pos < b.end) vb = co_await stream_next(&b);
  bool a_live = lo < mid, b_live = mid < hi;
  while (a_live && b_live) {
    co_await op::Compute{1, 1};
    if (static_cast<std::int32_t>(vb) < static_cast<std::int32_t>(va)) {
      co_await sink_put(&o, vb);
      if (b.pos < b.end) vb = co_await stream_next(&b); else b_live = false;
    } else {
      co_await sink_put(&o, va);
      if (a.pos < a.end) va = co_await stream_next(&a); else a_live = false;
    }
  }
  while (a_live) {
    co_await sink_put(&o, va);
    if (a.pos < a.end) va = co_await stream_next(&a); else a_live = false;
  }
  while (b_live) {
    co_await sink_put(&o, vb);
    if (b.pos < b.end) vb = co_await stream_next(&b); else b_live = false;
  }
  co_await sink_flush(&o);
}

// Phases 1-2 over buffers `buf` (indices relative to `origin`). Returns the
// buffer index holding the tile run.
Task<int> local_sort(SortWorker w, Buf buf0, Buf buf1, std::uint64_t origin) {
  const Buf bufs[2] = {buf0, buf1};
  int cur = 0;
  const std::uint64_t lo = origin + static_cast<std::uint64_t>(w.local) * w.chunk;
  const std::uint64_t hi = lo + w.chunk;
  for (std::uint64_t width = 1; width < w.chunk; width *= 2) {
    for (std::uint64_t s = lo; s < hi; s += 2 * width)
      co_await merge(bufs[cur], bufs[cur ^ 1], s, std::min(s + width, hi), std::min(s + 2 * width, hi));
    cur ^= 1;
  }
  for (int span = 2; span <= w.workers; span *= 2) {
    co_await op::Barrier{BarrierScope::Tile};
    if (w.local % span == 0) {
      const std::uint64_t a = origin + static_cast<std::uint64_t>(w.local) * w.chunk;
      const std::uint64_t half = static_cast<std::uint64_t>(span / 2) * w.chunk;
      co_await merge(bufs[cur], bufs[cur ^ 1], a, a + half, a + 2 * half);
    }
    cur ^= 1;
  }
  co_return cur;
}

Task<void> sort_spm(SortWorker w) {
  const std::uint64_t tile_lo = static_cast<std::uint64_t>(w.tile) * w.tile_words;
  const std::uint64_t mine = static_cast<std::uint64_t>(w.local) * w.chunk;
  co_await op::CopyIn{gaddr(w.g[0] + tile_lo + mine), raddr(mine), static_cast<std::uint32_t>(w.chunk)};
  const int cur = co_await local_sort(w, Buf{true, 0}, Buf{true, w.tile_words}, 0);
  co_await op::Barrier{BarrierScope::Tile};
  co_await op::CopyOut{raddr(static_cast<std::uint64_t>(cur) * w.tile_words + mine), gaddr(w.g[0] + tile_lo + mine),
                       static_cast<std::uint32_t>(w.chunk)};
  int g = 0;
  for (int span = 2; span <= w.tiles; span *= 2) {
    co_await op::Barrier{BarrierScope::Tree};
    if (w.local == 0 && w.tile % span == 0) {
      const std::uint64_t half = static_cast<std::uint64_t>(span / 2) * w.tile_words;
      co_await stream_merge(w.g[g], w.g[g ^ 1], tile_lo, tile_lo + half, tile_lo + 2 * half);
    }
    g ^= 1;
  }
}

Task<void> sort_cache(SortWorker w, std::uint32_t flushed_base) {
  const std::uint64_t tile_lo = static_cast<std::uint64_t>(w.tile) * w.tile_words;
  int cur = co_await local_sort(w, Buf{false, w.g[0]}, Buf{false, w.g[1]}, tile_lo);
  co_await signal_done();
  if (w.local != 0) co_return;
  std::uint32_t need = flushed_base;
  std::uint32_t published = static_cast<std::uint32_t>(w.tiles);
  for (int span = 2; span <= w.tiles; span *= 2) {
    need += published;
    published /= 2;
    if (w.tile % span != 0) co_return;
    while (co_await op::Atomic{AtomicKind::Read, gspm_addr(kFlushedWord), 0} < need) co_await op::Compute{16, 0};
    const std::uint64_t half = static_cast<std::uint64_t>(span / 2) * w.tile_words;
    co_await merge(Buf{false, w.g[cur]}, Buf{false, w.g[cur ^ 1]}, tile_lo, tile_lo + half, tile_lo + 2 * half);
    cur ^= 1;
    co_await signal_done();
  }
}

// Manager side of the cache plan: one flush batch per published run.
Task<void> sort_manager(TileMode mode, int workers, std::vector<std::vector<op::FlushLine>> batches) {
  op::SetMode set{std::move(mode)};
  co_await std::move(set);
  for (std::size_t b = 0; b < batches.size(); ++b) {
    const auto need = static_cast<Word>(workers) + static_cast<Word>(b);
    while (co_await op::Atomic{AtomicKind::Read, tspm_addr(kDoneWord), 0} < need) co_await op::Compute{16, 0};
    for (const auto& f : batches[b]) co_await f;
    co_await op::Atomic{AtomicKind::FetchAdd, gspm_addr(kFlushedWord), 1};
  }
}

// Host mirror of the merge schedule: sorts `v` in place the same way and
// returns the number of comparisons made.
std::uint64_t count_merge(const std::vector<std::int32_t>& src, std::vector<std::int32_t>& dst, std::uint64_t lo,
                          std::uint64_t mid, std::uint64_t hi) {
  std::uint64_t cmp = 0, i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    ++cmp;
    dst[k++] = src[j] < src[i] ? src[j++] : src[i++];
  }
  while (i < mid) dst[k++] = src[i++];
  while (j < hi) dst[k++] = src[j++];
  return cmp;
}

std::uint64_t schedule_comparisons(std::vector<std::int32_t> v, std::uint64_t chunk, int workers, int tiles) {
  std::vector<std::int32_t> other(v.size());
  std::uint64_t cmp = 0;
  const std::uint64_t n = v.size();
  for (std::uint64_t width = 1; width < chunk; width *= 2) {
    for (std::uint64_t c = 0; c < n; c += chunk)
      for (std::uint64_t s = c; s < c + chunk; s += 2 * width)
        cmp += count_merge(v, other, s, std::min(s + width, c + chunk), std::min(s + 2 * width, c + chunk));
    std::swap(v, other);
  }
  const auto total = static_cast<std::uint64_t>(workers) * static_cast<std::uint64_t>(tiles);
  for (std::uint64_t span = 2; span <= total; span *= 2) {
    for (std::uint64_t s = 0; s < n; s += span * chunk)
      cmp += count_merge(v, other, s, s + span / 2 * chunk, s + span * chunk);
    std::swap(v, other);
  }
  return cmp;
}

}  // namespace

Workload mergesort(const KernelSpec& spec, Preset plan, const Chip& chip) {
  const auto& g = chip.geometry();
  const std::uint64_t n = spec.size;
  const int tiles = g.n_tiles;
  const int workers = g.workers_per_tile;
  const std::uint64_t total = static_cast<std::uint64_t>(tiles) * static_cast<std::uint64_t>(workers);
  if (!std::has_single_bit(static_cast<unsigned>(tiles)) || !std::has_single_bit(static_cast<unsigned>(workers)))
    throw Error(ErrorCode::InvalidKernel, "mergesort needs power-of-two tile and worker counts");
  if (n == 0 || n % (total * 8) != 0 || n % (static_cast<std::uint64_t>(tiles) * 64) != 0)
    throw Error(ErrorCode::InvalidKernel, "mergesort size must be a multiple of " +
                                              std::to_string(std::max(total * 8, static_cast<std::uint64_t>(tiles) * 64)));

  SortWorker base;
  base.spm = plan == Preset::SharedSpm;
  base.n = n;
  base.tile_words = n / static_cast<std::uint64_t>(tiles);
  base.chunk = n / total;
  base.workers = workers;
  base.tiles = tiles;
  base.g[0] = 0;
  base.g[1] = n;
  const std::uint64_t rocm_words = static_cast<std::uint64_t>(g.slices_per_tile) * g.slice_words();
  if (base.spm && (2 * base.tile_words > rocm_words || 3 * kStreamBlock > rocm_words))
    throw Error(ErrorCode::InvalidKernel, "mergesort size " + std::to_string(n) + " does not fit the tile scratchpad");

  const auto input = ref::mergesort_inputs(spec);
  Workload wl;
  put(wl, base.g[0], to_words(input));

  for (int wi = 0; wi < chip.worker_count(); ++wi) {
    const CoreId id = chip.worker_at(wi);
    SortWorker w = base;
    w.tile = id.tile;
    w.local = id.local;
    wl.programs.emplace_back(id, Program(base.spm ? sort_spm(w) : sort_cache(w, 0)));
  }

  const TileMode mode = make_plan(plan, g);
  const int levels = log2i(static_cast<std::uint64_t>(tiles));
  const int local_final = (passes(base.chunk) + log2i(static_cast<std::uint64_t>(workers))) % 2;
  for (int t = 0; t < tiles; ++t) {
    if (base.spm) {
      wl.programs.emplace_back(CoreId::manager(t), manager_program(mode, 0, {}));
      continue;
    }
    const std::uint64_t tile_lo = static_cast<std::uint64_t>(t) * base.tile_words;
    std::vector<std::vector<op::FlushLine>> batches;
    int cur = local_final;
    batches.push_back(flush_lines(g, RxbKind::Shared, {base.g[cur] + tile_lo, base.g[cur] + tile_lo + base.tile_words}, 0));
    for (int span = 2; span <= tiles && t % span == 0; span *= 2) {
      cur ^= 1;
      const std::uint64_t len = static_cast<std::uint64_t>(span) * base.tile_words;
      batches.push_back(flush_lines(g, RxbKind::Shared, {base.g[cur] + tile_lo, base.g[cur] + tile_lo + len}, 0));
    }
    wl.programs.emplace_back(CoreId::manager(t), Program(sort_manager(mode, workers, std::move(batches))));
  }

  const int final_buf = base.spm ? levels % 2 : (local_final + levels) % 2;
  const std::vector<Word> expected = to_words(ref::mergesort(input));
  wl.check = [expected, at = base.g[final_buf], n](const NextLevelMemory& mem, std::string& why) {
    return compare_rows(mem, at, n, expected, n, why);
  };
  wl.expected_flops = schedule_comparisons(input, base.chunk, workers, tiles);
  return wl;
}

}  // namespace versa::kernels
