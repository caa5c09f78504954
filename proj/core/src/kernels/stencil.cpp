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

// Valid 3x3 convolution over an N x N f32 grid, optionally repeated back to
// back (the cache plan keeps whatever stays resident between passes).
//
// Output rows are banded over mesh rows and output columns are stripped over
// mesh columns; strips are multiples of a cache line so no two workers write
// the same line. In the scratchpad plan each worker streams the input rows of
// its band through a three-row ring. The two input columns a worker shares
// with its west neighbour are fetched once, by the west neighbour, and passed
// east over the register link.

#include <array>
#include <vector>

#include "common.hpp"
#include "versa/errors.hpp"

namespace versa::kernels {

namespace {

struct StencilWorker {
  std::uint64_t n = 0;
  std::uint64_t in = 0;
  std::uint64_t out = 0;
  std::uint64_t ldo = 0;
  Range band;   // output rows
  Range strip;  // output columns
  bool has_west = false;
  bool has_east = false;
  std::array<float, 9> w{};
  std::uint32_t repeat = 1;
};

Task<void> cache_pass(const StencilWorker* s_) {
  const StencilWorker& s = *s_;
  for (std::uint64_t i = s.band.lo; i < s.band.hi; ++i) {
    for (std::uint64_t j = s.strip.lo; j < s.strip.hi; ++j) {
      float acc = 0.0f;
      for (std::uint64_t di = 0; di < 3; ++di)
        for (std::uint64_t dj = 0; dj < 3; ++dj) {
          const float x = bitsf(co_await op::Load{gaddr(s.in + (i + di) * s.n + j + dj)});
          acc = acc + s.w[di * 3 + dj] * x;
          co_await op::Compute{1, 2};
        }
      co_await op::Store{gaddr(s.out + i * s.ldo + j), fbits(acc)};
    }
  }
}

Task<void> stencil_cache(StencilWorker s) {
  for (std::uint32_t it = 0; it < s.repeat; ++it) co_await cache_pass(&s);
  co_await signal_done();
}

Task<void> spm_pass(const StencilWorker* s_) {
  const StencilWorker& s = *s_;
  // Ring slot word p holds input column strip.lo + p. The worker fetches
  // columns [own, strip.hi + 2); the first two come from the west neighbour.
  const std::uint64_t c0 = s.strip.lo;
  const std::uint64_t sw = s.strip.size();
  const std::uint64_t win = sw + 2;
  const std::uint64_t skip = s.has_west ? 2 : 0;
  const std::uint64_t outbuf = 3 * win;
  const std::uint64_t first = s.band.lo;
  for (std::uint64_t r = first; r < s.band.hi + 2; ++r) {
    const std::uint64_t slot = ((r - first) % 3) * win;
    co_await op::CopyIn{gaddr(s.in + r * s.n + c0 + skip), raddr(slot + skip), static_cast<std::uint32_t>(win - skip)};
    if (s.has_east)
      for (std::uint64_t q = sw; q < sw + 2; ++q) {
        const Word v = co_await op::Load{raddr(slot + q)};
        co_await op::R2rWrite{Direction::E, v};
      }
    if (s.has_west)
      for (std::uint64_t q = 0; q < 2; ++q) {
        const Word v = co_await op::R2rRead{Direction::W};
        co_await op::Store{raddr(slot + q), v};
      }
    if (r < first + 2) continue;
    const std::uint64_t i = r - 2;
    for (std::uint64_t j = 0; j < sw; ++j) {
      float acc = 0.0f;
      for (std::uint64_t di = 0; di < 3; ++di) {
        const std::uint64_t row = ((i + di - first) % 3) * win;
        for (std::uint64_t dj = 0; dj < 3; ++dj) {
          const float x = bitsf(co_await op::Load{raddr(row + j + dj)});
          acc = acc + s.w[di * 3 + dj] * x;
          co_await op::Compute{1, 2};
        }
      }
      co_await op::Store{raddr(outbuf + j), fbits(acc)};
    }
    co_await op::CopyOut{raddr(outbuf), gaddr(s.out + i * s.ldo + c0), static_cast<std::uint32_t>(sw)};
  }
}

Task<void> stencil_spm(StencilWorker s) {
  if (s.band.empty()) co_return;
  for (std::uint32_t it = 0; it < s.repeat; ++it) co_await spm_pass(&s);
}

}  // namespace

Workload stencil(const KernelSpec& spec, Preset plan, const Chip& chip) {
  const auto& g = chip.geometry();
  const std::uint64_t n = spec.size;
  const std::uint64_t m = n - 2;
  const int rows = g.mesh_rows();
  const int cols = g.mesh_cols();

  StencilWorker base;
  base.n = n;
  base.in = 0;
  base.out = round_up(n * n, 64);
  base.ldo = round_up(m, 8);
  base.repeat = spec.repeat;

  const auto data = ref::stencil_inputs(spec);
  for (std::size_t k = 0; k < 9; ++k) base.w[k] = data.weights[k];

  const bool cache = plan == Preset::PrivateCache;
  const std::uint64_t strip_w = round_up(ceil_div(m, static_cast<std::uint64_t>(cols)), 8);
  if (!cache && 4 * strip_w + 6 > g.slice_words())
    throw Error(ErrorCode::InvalidKernel, "stencil2d N=" + std::to_string(n) + " does not fit a private scratchpad");

  Workload wl;
  put(wl, base.in, to_words(data.grid));

  std::vector<std::vector<op::FlushLine>> flushes(static_cast<std::size_t>(g.n_tiles));
  for (int wi = 0; wi < chip.worker_count(); ++wi) {
    const CoreId id = chip.worker_at(wi);
    const auto mc = chip.mesh_coord(id);
    StencilWorker s = base;
    s.band = split(m, rows, mc.row);
    s.strip = aligned_split(m, cols, mc.col, 8);
    if (s.band.empty() || s.strip.empty()) {
      s.band = s.strip = {};
    } else {
      s.has_west = mc.col > 0;
      s.has_east = !aligned_split(m, cols, mc.col + 1, 8).empty() && mc.col + 1 < cols;
    }
    if (cache) {
      auto& dst = flushes[static_cast<std::size_t>(id.tile)];
      for (std::uint64_t i = s.band.lo; i < s.band.hi; ++i) {
        auto lines = flush_lines(g, RxbKind::Private, {s.out + i * s.ldo + s.strip.lo, s.out + i * s.ldo + s.strip.hi},
                                 id.local);
        dst.insert(dst.end(), lines.begin(), lines.end());
      }
    }
    wl.programs.emplace_back(id, Program(cache ? stencil_cache(s) : stencil_spm(s)));
  }
  const TileMode mode = make_plan(plan, g);
  for (int t = 0; t < g.n_tiles; ++t)
    wl.programs.emplace_back(CoreId::manager(t),
                             manager_program(mode, cache ? g.workers_per_tile : 0,
                                             std::move(flushes[static_cast<std::size_t>(t)])));

  const std::vector<Word> expected = to_words(ref::stencil(data.grid, spec.size, data.weights));
  wl.check = [expected, out = base.out, ldo = base.ldo, m](const NextLevelMemory& mem, std::string& why) {
    return compare_rows(mem, out, ldo, expected, m, why);
  };
  wl.expected_flops = 18 * m * m * spec.repeat;
  return wl;
}

}  // namespace versa::kernels
