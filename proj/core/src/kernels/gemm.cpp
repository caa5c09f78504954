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

// Dense f32 GeMM, C = A x B with B stored transposed in memory.
//
// Rows of C are split over workers in mesh order. Every worker walks the
// output column by column: for column j it needs column j of B once per k
// and its own rows of A. In the R2R plan only the first worker of each mesh
// row fetches the column; it streams it east and the row forwards it one
// hop per cycle.

#include <vector>

#include "common.hpp"
#include "versa/errors.hpp"

namespace versa::kernels {

namespace {

enum class Role : std::uint8_t { Solo, Head, Mid, Tail };

struct GemmWorker {
  Preset plan = Preset::SharedCache;
  Role role = Role::Solo;
  std::uint32_t n = 0;
  std::uint64_t a = 0;
  std::uint64_t bt = 0;
  std::uint64_t c = 0;
  std::uint64_t ldc = 0;
  Range rows;
};

Task<void> gemm_cache(GemmWorker w) {
  const std::uint64_t n = w.n;
  std::vector<float> acc(w.rows.size(), 0.0f);
  for (std::uint64_t j = 0; j < n; ++j) {
    for (std::uint64_t k = 0; k < n; ++k) {
      const float b = bitsf(co_await op::Load{gaddr(w.bt + j * n + k)});
      for (std::size_t i = 0; i < acc.size(); ++i) {
        const float a = bitsf(co_await op::Load{gaddr(w.a + (w.rows.lo + i) * n + k)});
        acc[i] = acc[i] + a * b;
        co_await op::Compute{1, 2};
      }
    }
    for (std::size_t i = 0; i < acc.size(); ++i) {
      co_await op::Store{gaddr(w.c + (w.rows.lo + i) * w.ldc + j), fbits(acc[i])};
      acc[i] = 0.0f;
    }
  }
  co_await signal_done();
}

Task<void> gemm_spm(GemmWorker w) {
  const std::uint64_t n = w.n;
  const std::uint64_t rows = w.rows.size();
  const std::uint64_t col = rows * n;
  const std::uint64_t cblk = col + n;
  std::vector<float> acc(rows, 0.0f);
  if (rows > 0)
    co_await op::CopyIn{gaddr(w.a + w.rows.lo * n), raddr(0), static_cast<std::uint32_t>(rows * n)};
  for (std::uint64_t j = 0; j < n; ++j) {
    if (w.role == Role::Solo || w.role == Role::Head)
      co_await op::CopyIn{gaddr(w.bt + j * n), raddr(col), static_cast<std::uint32_t>(n)};
    for (std::uint64_t k = 0; k < n; ++k) {
      Word bw = 0;
      switch (w.role) {
        case Role::Solo:
          bw = co_await op::Load{raddr(col + k)};
          break;
        case Role::Head:
          bw = co_await op::Load{raddr(col + k)};
          co_await op::R2rWrite{Direction::E, bw};
          break;
        case Role::Mid:
          bw = co_await op::R2rMove{Direction::W, Direction::E};
          break;
        case Role::Tail:
          bw = co_await op::R2rRead{Direction::W};
          break;
      }
      const float b = bitsf(bw);
      for (std::uint64_t i = 0; i < rows; ++i) {
        const float a = bitsf(co_await op::Load{raddr(i * n + k)});
        acc[i] = acc[i] + a * b;
        co_await op::Compute{1, 2};
      }
    }
    for (std::uint64_t i = 0; i < rows; ++i) {
      co_await op::Store{raddr(cblk + i * n + j), fbits(acc[i])};
      acc[i] = 0.0f;
    }
  }
  for (std::uint64_t i = 0; i < rows; ++i)
    co_await op::CopyOut{raddr(cblk + i * n), gaddr(w.c + (w.rows.lo + i) * w.ldc), static_cast<std::uint32_t>(n)};
}

}  // namespace

Workload gemm(const KernelSpec& spec, Preset plan, const Chip& chip) {
  const auto& g = chip.geometry();
  const std::uint64_t n = spec.size;
  const int workers = chip.worker_count();

  GemmWorker base;
  base.plan = plan;
  base.n = spec.size;
  base.a = 0;
  base.bt = n * n;
  base.c = round_up(2 * n * n, 64);
  base.ldc = round_up(n, 64);

  const std::uint64_t max_rows = ceil_div(n, static_cast<std::uint64_t>(workers));
  if (plan != Preset::SharedCache && 2 * max_rows * n + n > g.slice_words())
    throw Error(ErrorCode::InvalidKernel, "gemm n=" + std::to_string(n) + " does not fit a private scratchpad");

  const auto data = ref::gemm_inputs(spec);
  std::vector<float> bt(n * n);
  for (std::uint64_t r = 0; r < n; ++r)
    for (std::uint64_t c = 0; c < n; ++c) bt[c * n + r] = data.b[r * n + c];

  Workload wl;
  put(wl, base.a, to_words(data.a));
  put(wl, base.bt, to_words(bt));

  const bool cache = plan == Preset::SharedCache;
  const int mesh_cols = g.mesh_cols();
  std::vector<std::vector<op::FlushLine>> flushes(static_cast<std::size_t>(g.n_tiles));
  for (int wi = 0; wi < workers; ++wi) {
    const CoreId id = chip.worker_at(wi);
    GemmWorker w = base;
    w.rows = split(n, workers, mesh_ordinal(chip, id));
    if (plan == Preset::PrivateSpmR2r && mesh_cols > 1) {
      const int col = chip.mesh_coord(id).col;
      w.role = col == 0 ? Role::Head : col == mesh_cols - 1 ? Role::Tail : Role::Mid;
    }
    if (cache) {
      auto lines = flush_lines(g, RxbKind::Shared, {w.c + w.rows.lo * w.ldc, w.c + w.rows.hi * w.ldc}, 0);
      auto& dst = flushes[static_cast<std::size_t>(id.tile)];
      dst.insert(dst.end(), lines.begin(), lines.end());
    }
    wl.programs.emplace_back(id, Program(cache ? gemm_cache(w) : gemm_spm(w)));
  }
  const TileMode mode = make_plan(plan, g);
  for (int t = 0; t < g.n_tiles; ++t)
    wl.programs.emplace_back(CoreId::manager(t),
                             manager_program(mode, cache ? g.workers_per_tile : 0,
                                             std::move(flushes[static_cast<std::size_t>(t)])));

  const std::vector<Word> expected =
      to_words(ref::gemm(data.a, data.b, spec.size, spec.size, spec.size));
  wl.check = [expected, c = base.c, ldc = base.ldc, n](const NextLevelMemory& mem, std::string& why) {
    return compare_rows(mem, c, ldc, expected, n, why);
  };
  wl.expected_flops = 2 * n * n * n;
  return wl;
}

}  // namespace versa::kernels
