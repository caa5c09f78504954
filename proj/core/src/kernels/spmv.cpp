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

// CSR sparse matrix times dense vector, f32. Row blocks are line aligned per
// worker (and therefore 64-word aligned per tile).

#include <vector>

#include "common.hpp"

namespace versa::kernels {

namespace {

struct SpmvWorker {
  std::uint64_t row_ptr = 0;
  std::uint64_t col = 0;
  std::uint64_t val = 0;
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  Range rows;
};

Task<void> spmv_worker(SpmvWorker s) {
  if (!s.rows.empty()) {
    Word p = co_await op::Load{gaddr(s.row_ptr + s.rows.lo)};
    for (std::uint64_t r = s.rows.lo; r < s.rows.hi; ++r) {
      const Word q = co_await op::Load{gaddr(s.row_ptr + r + 1)};
      float acc = 0.0f;
      for (Word e = p; e < q; ++e) {
        const Word c = co_await op::Load{gaddr(s.col + e)};
        const float v = bitsf(co_await op::Load{gaddr(s.val + e)});
        const float xv = bitsf(co_await op::Load{gaddr(s.x + c)});
        acc = acc + v * xv;
        co_await op::Compute{1, 2};
      }
      co_await op::Store{gaddr(s.y + r), fbits(acc)};
      p = q;
    }
  }
  co_await signal_done();
}

}  // namespace

Workload spmv(const KernelSpec& spec, Preset plan, const Chip& chip) {
  const auto& g = chip.geometry();
  const auto data = ref::spmv_inputs(spec);
  const std::uint64_t n = data.a.rows;
  const std::uint64_t nnz = data.a.col.size();

  SpmvWorker base;
  base.row_ptr = 0;
  base.col = n + 1;
  base.val = base.col + nnz;
  base.x = base.val + nnz;
  base.y = round_up(base.x + n, 64);

  Workload wl;
  std::vector<Word> rp(data.a.row_ptr.begin(), data.a.row_ptr.end());
  std::vector<Word> cols(data.a.col.begin(), data.a.col.end());
  put(wl, base.row_ptr, std::move(rp));
  put(wl, base.col, std::move(cols));
  put(wl, base.val, to_words(data.a.val));
  put(wl, base.x, to_words(data.x));

  const RxbKind rxb = plan == Preset::PrivateCache ? RxbKind::Private : RxbKind::Shared;
  std::vector<std::vector<op::FlushLine>> flushes(static_cast<std::size_t>(g.n_tiles));
  for (int wi = 0; wi < chip.worker_count(); ++wi) {
    const CoreId id = chip.worker_at(wi);
    SpmvWorker s = base;
    s.rows = aligned_split(n, chip.worker_count(), wi, 8);
    auto lines = flush_lines(g, rxb, {s.y + s.rows.lo, s.y + s.rows.hi}, id.local);
    auto& dst = flushes[static_cast<std::size_t>(id.tile)];
    dst.insert(dst.end(), lines.begin(), lines.end());
    wl.programs.emplace_back(id, Program(spmv_worker(s)));
  }
  const TileMode mode = make_plan(plan, g);
  for (int t = 0; t < g.n_tiles; ++t)
    wl.programs.emplace_back(CoreId::manager(t), manager_program(mode, g.workers_per_tile,
                                                                 std::move(flushes[static_cast<std::size_t>(t)])));

  const std::vector<Word> expected = to_words(ref::spmv(data.a, data.x));
  wl.check = [expected, y = base.y, n](const NextLevelMemory& mem, std::string& why) {
    return compare_rows(mem, y, n, expected, n, why);
  };
  wl.expected_flops = 2 * nnz;
  return wl;
}

}  // namespace versa::kernels
