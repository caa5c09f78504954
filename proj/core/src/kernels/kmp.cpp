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

// KMP string search. Each worker scans one line-aligned chunk of start
// positions, reading m-1 characters past its end, and writes a 1 into the
// flag array for every match start. Pattern and failure table are held in
// registers; every character comparison counts as one operation.

#include <algorithm>
#include <vector>

#include "common.hpp"
#include "versa/errors.hpp"

namespace versa::kernels {

namespace {

// Scratchpad layout: text window at word 0, the worker's flags after it.
constexpr std::uint64_t kWindow = 1024;

struct KmpWorker {
  bool spm = false;
  std::uint64_t n = 0;
  std::uint64_t text = 0;
  std::uint64_t pat = 0;
  std::uint64_t fail = 0;
  std::uint64_t flags = 0;
  std::uint32_t m = 0;
  Range starts;
};

// Comparisons made by the chunked search; mirrors the worker program.
std::uint64_t chunk_comparisons(const std::vector<std::int32_t>& text, const std::vector<std::int32_t>& p,
                                const std::vector<std::int32_t>& f, Range starts) {
  std::uint64_t cmp = 0;
  if (starts.empty()) return cmp;
  const auto m = static_cast<std::int32_t>(p.size());
  const std::uint64_t end = std::min<std::uint64_t>(text.size(), starts.hi + p.size() - 1);
  std::int32_t q = 0;
  for (std::uint64_t i = starts.lo; i < end; ++i) {
    const auto ch = text[static_cast<std::size_t>(i)];
    while (q > 0) {
      ++cmp;
      if (p[static_cast<std::size_t>(q)] == ch) break;
      q = f[static_cast<std::size_t>(q - 1)];
    }
    if (q == 0) ++cmp;
    if (p[static_cast<std::size_t>(q)] == ch) ++q;
    if (q == m) q = f[static_cast<std::size_t>(q - 1)];
  }
  return cmp;
}

Task<void> kmp_worker(KmpWorker k) {
  std::vector<Word> p(k.m), f(k.m);
  for (std::uint32_t i = 0; i < k.m; ++i) {
    p[i] = co_await op::Load{gaddr(k.pat + i)};
    f[i] = co_await op::Load{gaddr(k.fail + i)};
  }
  if (!k.starts.empty()) {
    const std::uint64_t end = std::min(k.n, k.starts.hi + k.m - 1);
    std::uint32_t q = 0;
    std::uint64_t win_lo = k.starts.lo;
    std::uint64_t win_hi = k.starts.lo;
    bool matched = false;
    for (std::uint64_t i = k.starts.lo; i < end; ++i) {
      if (k.spm && i == win_hi) {
        win_lo = i;
        win_hi = std::min(end, i + kWindow);
        co_await op::CopyIn{gaddr(k.text + win_lo), raddr(0), static_cast<std::uint32_t>(win_hi - win_lo)};
      }
      const Word ch = co_await op::Load{k.spm ? raddr(i - win_lo) : gaddr(k.text + i)};
      while (q > 0) {
        co_await op::Compute{1, 1};
        if (p[q] == ch) break;
        q = f[q - 1];
      }
      if (q == 0) co_await op::Compute{1, 1};
      if (p[q] == ch) ++q;
      if (q == k.m) {
        const std::uint64_t at = i + 1 - k.m;
        co_await op::Store{k.spm ? raddr(kWindow + at - k.starts.lo) : gaddr(k.flags + at), 1};
        matched = true;
        q = f[q - 1];
      }
    }
    if (k.spm && matched)
      co_await op::CopyOut{raddr(kWindow), gaddr(k.flags + k.starts.lo), static_cast<std::uint32_t>(k.starts.size())};
  }
  if (!k.spm) co_await signal_done();
}

}  // namespace

Workload kmp(const KernelSpec& spec, Preset plan, const Chip& chip) {
  const auto& g = chip.geometry();
  const auto data = ref::kmp_inputs(spec);
  const auto fail = ref::kmp_failure(data.pattern);
  const std::uint64_t n = data.text.size();
  const std::uint32_t m = spec.pattern_len;

  KmpWorker base;
  base.spm = plan == Preset::PrivateSpm;
  base.n = n;
  base.text = 0;
  base.pat = n;
  base.fail = n + m;
  base.flags = round_up(n + 2 * m, 64);
  base.m = m;

  Workload wl;
  put(wl, base.text, to_words(data.text));
  put(wl, base.pat, to_words(data.pattern));
  put(wl, base.fail, to_words(fail));

  const std::uint64_t chunk = round_up(ceil_div(n - m + 1, static_cast<std::uint64_t>(chip.worker_count())), 8);
  if (base.spm && kWindow + chunk > g.slice_words())
    throw Error(ErrorCode::InvalidKernel, "kmp text of " + std::to_string(n) + " does not fit private scratchpads");

  std::uint64_t comparisons = 0;
  std::vector<std::vector<op::FlushLine>> flushes(static_cast<std::size_t>(g.n_tiles));
  for (int wi = 0; wi < chip.worker_count(); ++wi) {
    const CoreId id = chip.worker_at(wi);
    KmpWorker k = base;
    k.starts = aligned_split(n - m + 1, chip.worker_count(), wi, 8);
    comparisons += chunk_comparisons(data.text, data.pattern, fail, k.starts);
    if (!base.spm) {
      auto lines = flush_lines(g, RxbKind::Shared, {k.flags + k.starts.lo, k.flags + k.starts.hi}, 0);
      auto& dst = flushes[static_cast<std::size_t>(id.tile)];
      dst.insert(dst.end(), lines.begin(), lines.end());
    }
    wl.programs.emplace_back(id, Program(kmp_worker(k)));
  }
  const TileMode mode = make_plan(plan, g);
  for (int t = 0; t < g.n_tiles; ++t)
    wl.programs.emplace_back(CoreId::manager(t),
                             manager_program(mode, base.spm ? 0 : g.workers_per_tile,
                                             std::move(flushes[static_cast<std::size_t>(t)])));

  std::vector<Word> expected(n, 0);
  for (auto at : ref::kmp(data.text, data.pattern)) expected[at] = 1;
  wl.check = [expected, flags = base.flags, n](const NextLevelMemory& mem, std::string& why) {
    return compare_rows(mem, flags, n, expected, n, why);
  };
  wl.expected_flops = comparisons;
  return wl;
}

}  // namespace versa::kernels
