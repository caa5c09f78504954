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

#include "common.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "versa/rocm.hpp"

namespace versa::kernels {

Range split(std::uint64_t n, int parts, int i) {
  const auto p = static_cast<std::uint64_t>(parts);
  const auto k = static_cast<std::uint64_t>(i);
  const std::uint64_t base = n / p;
  const std::uint64_t extra = n % p;
  const std::uint64_t lo = k * base + std::min(k, extra);
  return {lo, lo + base + (k < extra ? 1 : 0)};
}

Range aligned_split(std::uint64_t n, int parts, int i, std::uint64_t align) {
  const std::uint64_t block = round_up(ceil_div(n, static_cast<std::uint64_t>(parts)), align);
  const std::uint64_t lo = std::min(n, block * static_cast<std::uint64_t>(i));
  return {lo, std::min(n, lo + block)};
}

int mesh_ordinal(const Chip& chip, const CoreId& worker) {
  const auto c = chip.mesh_coord(worker);
  return c.row * chip.geometry().mesh_cols() + c.col;
}

Task<void> signal_done() {
  co_await op::Atomic{AtomicKind::FetchAdd, tspm_addr(kDoneWord), 1};
}

std::vector<op::FlushLine> flush_lines(const ChipGeometry& g, RxbKind rxb, Range words, int private_slice) {
  constexpr std::uint64_t kLine = 8;
  std::vector<op::FlushLine> out;
  if (words.empty()) return out;
  if (rxb == RxbKind::Private) {
    for (std::uint64_t w = words.lo / kLine * kLine; w < words.hi; w += kLine)
      out.push_back({private_slice, gaddr(w)});
    return out;
  }
  const AddressMap map(g);
  std::set<std::pair<int, std::uint64_t>> seen;
  for (std::uint64_t w = words.lo; w < words.hi; ++w) {
    const auto sw = map.shared_slice(w);
    if (seen.insert({sw.slice, sw.local_word / kLine}).second) out.push_back({sw.slice, gaddr(w)});
  }
  return out;
}

namespace {

Task<void> manager_task(TileMode mode, int wait_for, std::vector<op::FlushLine> flushes) {
  op::SetMode set{std::move(mode)};
  co_await std::move(set);
  if (wait_for <= 0) co_return;
  while (static_cast<int>(co_await op::Atomic{AtomicKind::Read, tspm_addr(kDoneWord), 0}) < wait_for)
    co_await op::Compute{16, 0};
  for (const auto& f : flushes) co_await f;
}

}  // namespace

Program manager_program(TileMode mode, int wait_for, std::vector<op::FlushLine> flushes) {
  return Program(manager_task(std::move(mode), wait_for, std::move(flushes)));
}

void put(Workload& wl, std::uint64_t word, std::vector<Word> data) {
  wl.image.push_back({word, std::move(data)});
}

std::vector<Word> to_words(const std::vector<float>& v) {
  std::vector<Word> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), fbits);
  return out;
}

std::vector<Word> to_words(const std::vector<std::int32_t>& v) {
  std::vector<Word> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](std::int32_t x) { return static_cast<Word>(x); });
  return out;
}

bool compare_rows(const NextLevelMemory& mem, std::uint64_t word, std::uint64_t stride,
                  const std::vector<Word>& expected, std::uint64_t row_len, std::string& why) {
  if (row_len == 0) return true;
  const std::uint64_t rows = expected.size() / row_len;
  for (std::uint64_t r = 0; r < rows; ++r) {
    const auto got = mem.read_range(word + r * stride, static_cast<std::size_t>(row_len));
    for (std::uint64_t c = 0; c < row_len; ++c) {
      const Word want = expected[static_cast<std::size_t>(r * row_len + c)];
      if (got[static_cast<std::size_t>(c)] != want) {
        std::ostringstream os;
        os << "mismatch at row " << r << " col " << c << ": got 0x" << std::hex << got[static_cast<std::size_t>(c)]
           << " want 0x" << want;
        why = os.str();
        return false;
      }
    }
  }
  return true;
}

}  // namespace versa::kernels
