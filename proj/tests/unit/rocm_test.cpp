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

#include <gtest/gtest.h>

#include <deque>
#include <map>
#include <random>

#include "versa/errors.hpp"
#include "versa/rocm.hpp"

namespace versa {
namespace {

TEST(NextLevel, ReadsZeroUntilWritten) {
  NextLevelMemory m(1 << 20);
  EXPECT_EQ(m.read(12345), 0u);
  m.write(12345, 99);
  EXPECT_EQ(m.read(12345), 99u);
  EXPECT_THROW(m.read(1 << 20), Error);
}

TEST(Slice, ScratchpadReadWrite) {
  Slice s(64);
  s.spm_write(10, 7);
  EXPECT_EQ(s.spm_read(10), 7u);
  EXPECT_THROW(s.spm_read(64), Error);
  EXPECT_THROW(s.spm_write(64, 1), Error);
}

TEST(Projection, StripedMatchesInterleave) {
  const Projection p{true, 3, 8, 2};
  // Local words 0,1 are global 6,7; local 2,3 are global 22,23.
  EXPECT_EQ(p.to_global(0), 6u);
  EXPECT_EQ(p.to_global(1), 7u);
  EXPECT_EQ(p.to_global(2), 22u);
  EXPECT_EQ(p.to_global(3), 23u);
  EXPECT_EQ(Projection{}.to_global(41), 41u);
}

// Direct-mapped write-back write-allocate model over a flat memory.
struct CacheModel {
  int line_words;
  int lines;
  std::map<std::uint64_t, Word>& mem;
  struct Line {
    bool valid = false;
    bool dirty = false;
    std::uint64_t line_no = 0;
    std::vector<Word> data;
  };
  std::vector<Line> sets;
  CacheModel(int lw, int n, std::map<std::uint64_t, Word>& m) : line_words(lw), lines(n), mem(m), sets(static_cast<std::size_t>(n)) {}
  std::pair<bool, Word> access(bool write, Word v, std::uint64_t addr) {
    const std::uint64_t ln = addr / static_cast<std::uint64_t>(line_words);
    Line& l = sets[ln % static_cast<std::uint64_t>(lines)];
    const bool hit = l.valid && l.line_no == ln;
    if (!hit) {
      if (l.valid && l.dirty)
        for (int j = 0; j < line_words; ++j) mem[l.line_no * static_cast<std::uint64_t>(line_words) + static_cast<std::uint64_t>(j)] = l.data[static_cast<std::size_t>(j)];
      l.data.assign(static_cast<std::size_t>(line_words), 0);
      for (int j = 0; j < line_words; ++j) l.data[static_cast<std::size_t>(j)] = mem[ln * static_cast<std::uint64_t>(line_words) + static_cast<std::uint64_t>(j)];
      l.valid = true;
      l.dirty = false;
      l.line_no = ln;
    }
    Word& w = l.data[addr % static_cast<std::uint64_t>(line_words)];
    if (write) {
      w = v;
      l.dirty = true;
      return {hit, 0};
    }
    return {hit, w};
  }
};

TEST(Slice, CacheMatchesDirectMappedModel) {
  NextLevelMemory mem(1 << 16);
  std::map<std::uint64_t, Word> ref_mem;
  Slice s(64, SliceMode::cache(8));
  ASSERT_EQ(s.n_lines(), 8);
  CacheModel ref(8, 8, ref_mem);
  std::mt19937 rng(3);
  for (int i = 0; i < 20000; ++i) {
    const std::uint64_t a = rng() % 512;
    const bool w = rng() % 3 == 0;
    const Word v = static_cast<Word>(rng());
    const auto got = s.cache_access(w, v, a, mem);
    const auto want = ref.access(w, v, a);
    ASSERT_EQ(got.hit, want.first) << "access " << i;
    if (!w) {
      ASSERT_EQ(got.value, want.second) << "access " << i;
    }
  }
  EXPECT_EQ(s.stats.hits + s.stats.misses, 20000u);
}

TEST(Slice, DirtyEvictionWritesBack) {
  NextLevelMemory mem(1 << 16);
  Slice s(64, SliceMode::cache(8));
  s.cache_access(true, 42, 3, mem);
  const auto out = s.cache_access(false, 0, 3 + 64, mem);
  EXPECT_FALSE(out.hit);
  EXPECT_TRUE(out.dirty_eviction);
  EXPECT_EQ(mem.read(3), 42u);
}

TEST(Slice, StrictTransitionRejectsDirtyLines) {
  NextLevelMemory mem(1 << 16);
  Slice s(64, SliceMode::cache(8));
  s.cache_access(true, 1, 0, mem);
  try {
    s.transition(SliceMode::spm(), Projection{}, true, "t0.s0");
    FAIL() << "expected DirtyDrop";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DirtyDrop);
  }
  EXPECT_GT(s.flush_all(mem), 0);
  EXPECT_EQ(mem.read(0), 1u);
  EXPECT_TRUE(s.transition(SliceMode::spm(), Projection{}, true, "t0.s0"));
}

TEST(Slice, LenientTransitionDropsDirtyLines) {
  NextLevelMemory mem(1 << 16);
  Slice s(64, SliceMode::cache(8));
  s.cache_access(true, 5, 0, mem);
  EXPECT_TRUE(s.transition(SliceMode::spm(), Projection{}, false, "t0.s0"));
  EXPECT_EQ(mem.read(0), 0u);
}

TEST(Slice, SramSurvivesModeChanges) {
  Slice s(64);
  for (std::uint32_t i = 0; i < 64; ++i) s.spm_write(i, i * 3);
  s.transition(SliceMode::fifo(), Projection{}, true, "s");
  s.transition(SliceMode::spm(), Projection{}, true, "s");
  for (std::uint32_t i = 0; i < 64; ++i) EXPECT_EQ(s.spm_read(i), i * 3);
}

TEST(Slice, FifoMatchesDeque) {
  Slice s(64, SliceMode::fifo(16));
  ASSERT_EQ(s.fifo_capacity(), 16u);
  std::deque<Word> ref;
  std::mt19937 rng(11);
  for (int i = 0; i < 5000; ++i) {
    if (rng() % 2 && !s.fifo_full()) {
      const Word v = static_cast<Word>(rng());
      s.fifo_push(v);
      ref.push_back(v);
    } else if (!s.fifo_empty()) {
      ASSERT_EQ(s.fifo_front(), ref.front());
      ASSERT_EQ(s.fifo_pop(), ref.front());
      ref.pop_front();
    }
    ASSERT_EQ(s.fifo_fill(), ref.size());
    ASSERT_EQ(s.fifo_full(), ref.size() == 16);
  }
}

TEST(Slice, FifoDefaultsToWholeSlice) {
  Slice s(64, SliceMode::fifo());
  EXPECT_EQ(s.fifo_capacity(), 64u);
}

}  // namespace
}  // namespace versa
