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

#include <algorithm>

#include "versa/engine.hpp"
#include "versa/sync.hpp"

namespace versa {
namespace {

TEST(Scratchpad, AtomicsReturnOldValue) {
  Scratchpad s("tspm0", 64, 4, 2, 4);
  EXPECT_EQ(s.apply(AtomicKind::FetchAdd, 3, 5), 0u);
  EXPECT_EQ(s.apply(AtomicKind::FetchAdd, 3, 2), 5u);
  EXPECT_EQ(s.apply(AtomicKind::Read, 3, 0), 7u);
  EXPECT_EQ(s.apply(AtomicKind::Write, 3, 1), 7u);
  EXPECT_EQ(s.peek(3), 1u);
  EXPECT_EQ(s.words(), 16u);
}

TEST(Scratchpad, SinglePortSerialisesRequesters) {
  Scratchpad s("g", 64, 4, 5, 4);
  const std::vector<int> req{0, 1, 2};
  ASSERT_TRUE(s.port_free(0));
  const auto g = s.arbitrate(0, req);
  ASSERT_TRUE(g.has_value());
  EXPECT_FALSE(s.port_free(1));
  EXPECT_TRUE(s.port_free(5));
}

TEST(Addresses, ScratchpadRegions) {
  EXPECT_EQ(tspm_addr(3), AddressMap::kTspmBase + 12);
  EXPECT_EQ(gspm_addr(0), AddressMap::kGspmBase);
}

Task<void> arrive(std::uint32_t delay, BarrierScope scope, int rounds) {
  for (int r = 0; r < rounds; ++r) {
    co_await op::Compute{delay + 1, 0};
    co_await op::Barrier{scope};
    co_await op::Compute{1, 0};
  }
}

// No participant may leave a barrier before the last one has entered it.
void check_barrier(BarrierScope scope, int tiles_used) {
  const Chip chip = build_geometry(ChipGeometry{});
  SimOptions o;
  o.trace = true;
  Simulator sim(chip, o);
  std::vector<int> cores;
  for (int t = 0; t < tiles_used; ++t)
    for (int w = 0; w < 8; ++w) {
      const CoreId id = CoreId::worker(t, w);
      sim.load(id, Program(arrive(static_cast<std::uint32_t>((w * 7 + t * 3) % 11), scope, 3)));
      cores.push_back(chip.core_index(id));
    }
  const StatRecord st = sim.run();
  // Compute ops alternate: the one before each barrier, then the one after.
  std::vector<std::vector<TraceEvent>> per_core(chip.cores().size());
  for (const auto& e : sim.trace())
    if (e.op == "compute") per_core[static_cast<std::size_t>(e.core)].push_back(e);
  for (std::size_t round = 0; round < 3; ++round) {
    Cycle last_entry = 0;
    Cycle first_exit = ~Cycle{0};
    for (int c : cores) {
      const auto& ev = per_core[static_cast<std::size_t>(c)];
      ASSERT_EQ(ev.size(), 6u);
      last_entry = std::max(last_entry, ev[2 * round].complete);
      first_exit = std::min(first_exit, ev[2 * round + 1].issue);
    }
    EXPECT_GT(first_exit, last_entry) << "round " << round;
  }
  ASSERT_EQ(st.barriers.size(), 3u);
  for (const auto& b : st.barriers) {
    EXPECT_EQ(b.arrivals, tiles_used * 8);
    EXPECT_EQ(b.released, tiles_used * 8);
    EXPECT_GE(b.last_release, b.last_entry);
  }
}

TEST(Barrier, TileScope) { check_barrier(BarrierScope::Tile, 1); }
TEST(Barrier, Centralized) { check_barrier(BarrierScope::Centralized, 4); }
TEST(Barrier, Tree) { check_barrier(BarrierScope::Tree, 4); }

TEST(Barrier, TreeBeatsCentralizedAtFullChip) {
  auto latency = [](BarrierScope scope) {
    const Chip chip = build_geometry(ChipGeometry{});
    Simulator sim(chip);
    for (int i = 0; i < chip.worker_count(); ++i) sim.load(chip.worker_at(i), Program(arrive(0, scope, 1)));
    const StatRecord st = sim.run();
    return st.barriers.at(0).latency();
  };
  EXPECT_LT(latency(BarrierScope::Tree), latency(BarrierScope::Centralized));
}

}  // namespace
}  // namespace versa
