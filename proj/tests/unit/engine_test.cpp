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

#include "versa/engine.hpp"
#include "versa/errors.hpp"
#include "versa/sync.hpp"

namespace versa {
namespace {

Addr rocm(std::uint32_t word) { return AddressMap::kRocmBase + 4 * word; }
Addr global(std::uint32_t word) { return AddressMap::kGlobalBase + 4 * word; }

ErrorCode run_error(Simulator& sim) {
  try {
    sim.run();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "run() did not throw";
  return ErrorCode::ConfigError;
}

TEST(Program, OpNames) {
  EXPECT_EQ(op_name(op::Load{}), "load");
  EXPECT_EQ(op_name(op::SetMode{}), "set_mode");
}

TEST(Program, FromOpsYieldsInOrder) {
  Program p = Program::from_ops({op::Compute{2, 0}, op::Load{8}});
  auto a = p.next(0);
  ASSERT_TRUE(a && std::holds_alternative<op::Compute>(*a));
  auto b = p.next(0);
  ASSERT_TRUE(b && std::holds_alternative<op::Load>(*b));
  EXPECT_FALSE(p.next(0).has_value());
  EXPECT_TRUE(p.finished());
}

Task<Word> add_loaded(Addr a, Addr b) {
  const Word x = co_await op::Load{a};
  const Word y = co_await op::Load{b};
  co_return x + y;
}

// Scratchpad plans address ROCM directly; cache plans go through global addresses.
Task<void> store_sum(Addr (*at)(std::uint32_t), Word* out) {
  co_await op::Store{at(0), 20};
  co_await op::Store{at(1), 22};
  const Word s = co_await add_loaded(at(0), at(1));
  co_await op::Store{at(2), s};
  *out = co_await op::Load{at(2)};
}

TEST(Engine, NestedTasksSeeStoredValues) {
  for (Preset p : {Preset::SharedSpm, Preset::PrivateSpm, Preset::SharedCache, Preset::PrivateCache}) {
    const Chip chip = build_geometry(ChipGeometry{});
    Simulator sim(chip);
    sim.set_initial_mode(0, make_plan(p, chip.geometry()));
    Word got = 0;
    const bool cached = p == Preset::SharedCache || p == Preset::PrivateCache;
    sim.load(CoreId::worker(0, 3), Program(store_sum(cached ? &global : &rocm, &got)));
    const StatRecord st = sim.run();
    EXPECT_EQ(got, 42u) << preset_name(p);
    EXPECT_TRUE(st.accounting_closes()) << preset_name(p);
  }
}

Task<void> copy_round_trip(Word* out) {
  co_await op::CopyIn{global(64), rocm(0), 16};
  const Word v = co_await op::Load{rocm(5)};
  co_await op::Store{rocm(5), v * 2};
  co_await op::CopyOut{rocm(0), global(128), 16};
  *out = v;
}

TEST(Engine, BlockCopies) {
  const Chip chip = build_geometry(ChipGeometry{});
  Simulator sim(chip);
  sim.set_initial_mode(0, make_plan(Preset::PrivateSpm, chip.geometry()));
  for (std::uint32_t i = 0; i < 16; ++i) sim.memory().write(64 + i, 1000 + i);
  Word got = 0;
  sim.load(CoreId::worker(0, 0), Program(copy_round_trip(&got)));
  sim.run();
  EXPECT_EQ(got, 1005u);
  EXPECT_EQ(sim.memory().read(128 + 5), 2010u);
  EXPECT_EQ(sim.memory().read(128 + 4), 1004u);
}

TEST(Engine, ComputeAdvancesTimeAndCountsFlops) {
  const Chip chip = build_geometry(ChipGeometry{});
  Simulator sim(chip);
  sim.load(CoreId::worker(0, 0), Program::from_ops({op::Compute{100, 64}}));
  const StatRecord st = sim.run();
  EXPECT_GE(st.cycles, 100u);
  EXPECT_EQ(st.flops, 64u);
  EXPECT_TRUE(st.accounting_closes());
}

TEST(Engine, CycleLimit) {
  const Chip chip = build_geometry(ChipGeometry{});
  SimOptions o;
  o.cycle_limit = 50;
  Simulator sim(chip, o);
  sim.load(CoreId::worker(0, 0), Program::from_ops({op::Compute{1000, 0}}));
  EXPECT_EQ(run_error(sim), ErrorCode::CycleLimitExceeded);
}

TEST(Engine, FifoOutsideQueueMode) {
  const Chip chip = build_geometry(ChipGeometry{});
  Simulator sim(chip);
  sim.load(CoreId::worker(0, 0), Program::from_ops({op::FifoPush{0, 1}}));
  EXPECT_EQ(run_error(sim), ErrorCode::ModeViolation);
}

TEST(Engine, WorkersCannotReconfigure) {
  const Chip chip = build_geometry(ChipGeometry{});
  Simulator sim(chip);
  sim.load(CoreId::worker(0, 0), Program::from_ops({op::SetMode{make_plan(Preset::PrivateSpm, chip.geometry())}}));
  EXPECT_EQ(run_error(sim), ErrorCode::IllegalOp);
}

TEST(Engine, R2rNeedsEnabledLinks) {
  const Chip chip = build_geometry(ChipGeometry{});
  Simulator sim(chip);
  sim.load(CoreId::worker(0, 0), Program::from_ops({op::R2rWrite{Direction::S, 1}}));
  EXPECT_EQ(run_error(sim), ErrorCode::IllegalOp);
}

TEST(Engine, MeshBoundaryWrite) {
  const Chip chip = build_geometry(ChipGeometry{});
  Simulator sim(chip);
  for (int t = 0; t < 4; ++t) sim.set_initial_mode(t, make_plan(Preset::PrivateSpmR2r, chip.geometry()));
  sim.load(*chip.worker_at_mesh({0, 0}), Program::from_ops({op::R2rWrite{Direction::W, 1}}));
  EXPECT_EQ(run_error(sim), ErrorCode::BoundaryWrite);
}

Task<void> dirty_then_switch(TileMode target) {
  co_await op::Compute{40, 0};
  op::SetMode set{std::move(target)};
  co_await std::move(set);
}

TEST(Engine, StrictModeRejectsDirtyDrop) {
  const Chip chip = build_geometry(ChipGeometry{});
  Simulator sim(chip);
  sim.set_initial_mode(0, make_plan(Preset::PrivateCache, chip.geometry()));
  sim.load(CoreId::worker(0, 0), Program::from_ops({op::Store{global(0), 5}}));
  sim.load(CoreId::manager(0), Program(dirty_then_switch(make_plan(Preset::PrivateSpm, chip.geometry()))));
  EXPECT_EQ(run_error(sim), ErrorCode::DirtyDrop);
}

TEST(Engine, AtomicsReachTileScratchpad) {
  const Chip chip = build_geometry(ChipGeometry{});
  Simulator sim(chip);
  for (int w = 0; w < 8; ++w)
    sim.load(CoreId::worker(0, w), Program::from_ops({op::Atomic{AtomicKind::FetchAdd, tspm_addr(10), 3}}));
  sim.run();
  EXPECT_EQ(sim.tspm(0).peek(10), 24u);
}

TEST(Engine, CanonicalRecordIsDeterministic) {
  auto once = [] {
    const Chip chip = build_geometry(ChipGeometry{});
    Simulator sim(chip);
    for (int w = 0; w < 8; ++w) {
      std::vector<CoreOp> ops;
      for (std::uint32_t i = 0; i < 32; ++i) ops.push_back(op::Load{rocm(i * 8)});
      sim.load(CoreId::worker(0, w), Program::from_ops(std::move(ops)));
    }
    return to_json_canonical(sim.run()).dump();
  };
  EXPECT_EQ(once(), once());
}

}  // namespace
}  // namespace versa
