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
#include "versa/r2r.hpp"

namespace versa {
namespace {

struct Mesh : ::testing::Test {
  Chip chip = build_geometry(ChipGeometry{});
  LinkMesh mesh{chip};
  int east_of(int w) const { return chip.worker_index(*chip.r2r_neighbor(chip.worker_at(w), Direction::E)); }
};

TEST_F(Mesh, LinksConnectNeighbours) {
  const int l = mesh.out_link(0, Direction::E);
  ASSERT_GE(l, 0);
  EXPECT_EQ(mesh.link_target(l), east_of(0));
  EXPECT_EQ(mesh.in_link(east_of(0), Direction::W), l);
  EXPECT_LT(mesh.out_link(0, Direction::W), 0);  // mesh edge
}

TEST_F(Mesh, WriteThenRead) {
  const int l = mesh.out_link(0, Direction::E);
  const auto w = mesh.request_write(l, 17);
  mesh.resolve();
  EXPECT_TRUE(mesh.outcome(w).ok);
  EXPECT_TRUE(mesh.state(l).full);
  const auto r = mesh.request_read(l);
  mesh.resolve();
  EXPECT_TRUE(mesh.outcome(r).ok);
  EXPECT_EQ(mesh.outcome(r).value, 17u);
  EXPECT_FALSE(mesh.state(l).full);
  EXPECT_EQ(mesh.transfers(), 1u);
}

TEST_F(Mesh, ReadOfEmptyLinkBlocks) {
  const int l = mesh.out_link(0, Direction::E);
  const auto r = mesh.request_read(l);
  mesh.resolve();
  EXPECT_FALSE(mesh.outcome(r).ok);
  EXPECT_TRUE(mesh.outcome(r).read_side_failed);
}

TEST_F(Mesh, WriteToFullLinkBlocksUnlessDrained) {
  const int l = mesh.out_link(0, Direction::E);
  mesh.request_write(l, 1);
  mesh.resolve();
  const auto w2 = mesh.request_write(l, 2);
  mesh.resolve();
  EXPECT_FALSE(mesh.outcome(w2).ok);
  // Same-cycle read and write of a full link both succeed.
  const auto r = mesh.request_read(l);
  const auto w3 = mesh.request_write(l, 3);
  mesh.resolve();
  EXPECT_TRUE(mesh.outcome(r).ok);
  EXPECT_EQ(mesh.outcome(r).value, 1u);
  EXPECT_TRUE(mesh.outcome(w3).ok);
  EXPECT_EQ(mesh.state(l).payload, 3u);
}

TEST_F(Mesh, MoveForwardsAWord) {
  const int a = mesh.out_link(0, Direction::E);
  const int mid = east_of(0);
  const int b = mesh.out_link(mid, Direction::S);
  ASSERT_GE(b, 0);
  mesh.request_write(a, 9);
  mesh.resolve();
  const auto m = mesh.request_move(a, b);
  mesh.resolve();
  EXPECT_TRUE(mesh.outcome(m).ok);
  EXPECT_FALSE(mesh.state(a).full);
  EXPECT_TRUE(mesh.state(b).full);
  EXPECT_EQ(mesh.state(b).payload, 9u);
}

Task<void> sender(int n) {
  for (int i = 0; i < n; ++i) co_await op::R2rWrite{Direction::E, static_cast<Word>(100 + i)};
}

Task<void> receiver(int n, std::vector<Word>* out) {
  for (int i = 0; i < n; ++i) out->push_back(co_await op::R2rRead{Direction::W});
}

TEST(R2rSim, StreamArrivesInOrder) {
  const Chip chip = build_geometry(ChipGeometry{});
  Simulator sim(chip);
  for (int t = 0; t < 4; ++t) sim.set_initial_mode(t, make_plan(Preset::PrivateSpmR2r, chip.geometry()));
  const CoreId a = chip.worker_at_mesh({0, 0}).value();
  const CoreId b = chip.worker_at_mesh({0, 1}).value();
  std::vector<Word> got;
  sim.load(a, Program(sender(50)));
  sim.load(b, Program(receiver(50, &got)));
  const StatRecord st = sim.run();
  ASSERT_EQ(got.size(), 50u);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(got[static_cast<std::size_t>(i)], static_cast<Word>(100 + i));
  EXPECT_EQ(st.r2r_transfers, 50u);
}

Task<void> read_first(Direction d) { co_await op::R2rRead{d}; }

TEST(R2rSim, CyclicReadIsDeadlock) {
  const Chip chip = build_geometry(ChipGeometry{});
  Simulator sim(chip);
  for (int t = 0; t < 4; ++t) sim.set_initial_mode(t, make_plan(Preset::PrivateSpmR2r, chip.geometry()));
  sim.load(*chip.worker_at_mesh({0, 0}), Program(read_first(Direction::E)));
  sim.load(*chip.worker_at_mesh({0, 1}), Program(read_first(Direction::W)));
  try {
    sim.run();
    FAIL() << "expected Deadlock";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Deadlock);
  }
}

}  // namespace
}  // namespace versa
