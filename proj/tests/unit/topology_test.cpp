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

#include "versa/errors.hpp"
#include "versa/topology.hpp"

namespace versa {
namespace {

TEST(Geometry, DefaultsValidate) {
  const ChipGeometry g;
  EXPECT_NO_THROW(g.validate());
  EXPECT_EQ(g.total_workers(), 32);
  EXPECT_EQ(g.total_cores(), 36);
  EXPECT_EQ(g.slice_words(), 4096u);
  EXPECT_EQ(g.mesh_rows(), 8);
  EXPECT_EQ(g.mesh_cols(), 4);
}

TEST(Geometry, WorkerGridMustCoverWorkers) {
  ChipGeometry g;
  g.workers_per_tile = 7;
  try {
    g.validate();
    FAIL() << "expected InvalidGeometry";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidGeometry);
  }
}

TEST(Geometry, RejectsZeroTiles) {
  ChipGeometry g;
  g.n_tiles = 0;
  EXPECT_THROW(g.validate(), Error);
}

TEST(AddressMap, EncodeDecodeRoundTrip) {
  const ChipGeometry g;
  const AddressMap map(g);
  for (Region r : {Region::Rocm, Region::Tspm, Region::Gspm, Region::Global}) {
    for (std::uint32_t off : {0u, 4u, map.region_size(r) - 4}) {
      const Location loc{r, off};
      const auto back = map.decode(map.encode(loc));
      ASSERT_TRUE(back.has_value());
      EXPECT_EQ(*back, loc);
    }
  }
}

TEST(AddressMap, RegionBases) {
  const AddressMap map{ChipGeometry{}};
  EXPECT_EQ(map.decode(0x1000'0000)->region, Region::Tspm);
  EXPECT_EQ(map.decode(0x2000'0008)->offset, 8u);
  EXPECT_EQ(map.decode(0x4000'0000)->region, Region::Global);
}

TEST(AddressMap, SharedStripingIsWordInterleaved) {
  const AddressMap map{ChipGeometry{}};
  // Granularity 1 over 8 slices: word w lives in slice w % 8 at local w / 8.
  for (std::uint64_t w = 0; w < 100; ++w) {
    const auto sw = map.shared_slice(w);
    EXPECT_EQ(sw.slice, static_cast<int>(w % 8));
    EXPECT_EQ(sw.local_word, w / 8);
    EXPECT_EQ(map.shared_word(sw.slice, sw.local_word), w);
  }
}

TEST(AddressMap, CoarseGranularityRoundTrip) {
  ChipGeometry g;
  g.interleave_granularity = 4;
  const AddressMap map(g);
  for (std::uint64_t w = 0; w < 256; ++w) {
    const auto sw = map.shared_slice(w);
    EXPECT_EQ(sw.slice, static_cast<int>((w / 4) % 8));
    EXPECT_EQ(map.shared_word(sw.slice, sw.local_word), w);
  }
}

TEST(Chip, CoreEnumeration) {
  const Chip chip = build_geometry(ChipGeometry{});
  EXPECT_EQ(chip.cores().size(), 36u);
  for (int i = 0; i < chip.worker_count(); ++i) EXPECT_EQ(chip.worker_index(chip.worker_at(i)), i);
  EXPECT_EQ(to_string(CoreId::worker(1, 3)), "t1.w3");
  EXPECT_EQ(to_string(CoreId::manager(2)), "t2.mgr");
}

TEST(Chip, MeshNeighboursAreSymmetric) {
  const Chip chip = build_geometry(ChipGeometry{});
  const ChipGeometry& g = chip.geometry();
  for (int i = 0; i < chip.worker_count(); ++i) {
    const CoreId w = chip.worker_at(i);
    const MeshCoord c = chip.mesh_coord(w);
    for (Direction d : kAllDirections) {
      const auto n = chip.r2r_neighbor(w, d);
      const int dr = d == Direction::N ? -1 : d == Direction::S ? 1 : 0;
      const int dc = d == Direction::W ? -1 : d == Direction::E ? 1 : 0;
      const bool inside = c.row + dr >= 0 && c.row + dr < g.mesh_rows() && c.col + dc >= 0 && c.col + dc < g.mesh_cols();
      ASSERT_EQ(n.has_value(), inside);
      if (!n) continue;
      EXPECT_EQ(chip.mesh_coord(*n), (MeshCoord{c.row + dr, c.col + dc}));
      EXPECT_EQ(chip.r2r_neighbor(*n, opposite(d)), w);
    }
  }
}

TEST(Chip, MeshCoordinatesAreABijection) {
  const Chip chip = build_geometry(ChipGeometry{});
  std::vector<int> seen(static_cast<std::size_t>(chip.worker_count()), 0);
  for (int r = 0; r < chip.geometry().mesh_rows(); ++r)
    for (int c = 0; c < chip.geometry().mesh_cols(); ++c) {
      const auto w = chip.worker_at_mesh({r, c});
      ASSERT_TRUE(w.has_value());
      ++seen[static_cast<std::size_t>(chip.worker_index(*w))];
      EXPECT_EQ(chip.tile_of_mesh({r, c}), w->tile);
    }
  for (int s : seen) EXPECT_EQ(s, 1);
}

}  // namespace
}  // namespace versa
