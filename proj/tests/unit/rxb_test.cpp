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

#include <limits>
#include <random>

#include "versa/modes.hpp"
#include "versa/rxb.hpp"

namespace versa {
namespace {

// Reference arbiter: grant the requester whose last grant is oldest; ids never
// granted rank by id.
struct StampArbiter {
  std::vector<long> last;
  explicit StampArbiter(int n) : last(static_cast<std::size_t>(n)) {
    for (int i = 0; i < n; ++i) last[static_cast<std::size_t>(i)] = -1000000 + i;
  }
  int arbitrate(const std::vector<int>& req, long now) {
    int best = req.front();
    for (int r : req)
      if (last[static_cast<std::size_t>(r)] < last[static_cast<std::size_t>(best)]) best = r;
    last[static_cast<std::size_t>(best)] = now;
    return best;
  }
};

TEST(Lrg, RotatesUnderFullLoad) {
  LrgArbiter a(4);
  const std::vector<int> all{0, 1, 2, 3};
  for (int round = 0; round < 3; ++round)
    for (int expect = 0; expect < 4; ++expect) EXPECT_EQ(a.arbitrate(all), expect);
}

TEST(Lrg, EmptyRequestGrantsNothing) {
  LrgArbiter a(3);
  EXPECT_FALSE(a.arbitrate(std::span<const int>{}).has_value());
}

TEST(Lrg, MatchesTimestampModel) {
  std::mt19937 rng(7);
  LrgArbiter a(8);
  StampArbiter ref(8);
  for (long t = 0; t < 20000; ++t) {
    std::vector<int> req;
    for (int i = 0; i < 8; ++i)
      if (rng() % 3 == 0) req.push_back(i);
    if (req.empty()) continue;
    ASSERT_EQ(a.arbitrate(req), ref.arbitrate(req, t)) << "cycle " << t;
  }
}

TEST(Lrg, PickDoesNotUpdate) {
  LrgArbiter a(3);
  const std::vector<int> r{1, 2};
  EXPECT_EQ(a.pick(r), 1);
  EXPECT_EQ(a.pick(r), 1);
  a.grant(1);
  EXPECT_EQ(a.pick(r), 2);
}

TEST(Lrg, PerSliceArbitrationIsIndependent) {
  std::vector<LrgArbiter> lrg(2, LrgArbiter(4));
  const auto g1 = arbitrate({{2, 3}, {}}, lrg);
  ASSERT_EQ(g1.size(), 2u);
  EXPECT_EQ(g1[0], 2);
  EXPECT_FALSE(g1[1].has_value());
  const auto g2 = arbitrate({{2, 3}, {3}}, lrg);
  EXPECT_EQ(g2[0], 3);
  EXPECT_EQ(g2[1], 3);
}

TEST(Latency, SpmFollowsTimingParams) {
  const TimingParams t;
  const ChipGeometry g;
  EXPECT_EQ(access_latency(RxbKind::Private, AccessOutcome::Spm, t, g), t.private_spm);
  EXPECT_EQ(access_latency(RxbKind::Shared, AccessOutcome::Spm, t, g), t.shared_spm);
  EXPECT_LT(access_latency(RxbKind::Shared, AccessOutcome::CacheHit, t, g),
            access_latency(RxbKind::Shared, AccessOutcome::CacheMiss, t, g));
  EXPECT_LE(access_latency(RxbKind::Shared, AccessOutcome::CacheMiss, t, g),
            access_latency(RxbKind::Shared, AccessOutcome::CacheMissDirty, t, g));
}

TEST(Route, PrivateModeUsesOwnSlice) {
  const Chip chip = build_geometry(ChipGeometry{});
  const TileMode m = make_plan(Preset::PrivateSpm, chip.geometry());
  for (int w = 0; w < 8; ++w) {
    const Route r = route(MemRequest{CoreId::worker(0, w), false, 0, 4 * 5, 0}, m, chip);
    EXPECT_EQ(r.slice, w);
    EXPECT_EQ(r.local_word, 5u);
  }
}

TEST(Route, SharedModeStripes) {
  const Chip chip = build_geometry(ChipGeometry{});
  const TileMode m = make_plan(Preset::SharedSpm, chip.geometry());
  for (std::uint32_t w = 0; w < 64; ++w) {
    const Route r = route(MemRequest{CoreId::worker(0, 0), false, 0, 4 * w, 0}, m, chip);
    EXPECT_EQ(r.slice, static_cast<int>(w % 8));
    EXPECT_EQ(r.local_word, w / 8);
  }
}

}  // namespace
}  // namespace versa
