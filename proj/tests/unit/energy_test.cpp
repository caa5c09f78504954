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

#include <cmath>

#include "versa/energy.hpp"
#include "versa/errors.hpp"

namespace versa {
namespace {

TEST(EnergyClass, NamesRoundTrip) {
  for (EnergyClass c : all_energy_classes()) EXPECT_EQ(energy_class_from_name(energy_class_name(c)), c);
  try {
    energy_class_from_name("dram_refresh");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownClass);
  }
}

TEST(Ledger, EnergyIsCoefficientTimesCount) {
  EnergyCoefficients k;
  k.flop = 2.5;
  k.nextlevel_word = 10.0;
  EnergyLedger l(k, 2);
  l.charge(EnergyClass::Flop, 4, 0);
  l.charge(EnergyClass::Flop, 6, 1);
  l.charge("nextlevel_word", 3, 1);
  EXPECT_EQ(l.count(EnergyClass::Flop), 10u);
  EXPECT_DOUBLE_EQ(l.energy(EnergyClass::Flop), 25.0);
  EXPECT_DOUBLE_EQ(l.total(), 55.0);
  EXPECT_EQ(l.tile_count(1, EnergyClass::Flop), 6u);
  EXPECT_DOUBLE_EQ(l.tile_total(0), 10.0);
  EXPECT_DOUBLE_EQ(l.tile_total(1), 45.0);
  EXPECT_DOUBLE_EQ(l.tile_total(0) + l.tile_total(1), l.total());
}

TEST(Ledger, SubbankingAgainstMonolithic) {
  EnergyLedger l;
  l.note_word_access(100);
  EXPECT_DOUBLE_EQ(l.subbank_word_energy(), 100.0);
  EXPECT_DOUBLE_EQ(l.monolithic_word_energy(), 340.0);
}

TEST(Coefficients, RejectNegative) {
  EnergyCoefficients k;
  k.tag_check = -1;
  EXPECT_THROW(k.validate(), Error);
}

TEST(Dvfs, NominalPointPower) {
  const DvfsPoint p = dvfs_point(default_dvfs_table(), 1.0);
  EXPECT_FALSE(p.interpolated);
  EXPECT_NEAR(p.power_w(), 1588e-12 * 510e6, 1e-12);
  EXPECT_NEAR(p.gflops_per_watt(), 11.9 / (1588e-12 * 510e6), 1e-9);
}

TEST(Dvfs, InterpolatedPointLiesBetweenAnchors) {
  const auto table = default_dvfs_table();
  const DvfsPoint p = dvfs_point(table, 0.8);
  EXPECT_TRUE(p.interpolated);
  EXPECT_GT(p.freq_hz, table[0].freq_hz);
  EXPECT_LT(p.freq_hz, table[1].freq_hz);
  EXPECT_NEAR(p.energy_per_cycle_pj, 0.5 * (table[0].energy_per_cycle_pj + table[1].energy_per_cycle_pj), 1e-9);
  EXPECT_NEAR(p.freq_hz, std::sqrt(table[0].freq_hz * table[1].freq_hz), 1e-3);
}

TEST(Dvfs, OutsideTableIsInvalidPoint) {
  try {
    dvfs_point(default_dvfs_table(), 1.2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidPoint);
  }
}

TEST(Dvfs, TableMustBeConsistent) {
  auto t = default_dvfs_table();
  t[1].power_full_w *= 1.5;
  EXPECT_THROW(validate_dvfs_table(t), Error);
  t = default_dvfs_table();
  std::swap(t[0], t[1]);
  EXPECT_THROW(validate_dvfs_table(t), Error);
}

TEST(Efficiency, EventModel) {
  DvfsPoint p;  // 510 MHz
  const Efficiency e = efficiency(1020, 510, 2.0e6, p);
  // 510 cycles at 510 MHz is 1 us; 1020 flop in 1 us is 1.02 GFLOPS; 2 uJ in 1 us is 2 W.
  EXPECT_NEAR(e.seconds, 1e-6, 1e-15);
  EXPECT_NEAR(e.gflops, 1.02, 1e-9);
  EXPECT_NEAR(e.event_watts, 2.0, 1e-9);
  EXPECT_NEAR(e.event_gflops_per_watt, 0.51, 1e-9);
}

}  // namespace
}  // namespace versa
