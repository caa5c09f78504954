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

/**
 * @file energy.hpp
 * @brief Event energy ledger, DVFS operating points and efficiency figures.
 *
 * Two power models are reported side by side. The event model sums
 * per-event coefficients (relative units, nominally pJ) and is meant for
 * mode-vs-mode comparisons. The envelope model multiplies the chip's
 * full-activity energy per cycle by the clock and carries the absolute
 * operating-point figures.
 */

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace versa {

enum class EnergyClass : std::uint8_t {
  SubbankAccess,
  TagCheck,
  XbarTraversal,
  R2rTransfer,
  SpmAtomic,
  NextlevelWord,
  Flop,
  CoreActiveCycle,
  IdleCycle,
};
inline constexpr std::size_t kEnergyClassCount = 9;

std::string_view energy_class_name(EnergyClass c);
/// Throws UnknownClass.
EnergyClass energy_class_from_name(std::string_view name);
const std::array<EnergyClass, kEnergyClassCount>& all_energy_classes();

struct EnergyCoefficients {
  static constexpr double kMonolithicFactor = 3.4;

  double subbank_access = 1.0;
  double tag_check = 0.4;
  double xbar_traversal = 0.6;
  double r2r_transfer = 0.3;
  double spm_atomic = 1.5;
  double nextlevel_word = 12.0;
  double flop = 2.0;
  double core_active_cycle = 3.0;
  double idle_cycle = 0.6;

  double monolithic_access() const { return kMonolithicFactor * subbank_access; }
  double of(EnergyClass c) const;
  double& of(EnergyClass c);
  /// Throws ConfigError for negative coefficients.
  void validate() const;

  friend bool operator==(const EnergyCoefficients&, const EnergyCoefficients&) = default;
};

class EnergyLedger {
 public:
  explicit EnergyLedger(EnergyCoefficients coeffs = {}, int n_tiles = 1);

  void charge(EnergyClass c, std::uint64_t multiplicity, int tile = 0);
  /// Name-based entry point; throws UnknownClass.
  void charge(std::string_view cls, std::uint64_t multiplicity, int tile = 0);

  /// Records single-word array accesses for the monolithic counterfactual.
  void note_word_access(std::uint64_t n = 1) { word_accesses_ += n; }

  std::uint64_t count(EnergyClass c) const { return counts_[idx(c)]; }
  /// count(c) times the coefficient of c.
  double energy(EnergyClass c) const;
  /// Sum of energy(c) in class order.
  double total() const;
  int n_tiles() const { return static_cast<int>(tile_counts_.size() / kEnergyClassCount); }
  std::uint64_t tile_count(int tile, EnergyClass c) const;
  double tile_energy(int tile, EnergyClass c) const;
  double tile_total(int tile) const;

  std::uint64_t word_accesses() const { return word_accesses_; }
  double subbank_word_energy() const;
  double monolithic_word_energy() const;

  const EnergyCoefficients& coefficients() const { return coeffs_; }

 private:
  static std::size_t idx(EnergyClass c) { return static_cast<std::size_t>(c); }

  EnergyCoefficients coeffs_;
  std::array<std::uint64_t, kEnergyClassCount> counts_{};
  std::vector<std::uint64_t> tile_counts_;
  std::uint64_t word_accesses_ = 0;
};

struct DvfsPoint {
  double vdd = 1.0;                  // volts
  double freq_hz = 510e6;
  double energy_per_cycle_pj = 1588;
  double power_full_w = 0.80988;     // full-activity chip power
  double activity = 1.0;             // workload activity at this point
  double gflops = 11.9;              // delivered throughput at this point
  bool interpolated = false;

  double power_w() const { return power_full_w * activity; }
  double gflops_per_watt() const;

  friend bool operator==(const DvfsPoint&, const DvfsPoint&) = default;
};

/// Two-anchor default table: minimum-energy point and nominal point.
std::vector<DvfsPoint> default_dvfs_table();
/// Throws InvalidPoint if a point's power and energy-per-cycle disagree by
/// more than 1%, or if the table is not sorted by voltage.
void validate_dvfs_table(const std::vector<DvfsPoint>& table);
/// Exact table point, or an interpolated (flagged) point between anchors:
/// energy and activity linear in vdd, frequency and throughput logarithmic.
/// Throws InvalidPoint outside the table range.
DvfsPoint dvfs_point(const std::vector<DvfsPoint>& table, double vdd);

struct Efficiency {
  double seconds = 0;
  double gflops = 0;
  double event_watts = 0;
  double event_gflops_per_watt = 0;
  double envelope_watts = 0;
  double envelope_gflops_per_watt = 0;
};

Efficiency efficiency(std::uint64_t flops, std::uint64_t cycles, double ledger_pj, const DvfsPoint& p);

}  // namespace versa
