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

#include "versa/energy.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "versa/errors.hpp"

namespace versa {

namespace {

constexpr std::array<std::string_view, kEnergyClassCount> kNames{
    "subbank_access", "tag_check", "xbar_traversal", "r2r_transfer",   "spm_atomic",
    "nextlevel_word", "flop",      "core_active_cycle", "idle_cycle",
};

}  // namespace

std::string_view energy_class_name(EnergyClass c) { return kNames[static_cast<std::size_t>(c)]; }

EnergyClass energy_class_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return static_cast<EnergyClass>(i);
  throw Error(ErrorCode::UnknownClass, "unknown energy class '" + std::string(name) + "'");
}

const std::array<EnergyClass, kEnergyClassCount>& all_energy_classes() {
  static const std::array<EnergyClass, kEnergyClassCount> all = [] {
    std::array<EnergyClass, kEnergyClassCount> a{};
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<EnergyClass>(i);
    return a;
  }();
  return all;
}

double EnergyCoefficients::of(EnergyClass c) const {
  return const_cast<EnergyCoefficients*>(this)->of(c);
}

double& EnergyCoefficients::of(EnergyClass c) {
  switch (c) {
    case EnergyClass::SubbankAccess: return subbank_access;
    case EnergyClass::TagCheck: return tag_check;
    case EnergyClass::XbarTraversal: return xbar_traversal;
    case EnergyClass::R2rTransfer: return r2r_transfer;
    case EnergyClass::SpmAtomic: return spm_atomic;
    case EnergyClass::NextlevelWord: return nextlevel_word;
    case EnergyClass::Flop: return flop;
    case EnergyClass::CoreActiveCycle: return core_active_cycle;
    case EnergyClass::IdleCycle: return idle_cycle;
  }
  return subbank_access;
}

void EnergyCoefficients::validate() const {
  for (auto c : all_energy_classes())
    if (!(of(c) >= 0.0))
      throw Error(ErrorCode::ConfigError,
                  "energy coefficient '" + std::string(energy_class_name(c)) + "' must be >= 0");
}

EnergyLedger::EnergyLedger(EnergyCoefficients coeffs, int n_tiles)
    : coeffs_(coeffs), tile_counts_(static_cast<std::size_t>(std::max(1, n_tiles)) * kEnergyClassCount, 0) {}

void EnergyLedger::charge(EnergyClass c, std::uint64_t multiplicity, int tile) {
  if (multiplicity == 0) return;
  counts_[idx(c)] += multiplicity;
  tile_counts_[static_cast<std::size_t>(tile) * kEnergyClassCount + idx(c)] += multiplicity;
}

void EnergyLedger::charge(std::string_view cls, std::uint64_t multiplicity, int tile) {
  charge(energy_class_from_name(cls), multiplicity, tile);
}

double EnergyLedger::energy(EnergyClass c) const {
  return coeffs_.of(c) * static_cast<double>(counts_[idx(c)]);
}

double EnergyLedger::total() const {
  double sum = 0;
  for (auto c : all_energy_classes()) sum += energy(c);
  return sum;
}

std::uint64_t EnergyLedger::tile_count(int tile, EnergyClass c) const {
  return tile_counts_[static_cast<std::size_t>(tile) * kEnergyClassCount + idx(c)];
}

double EnergyLedger::tile_energy(int tile, EnergyClass c) const {
  return coeffs_.of(c) * static_cast<double>(tile_count(tile, c));
}

double EnergyLedger::tile_total(int tile) const {
  double sum = 0;
  for (auto c : all_energy_classes()) sum += tile_energy(tile, c);
  return sum;
}

double EnergyLedger::subbank_word_energy() const {
  return static_cast<double>(word_accesses_) * coeffs_.subbank_access;
}

double EnergyLedger::monolithic_word_energy() const {
  return static_cast<double>(word_accesses_) * coeffs_.monolithic_access();
}

// ---------------------------------------------------------------------------

double DvfsPoint::gflops_per_watt() const {
  const double w = power_w();
  return w > 0 ? gflops / w : 0.0;
}

std::vector<DvfsPoint> default_dvfs_table() {
  DvfsPoint mep;
  mep.vdd = 0.6;
  mep.freq_hz = 31e6;
  mep.energy_per_cycle_pj = 543;
  mep.power_full_w = 543e-12 * 31e6;
  // Activity reconciling 7.9 mW at this point with the full-activity envelope.
  mep.activity = 7.9e-3 / mep.power_full_w;
  // Throughput implied by 36.4 GFLOPS/W at 7.9 mW.
  mep.gflops = 36.4 * 7.9e-3;

  DvfsPoint nominal;
  nominal.vdd = 1.0;
  nominal.freq_hz = 510e6;
  nominal.energy_per_cycle_pj = 1588;
  nominal.power_full_w = 1588e-12 * 510e6;
  nominal.activity = 1.0;
  nominal.gflops = 11.9;
  return {mep, nominal};
}

void validate_dvfs_table(const std::vector<DvfsPoint>& table) {
  if (table.size() < 2) throw Error(ErrorCode::InvalidPoint, "DVFS table needs at least two anchor points");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& p = table[i];
    if (!(p.freq_hz > 0) || !(p.energy_per_cycle_pj > 0) || !(p.power_full_w > 0))
      throw Error(ErrorCode::InvalidPoint, "DVFS point " + std::to_string(p.vdd) + " V has non-positive fields");
    const double derived = p.energy_per_cycle_pj * 1e-12 * p.freq_hz;
    if (std::abs(derived - p.power_full_w) > 0.01 * p.power_full_w)
      throw Error(ErrorCode::InvalidPoint, "DVFS point " + std::to_string(p.vdd) +
                                               " V: power and energy-per-cycle disagree by more than 1%");
    if (i > 0 && !(table[i - 1].vdd < p.vdd))
      throw Error(ErrorCode::InvalidPoint, "DVFS table must be sorted by strictly increasing vdd");
  }
}

DvfsPoint dvfs_point(const std::vector<DvfsPoint>& table, double vdd) {
  validate_dvfs_table(table);
  for (const auto& p : table)
    if (std::abs(p.vdd - vdd) < 1e-9) return p;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& a = table[i - 1];
    const auto& b = table[i];
    if (vdd > a.vdd && vdd < b.vdd) {
      const double t = (vdd - a.vdd) / (b.vdd - a.vdd);
      auto lerp = [t](double x, double y) { return x + t * (y - x); };
      auto logerp = [t](double x, double y) { return std::exp(std::log(x) + t * (std::log(y) - std::log(x))); };
      DvfsPoint p;
      p.vdd = vdd;
      p.energy_per_cycle_pj = lerp(a.energy_per_cycle_pj, b.energy_per_cycle_pj);
      p.freq_hz = logerp(a.freq_hz, b.freq_hz);
      p.power_full_w = p.energy_per_cycle_pj * 1e-12 * p.freq_hz;
      p.activity = lerp(a.activity, b.activity);
      p.gflops = logerp(a.gflops, b.gflops);
      p.interpolated = true;
      return p;
    }
  }
  throw Error(ErrorCode::InvalidPoint, "vdd " + std::to_string(vdd) + " V outside the DVFS table");
}

Efficiency efficiency(std::uint64_t flops, std::uint64_t cycles, double ledger_pj, const DvfsPoint& p) {
  Efficiency e;
  if (cycles == 0 || p.freq_hz <= 0) return e;
  e.seconds = static_cast<double>(cycles) / p.freq_hz;
  e.gflops = static_cast<double>(flops) / e.seconds / 1e9;
  e.event_watts = ledger_pj * 1e-12 / e.seconds;
  e.event_gflops_per_watt = e.event_watts > 0 ? e.gflops / e.event_watts : 0.0;
  e.envelope_watts = p.energy_per_cycle_pj * 1e-12 * p.freq_hz;
  e.envelope_gflops_per_watt = e.envelope_watts > 0 ? e.gflops / e.envelope_watts : 0.0;
  return e;
}

}  // namespace versa
