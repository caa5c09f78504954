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
 * @file sweep.hpp
 * @brief Size x plan sweeps over independent simulator instances.
 *
 * Points may run on several threads. Rows are always assembled in point
 * order, so the CSV does not depend on the thread count.
 *
 * CSV columns, in order:
 *
 *   point, kernel, plan, size, footprint_bytes, vdd, cycles, flops,
 *   energy_pj, gflops, gflops_per_watt, envelope_gflops_per_watt,
 *   output_match, winner, error
 *
 * `gflops_per_watt` uses the event model (flops over ledger energy) and is
 * the figure `winner` is decided on, per (kernel, size, vdd) group.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "versa/energy.hpp"
#include "versa/engine.hpp"
#include "versa/kernels.hpp"
#include "versa/modes.hpp"
#include "versa/topology.hpp"

namespace versa {

struct SweepPoint {
  KernelSpec spec;
  Preset plan = Preset::SharedCache;
  double vdd = 1.0;
};

struct SweepRow {
  std::size_t point = 0;
  KernelName kernel = KernelName::Gemm;
  Preset plan = Preset::SharedCache;
  std::uint32_t size = 0;
  std::uint64_t footprint = 0;
  double vdd = 1.0;
  std::uint64_t cycles = 0;
  std::uint64_t flops = 0;
  double energy_pj = 0;
  double gflops = 0;
  double gflops_per_watt = 0;
  double envelope_gflops_per_watt = 0;
  bool output_match = false;
  bool winner = false;
  std::string error;  // empty on success
};

/// Every (size, plan, vdd) combination for one kernel, sizes outermost.
std::vector<SweepPoint> sweep_points(const KernelSpec& base, const std::vector<Preset>& plans,
                                     const std::vector<std::uint32_t>& sizes, const std::vector<double>& vdds);

/// Runs all points on `jobs` threads (0 picks the hardware concurrency).
/// Errors are recorded in the row, never thrown.
std::vector<SweepRow> run_sweep(const std::vector<SweepPoint>& points, const ChipGeometry& geometry,
                                const SimOptions& opts, const std::vector<DvfsPoint>& dvfs_table, int jobs);

/// Sets `winner` on the best successful row of each (kernel, size, vdd) group.
void mark_winners(std::vector<SweepRow>& rows);

/// Smallest size whose winner differs from the winner at the smallest size,
/// for one kernel at one vdd.
std::optional<std::uint32_t> crossover_size(const std::vector<SweepRow>& rows, KernelName kernel, double vdd);

std::string to_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_summary(const std::vector<SweepRow>& rows);

}  // namespace versa
