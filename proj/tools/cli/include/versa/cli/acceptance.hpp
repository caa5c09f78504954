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
 * @file acceptance.hpp
 * @brief The built-in acceptance suite behind `versa validate`.
 *
 *  1  latency ratio           private 2 vs shared 3 cycles per access, exact
 *  2  privatization           8-worker private / all-to-one shared >= 7.5
 *  3  queue doubling          queue / shared ping-pong throughput >= 1.9
 *  4  reconfiguration         ports blocked for c, c+1; first grant at c+2;
 *                             SRAM survives spm -> cache -> spm
 *  5  barrier scaling         centralized latency linear in N (R^2 >= 0.98),
 *                             centralized / tree at N=32 >= 3.0
 *  6  register link FIFO      randomized schedules match a depth-1 FIFO;
 *                             a cyclic wait is reported as Deadlock
 *  7  functional transparency every kernel x plan x 2 sizes matches its oracle
 *  8  stencil2d inversion     cache wins the smallest size, SPM+R2R the largest
 *  9  energy arithmetic       ledger conservation, sub-bank ratio, envelope
 *                             power, efficiency ratio of the two anchors
 * 10  determinism             repeated runs and --jobs settings agree byte for byte
 */

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "versa/cli/config.hpp"
#include "versa/energy.hpp"
#include "versa/rxb.hpp"
#include "versa/topology.hpp"

namespace versa::cli {

inline constexpr int kCriteriaCount = 10;

struct AcceptanceOptions {
  ChipGeometry geometry;
  TimingParams timing;
  EnergyCoefficients energy;
  std::vector<DvfsPoint> dvfs_table = default_dvfs_table();
  int jobs = 1;
  std::uint64_t r2r_schedules = 100'000;  // per link topology
  bool enforce_runtime = true;
};

/// Geometry, timing, energy and DVFS table of a run configuration.
AcceptanceOptions acceptance_options(const RunConfig& c);

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string measured;
  std::string expected;
  std::string detail;  // failure reason or extra figures
  double seconds = 0;
  double limit_seconds = 0;  // 0: no limit
};

std::string_view criterion_name(int id);
/// Never throws; an exception inside a check fails it with the message.
CheckResult run_criterion(int id, const AcceptanceOptions& opts);
/// Runs `ids` (all criteria if empty) in order.
std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opts, const std::vector<int>& ids = {});
/// One checklist line: "[PASS] 3 queue doubling: measured ... expected ...".
std::string format_check(const CheckResult& r);

}  // namespace versa::cli
