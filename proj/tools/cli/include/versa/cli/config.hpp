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
 * @file config.hpp
 * @brief The run configuration file: strict JSON, every field optional.
 *
 * The grammar and the default of every field are listed in docs/config.md.
 * Unknown keys, comments and type mismatches are rejected with ConfigError.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "versa/energy.hpp"
#include "versa/engine.hpp"
#include "versa/kernels.hpp"
#include "versa/modes.hpp"
#include "versa/rxb.hpp"
#include "versa/topology.hpp"

namespace versa::cli {

struct OutputPaths {
  std::string stats;    // run: StatRecord JSON
  std::string csv;      // sweep: table
  std::string summary;  // sweep: JSON summary

  friend bool operator==(const OutputPaths&, const OutputPaths&) = default;
};

struct SweepSpec {
  std::vector<std::uint32_t> sizes;
  std::vector<Preset> plans;  // empty: the kernel's comparison pair
  std::vector<double> vdds{1.0};
  int jobs = 1;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct RunConfig {
  ChipGeometry geometry;
  TimingParams timing;
  std::optional<Preset> plan;  // empty: the kernel's first plan
  KernelSpec kernel;           // kernel.seed is taken from `seed`
  EnergyCoefficients energy;
  std::vector<DvfsPoint> dvfs_table = default_dvfs_table();
  double vdd = 1.0;
  Cycle cycle_limit = 50'000'000;
  std::uint64_t seed = 1;
  bool strict_dirty = true;
  bool spin_backoff = false;
  OutputPaths output;
  SweepSpec sweep;

  Preset effective_plan() const;
  KernelSpec kernel_spec() const;
  SimOptions sim_options() const;
  /// Throws ConfigError naming the first violated invariant.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses and validates. Throws ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Every field, defaults included.
nlohmann::json to_json(const RunConfig& c);
std::string serialize(const RunConfig& c);

}  // namespace versa::cli
