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
 * @file commands.hpp
 * @brief Subcommands of the `versa` executable, usable without it.
 *
 * Exit codes: 0 success, 1 a simulation, sweep point or check failed,
 * 2 the configuration or command line was rejected. Failures print a JSON
 * object {"error": {"code": ..., "message": ...}} on the error stream.
 */

#pragma once

#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "versa/cli/acceptance.hpp"
#include "versa/cli/config.hpp"
#include "versa/stats.hpp"
#include "versa/sweep.hpp"

namespace versa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfig = 2;

/// One kernel run; the record carries the config echo and a timestamp.
StatRecord simulate(const RunConfig& config);
/// The sweep described by `config.sweep`; jobs < 0 takes `config.sweep.jobs`.
std::vector<SweepRow> sweep(const RunConfig& config, int jobs = -1);

nlohmann::json error_json(const std::exception& e);

/// Writes the StatRecord to `out_path` (or `out` if the path is empty).
int cmd_run(const RunConfig& config, const std::string& out_path, std::ostream& out, std::ostream& err);
/// Writes the CSV to `out_path` (or `out`) and the JSON summary to
/// `config.output.summary`, else next to the CSV, else to `err`.
int cmd_sweep(const RunConfig& config, const std::string& out_path, int jobs, std::ostream& out, std::ostream& err);
int cmd_validate(const AcceptanceOptions& opts, const std::vector<int>& ids, std::ostream& out);
int cmd_presets(std::ostream& out);

/// Summary path derived from a CSV path: "x.csv" -> "x.summary.json".
std::string summary_path_for(const std::string& csv_path);

}  // namespace versa::cli
