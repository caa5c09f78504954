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

#include "versa/cli/commands.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>

#include "versa/errors.hpp"
#include "versa/kernels.hpp"

namespace versa::cli {

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot write '" + path + "'");
  f << text;
  if (!f) throw Error(ErrorCode::ConfigError, "write to '" + path + "' failed");
}

void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty())
    fallback << text;
  else
    write_file(path, text);
}

int exit_code_for(const std::exception& e) {
  if (const auto* v = dynamic_cast<const Error*>(&e); v && v->code() == ErrorCode::ConfigError) return kExitConfig;
  return kExitFailed;
}

}  // namespace

StatRecord simulate(const RunConfig& config) {
  const DvfsPoint dp = dvfs_point(config.dvfs_table, config.vdd);
  KernelRun run = run_kernel(config.kernel_spec(), config.effective_plan(), config.geometry, config.sim_options(), dp);
  StatRecord st = std::move(run.stats);
  st.tool_version = tool_version();
  st.timestamp = utc_timestamp();
  st.config = to_json(config);
  return st;
}

std::vector<SweepRow> sweep(const RunConfig& config, int jobs) {
  const KernelSpec base = config.kernel_spec();
  std::vector<Preset> plans = config.sweep.plans;
  if (plans.empty()) {
    const auto [a, b] = kernel_plans(base.kernel);
    plans = {a, b};
  }
  std::vector<std::uint32_t> sizes = config.sweep.sizes;
  if (sizes.empty()) sizes.push_back(base.size);
  const auto points = sweep_points(base, plans, sizes, config.sweep.vdds);
  return run_sweep(points, config.geometry, config.sim_options(), config.dvfs_table,
                   jobs < 0 ? config.sweep.jobs : jobs);
}

nlohmann::json error_json(const std::exception& e) {
  std::string code = "Error";
  if (const auto* v = dynamic_cast<const Error*>(&e)) code = std::string(v->code_name());
  return nlohmann::json{{"error", {{"code", code}, {"message", e.what()}}}};
}

std::string summary_path_for(const std::string& csv_path) {
  if (csv_path.empty()) return {};
  std::string base = csv_path;
  if (base.size() > 4 && base.compare(base.size() - 4, 4, ".csv") == 0) base.resize(base.size() - 4);
  return base + ".summary.json";
}

int cmd_run(const RunConfig& config, const std::string& out_path, std::ostream& out, std::ostream& err) {
  try {
    const StatRecord st = simulate(config);
    emit(out_path.empty() ? config.output.stats : out_path, to_json(st).dump(2) + "\n", out);
    return kExitOk;
  } catch (const std::exception& e) {
    err << error_json(e).dump() << "\n";
    return exit_code_for(e);
  }
}

int cmd_sweep(const RunConfig& config, const std::string& out_path, int jobs, std::ostream& out, std::ostream& err) {
  try {
    const auto rows = sweep(config, jobs);
    const std::string csv_path = out_path.empty() ? config.output.csv : out_path;
    emit(csv_path, to_csv(rows), out);
    const nlohmann::json summary = sweep_summary(rows);
    std::string summary_path = config.output.summary;
    if (summary_path.empty()) summary_path = summary_path_for(csv_path);
    emit(summary_path, summary.dump(2) + "\n", err);
    for (const auto& r : rows)
      if (!r.error.empty()) return kExitFailed;
    return kExitOk;
  } catch (const std::exception& e) {
    err << error_json(e).dump() << "\n";
    return exit_code_for(e);
  }
}

int cmd_validate(const AcceptanceOptions& opts, const std::vector<int>& ids, std::ostream& out) {
  int failed = 0;
  std::vector<int> todo = ids;
  if (todo.empty())
    for (int i = 1; i <= kCriteriaCount; ++i) todo.push_back(i);
  for (int id : todo) {
    const CheckResult r = run_criterion(id, opts);
    out << format_check(r) << "\n" << std::flush;
    if (!r.passed) ++failed;
  }
  out << (failed ? std::to_string(failed) + " of " + std::to_string(todo.size()) + " checks failed"
                 : "all " + std::to_string(todo.size()) + " checks passed")
      << "\n";
  return failed ? kExitFailed : kExitOk;
}

int cmd_presets(std::ostream& out) {
  const ChipGeometry g;
  nlohmann::json presets = nlohmann::json::array();
  for (Preset p : all_presets()) {
    const TileMode m = make_plan(p, g);
    nlohmann::json slices = nlohmann::json::array();
    for (const auto& s : m.slices) slices.push_back(slice_kind_name(s.kind));
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& q : m.rxb.pairs)
      pairs.push_back({{"producer", q.producer}, {"consumer", q.consumer}, {"slice", q.slice}});
    presets.push_back({{"name", preset_name(p)},
                       {"rxb", rxb_kind_name(m.rxb.kind)},
                       {"slices", std::move(slices)},
                       {"queue_pairs", std::move(pairs)},
                       {"r2r", m.r2r_enabled}});
  }
  nlohmann::json kernels = nlohmann::json::array();
  for (KernelName k : all_kernels()) {
    nlohmann::json plans = nlohmann::json::array();
    for (Preset p : supported_plans(k)) plans.push_back(preset_name(p));
    const auto [a, b] = kernel_plans(k);
    kernels.push_back({{"kernel", kernel_name(k)},
                       {"pair", {preset_name(a), preset_name(b)}},
                       {"supported", std::move(plans)}});
  }
  out << nlohmann::json{{"presets", std::move(presets)}, {"kernels", std::move(kernels)}}.dump(2) << "\n";
  return kExitOk;
}

}  // namespace versa::cli
