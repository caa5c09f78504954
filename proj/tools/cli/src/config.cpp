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

#include "versa/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "versa/errors.hpp"

namespace versa::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ConfigError, (path.empty() ? std::string("config") : path) + ": " + what);
}

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
}

void check_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  require_object(j, path);
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      bad(join(path, it.key()), "unknown key");
}

template <class T>
T as(const json& v, const std::string& path) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) bad(path, "expected true or false");
    return v.get<bool>();
  } else if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) bad(path, "expected a number");
    return v.get<double>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) bad(path, "expected a string");
    return v.get<std::string>();
  } else if constexpr (std::is_unsigned_v<T>) {
    if (!v.is_number_unsigned()) bad(path, "expected a non-negative integer");
    const auto x = v.get<std::uint64_t>();
    if (x > std::numeric_limits<T>::max()) bad(path, "value out of range");
    return static_cast<T>(x);
  } else {
    if (!v.is_number_integer()) bad(path, "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<T>::min() || x > std::numeric_limits<T>::max()) bad(path, "value out of range");
    return static_cast<T>(x);
  }
}

template <class T>
void read(const json& j, const std::string& path, std::string_view key, T& out) {
  auto it = j.find(std::string(key));
  if (it != j.end()) out = as<T>(*it, join(path, key));
}

Preset plan_from(const json& v, const std::string& path) {
  const auto name = as<std::string>(v, path);
  auto p = preset_from_name(name);
  if (!p) bad(path, "unknown plan '" + name + "'");
  return *p;
}

GridDims grid_from(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) bad(path, "expected [rows, cols]");
  return {as<int>(v[0], path + "[0]"), as<int>(v[1], path + "[1]")};
}

ChipGeometry geometry_from(const json& j, const std::string& path) {
  check_keys(j, path,
             {"n_tiles", "workers_per_tile", "tile_grid", "worker_grid", "slices_per_tile", "slice_capacity",
              "word_size", "tspm_capacity", "gspm_capacity", "next_level_latency", "next_level_width",
              "global_capacity", "interleave_granularity"});
  ChipGeometry g;
  read(j, path, "n_tiles", g.n_tiles);
  read(j, path, "workers_per_tile", g.workers_per_tile);
  if (j.contains("tile_grid")) g.tile_grid = grid_from(j["tile_grid"], join(path, "tile_grid"));
  if (j.contains("worker_grid")) g.worker_grid = grid_from(j["worker_grid"], join(path, "worker_grid"));
  read(j, path, "slices_per_tile", g.slices_per_tile);
  read(j, path, "slice_capacity", g.slice_capacity);
  read(j, path, "word_size", g.word_size);
  read(j, path, "tspm_capacity", g.tspm_capacity);
  read(j, path, "gspm_capacity", g.gspm_capacity);
  read(j, path, "next_level_latency", g.next_level_latency);
  read(j, path, "next_level_width", g.next_level_width);
  read(j, path, "global_capacity", g.global_capacity);
  read(j, path, "interleave_granularity", g.interleave_granularity);
  return g;
}

TimingParams timing_from(const json& j, const std::string& path) {
  check_keys(j, path, {"shared_spm", "private_spm", "tag_check", "fifo", "tspm", "gspm"});
  TimingParams t;
  read(j, path, "shared_spm", t.shared_spm);
  read(j, path, "private_spm", t.private_spm);
  read(j, path, "tag_check", t.tag_check);
  read(j, path, "fifo", t.fifo);
  read(j, path, "tspm", t.tspm);
  read(j, path, "gspm", t.gspm);
  return t;
}

KernelSpec kernel_from(const json& j, const std::string& path) {
  check_keys(j, path, {"name", "size", "nnz_per_row", "pattern_len", "alphabet", "repeat", "max_footprint"});
  KernelSpec k;
  if (j.contains("name")) {
    const auto name = as<std::string>(j["name"], join(path, "name"));
    auto kn = kernel_from_name(name);
    if (!kn) bad(join(path, "name"), "unknown kernel '" + name + "'");
    k.kernel = *kn;
  }
  read(j, path, "size", k.size);
  read(j, path, "nnz_per_row", k.nnz_per_row);
  read(j, path, "pattern_len", k.pattern_len);
  read(j, path, "alphabet", k.alphabet);
  read(j, path, "repeat", k.repeat);
  read(j, path, "max_footprint", k.max_footprint);
  return k;
}

EnergyCoefficients energy_from(const json& j, const std::string& path) {
  require_object(j, path);
  EnergyCoefficients e;
  for (auto it = j.begin(); it != j.end(); ++it) {
    EnergyClass c;
    try {
      c = energy_class_from_name(it.key());
    } catch (const Error&) {
      bad(join(path, it.key()), "unknown key");
    }
    e.of(c) = as<double>(it.value(), join(path, it.key()));
  }
  return e;
}

DvfsPoint dvfs_point_from(const json& j, const std::string& path) {
  check_keys(j, path, {"vdd", "freq_hz", "energy_per_cycle_pj", "power_full_w", "activity", "gflops"});
  for (auto key : {"vdd", "freq_hz", "energy_per_cycle_pj"})
    if (!j.contains(key)) bad(join(path, key), "required");
  DvfsPoint p;
  read(j, path, "vdd", p.vdd);
  read(j, path, "freq_hz", p.freq_hz);
  read(j, path, "energy_per_cycle_pj", p.energy_per_cycle_pj);
  p.power_full_w = p.energy_per_cycle_pj * 1e-12 * p.freq_hz;
  p.activity = 1.0;
  p.gflops = 0.0;
  read(j, path, "power_full_w", p.power_full_w);
  read(j, path, "activity", p.activity);
  read(j, path, "gflops", p.gflops);
  return p;
}

void dvfs_from(const json& j, const std::string& path, RunConfig& c) {
  check_keys(j, path, {"vdd", "table"});
  read(j, path, "vdd", c.vdd);
  if (j.contains("table")) {
    const auto& t = j["table"];
    const auto tpath = join(path, "table");
    if (!t.is_array() || t.empty()) bad(tpath, "expected a non-empty array");
    c.dvfs_table.clear();
    for (std::size_t i = 0; i < t.size(); ++i)
      c.dvfs_table.push_back(dvfs_point_from(t[i], tpath + "[" + std::to_string(i) + "]"));
  }
}

OutputPaths output_from(const json& j, const std::string& path) {
  check_keys(j, path, {"stats", "csv", "summary"});
  OutputPaths o;
  read(j, path, "stats", o.stats);
  read(j, path, "csv", o.csv);
  read(j, path, "summary", o.summary);
  return o;
}

SweepSpec sweep_from(const json& j, const std::string& path) {
  check_keys(j, path, {"sizes", "plans", "vdds", "jobs"});
  SweepSpec s;
  auto array = [&](std::string_view key) -> const json* {
    auto it = j.find(std::string(key));
    if (it == j.end()) return nullptr;
    if (!it->is_array()) bad(join(path, key), "expected an array");
    return &*it;
  };
  if (const json* a = array("sizes")) {
    s.sizes.clear();
    for (std::size_t i = 0; i < a->size(); ++i)
      s.sizes.push_back(as<std::uint32_t>((*a)[i], join(path, "sizes") + "[" + std::to_string(i) + "]"));
  }
  if (const json* a = array("plans")) {
    for (std::size_t i = 0; i < a->size(); ++i)
      s.plans.push_back(plan_from((*a)[i], join(path, "plans") + "[" + std::to_string(i) + "]"));
  }
  if (const json* a = array("vdds")) {
    s.vdds.clear();
    for (std::size_t i = 0; i < a->size(); ++i)
      s.vdds.push_back(as<double>((*a)[i], join(path, "vdds") + "[" + std::to_string(i) + "]"));
  }
  read(j, path, "jobs", s.jobs);
  return s;
}

json geometry_json(const ChipGeometry& g) {
  return json{{"n_tiles", g.n_tiles},
              {"workers_per_tile", g.workers_per_tile},
              {"tile_grid", {g.tile_grid.rows, g.tile_grid.cols}},
              {"worker_grid", {g.worker_grid.rows, g.worker_grid.cols}},
              {"slices_per_tile", g.slices_per_tile},
              {"slice_capacity", g.slice_capacity},
              {"word_size", g.word_size},
              {"tspm_capacity", g.tspm_capacity},
              {"gspm_capacity", g.gspm_capacity},
              {"next_level_latency", g.next_level_latency},
              {"next_level_width", g.next_level_width},
              {"global_capacity", g.global_capacity},
              {"interleave_granularity", g.interleave_granularity}};
}

}  // namespace

Preset RunConfig::effective_plan() const { return plan ? *plan : kernel_plans(kernel.kernel).first; }

KernelSpec RunConfig::kernel_spec() const {
  KernelSpec k = kernel;
  k.seed = seed;
  return k;
}

SimOptions RunConfig::sim_options() const {
  SimOptions o;
  o.cycle_limit = cycle_limit;
  o.strict_dirty = strict_dirty;
  o.timing = timing;
  o.energy = energy;
  o.spin_backoff = spin_backoff;
  return o;
}

void RunConfig::validate() const {
  try {
    geometry.validate();
  } catch (const Error& e) {
    bad("geometry", e.what());
  }
  for (auto [v, name] : {std::pair{timing.shared_spm, "shared_spm"}, std::pair{timing.private_spm, "private_spm"},
                         std::pair{timing.fifo, "fifo"}, std::pair{timing.tspm, "tspm"},
                         std::pair{timing.gspm, "gspm"}})
    if (v < 1) bad(join("timing", name), "must be >= 1");
  if (timing.tag_check < 0) bad("timing.tag_check", "must be >= 0");
  try {
    energy.validate();
    validate_dvfs_table(dvfs_table);
    (void)dvfs_point(dvfs_table, vdd);
    for (double v : sweep.vdds) (void)dvfs_point(dvfs_table, v);
  } catch (const Error& e) {
    bad("", std::string(error_code_name(e.code())) + ": " + e.what());
  }
  if (cycle_limit < 1) bad("cycle_limit", "must be >= 1");
  if (sweep.jobs < 0) bad("sweep.jobs", "must be >= 0");
  if (sweep.vdds.empty()) bad("sweep.vdds", "must not be empty");
}

RunConfig config_from_json(const json& j) {
  check_keys(j, "",
             {"geometry", "timing", "plan", "kernel", "energy", "dvfs", "cycle_limit", "seed", "strict_dirty",
              "spin_backoff", "output", "sweep"});
  RunConfig c;
  if (j.contains("geometry")) c.geometry = geometry_from(j["geometry"], "geometry");
  if (j.contains("timing")) c.timing = timing_from(j["timing"], "timing");
  if (j.contains("plan") && !j["plan"].is_null()) c.plan = plan_from(j["plan"], "plan");
  if (j.contains("kernel")) c.kernel = kernel_from(j["kernel"], "kernel");
  if (j.contains("energy")) c.energy = energy_from(j["energy"], "energy");
  if (j.contains("dvfs")) dvfs_from(j["dvfs"], "dvfs", c);
  read(j, "", "cycle_limit", c.cycle_limit);
  read(j, "", "seed", c.seed);
  read(j, "", "strict_dirty", c.strict_dirty);
  read(j, "", "spin_backoff", c.spin_backoff);
  if (j.contains("output")) c.output = output_from(j["output"], "output");
  if (j.contains("sweep")) c.sweep = sweep_from(j["sweep"], "sweep");
  c.validate();
  return c;
}

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end(), nullptr, true, false);
  } catch (const json::parse_error& e) {
    bad("", std::string("not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(std::string_view(ss.str()));
}

json to_json(const RunConfig& c) {
  json energy;
  for (auto cls : all_energy_classes()) energy[std::string(energy_class_name(cls))] = c.energy.of(cls);
  json table = json::array();
  for (const auto& p : c.dvfs_table)
    table.push_back({{"vdd", p.vdd},
                     {"freq_hz", p.freq_hz},
                     {"energy_per_cycle_pj", p.energy_per_cycle_pj},
                     {"power_full_w", p.power_full_w},
                     {"activity", p.activity},
                     {"gflops", p.gflops}});
  json plans = json::array();
  for (auto p : c.sweep.plans) plans.push_back(preset_name(p));
  const auto& k = c.kernel;
  return json{
      {"geometry", geometry_json(c.geometry)},
      {"timing",
       {{"shared_spm", c.timing.shared_spm},
        {"private_spm", c.timing.private_spm},
        {"tag_check", c.timing.tag_check},
        {"fifo", c.timing.fifo},
        {"tspm", c.timing.tspm},
        {"gspm", c.timing.gspm}}},
      {"plan", c.plan ? json(preset_name(*c.plan)) : json(nullptr)},
      {"kernel",
       {{"name", kernel_name(k.kernel)},
        {"size", k.size},
        {"nnz_per_row", k.nnz_per_row},
        {"pattern_len", k.pattern_len},
        {"alphabet", k.alphabet},
        {"repeat", k.repeat},
        {"max_footprint", k.max_footprint}}},
      {"energy", std::move(energy)},
      {"dvfs", {{"vdd", c.vdd}, {"table", std::move(table)}}},
      {"cycle_limit", c.cycle_limit},
      {"seed", c.seed},
      {"strict_dirty", c.strict_dirty},
      {"spin_backoff", c.spin_backoff},
      {"output", {{"stats", c.output.stats}, {"csv", c.output.csv}, {"summary", c.output.summary}}},
      {"sweep", {{"sizes", c.sweep.sizes}, {"plans", std::move(plans)}, {"vdds", c.sweep.vdds}, {"jobs", c.sweep.jobs}}},
  };
}

std::string serialize(const RunConfig& c) { return to_json(c).dump(2) + "\n"; }

}  // namespace versa::cli
