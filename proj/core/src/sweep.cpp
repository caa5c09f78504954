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

#include "versa/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "versa/errors.hpp"

namespace versa {

namespace {

// Reported upper bound on best-of-two over worst-of-two efficiency.
constexpr double kReportedModeSpread = 3.17;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

SweepRow run_point(std::size_t index, const SweepPoint& p, const ChipGeometry& geometry, const SimOptions& opts,
                   const std::vector<DvfsPoint>& table) {
  SweepRow row;
  row.point = index;
  row.kernel = p.spec.kernel;
  row.plan = p.plan;
  row.size = p.spec.size;
  row.footprint = footprint_bytes(p.spec);
  row.vdd = p.vdd;
  try {
    const DvfsPoint dp = dvfs_point(table, p.vdd);
    const KernelRun run = run_kernel(p.spec, p.plan, geometry, opts, dp);
    row.cycles = run.stats.cycles;
    row.flops = run.stats.flops;
    row.energy_pj = run.stats.energy.total;
    row.output_match = run.output_match && run.flops_match;
    if (run.stats.efficiency) {
      row.gflops = run.stats.efficiency->gflops;
      row.gflops_per_watt = run.stats.efficiency->event_gflops_per_watt;
      row.envelope_gflops_per_watt = run.stats.efficiency->envelope_gflops_per_watt;
    }
    if (!row.output_match) row.error = "output mismatch: " + run.mismatch;
  } catch (const Error& e) {
    row.error = std::string(error_code_name(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepPoint> sweep_points(const KernelSpec& base, const std::vector<Preset>& plans,
                                     const std::vector<std::uint32_t>& sizes, const std::vector<double>& vdds) {
  std::vector<SweepPoint> out;
  for (auto size : sizes)
    for (double v : vdds)
      for (auto plan : plans) {
        SweepPoint p;
        p.spec = base;
        p.spec.size = size;
        p.plan = plan;
        p.vdd = v;
        out.push_back(p);
      }
  return out;
}

std::vector<SweepRow> run_sweep(const std::vector<SweepPoint>& points, const ChipGeometry& geometry,
                                const SimOptions& opts, const std::vector<DvfsPoint>& dvfs_table, int jobs) {
  std::vector<SweepRow> rows(points.size());
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(1, points.size())));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++)
      rows[i] = run_point(i, points[i], geometry, opts, dvfs_table);
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  mark_winners(rows);
  return rows;
}

void mark_winners(std::vector<SweepRow>& rows) {
  std::map<std::tuple<KernelName, std::uint32_t, double>, std::size_t> best;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& r = rows[i];
    r.winner = false;
    if (!r.error.empty()) continue;
    const auto key = std::make_tuple(r.kernel, r.size, r.vdd);
    auto it = best.find(key);
    if (it == best.end() || r.gflops_per_watt > rows[it->second].gflops_per_watt) best[key] = i;
  }
  // A group with a single plan has no winner.
  std::map<std::tuple<KernelName, std::uint32_t, double>, std::set<Preset>> plans;
  for (const auto& r : rows)
    if (r.error.empty()) plans[std::make_tuple(r.kernel, r.size, r.vdd)].insert(r.plan);
  for (const auto& [key, i] : best)
    if (plans[key].size() > 1) rows[i].winner = true;
}

std::optional<std::uint32_t> crossover_size(const std::vector<SweepRow>& rows, KernelName kernel, double vdd) {
  std::map<std::uint32_t, Preset> winners;
  for (const auto& r : rows)
    if (r.winner && r.kernel == kernel && r.vdd == vdd) winners[r.size] = r.plan;
  if (winners.empty()) return std::nullopt;
  const Preset first = winners.begin()->second;
  for (const auto& [size, plan] : winners)
    if (plan != first) return size;
  return std::nullopt;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "point,kernel,plan,size,footprint_bytes,vdd,cycles,flops,energy_pj,gflops,gflops_per_watt,"
        "envelope_gflops_per_watt,output_match,winner,error\n";
  for (const auto& r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    os << r.point << ',' << kernel_name(r.kernel) << ',' << preset_name(r.plan) << ',' << r.size << ','
       << r.footprint << ',' << num(r.vdd) << ',' << r.cycles << ',' << r.flops << ',' << num(r.energy_pj) << ','
       << num(r.gflops) << ',' << num(r.gflops_per_watt) << ',' << num(r.envelope_gflops_per_watt) << ','
       << (r.output_match ? 1 : 0) << ',' << (r.winner ? 1 : 0) << ',' << err << '\n';
  }
  return os.str();
}

nlohmann::json sweep_summary(const std::vector<SweepRow>& rows) {
  using nlohmann::json;
  std::set<std::pair<KernelName, double>> groups;
  std::size_t failed = 0;
  for (const auto& r : rows) {
    groups.insert({r.kernel, r.vdd});
    if (!r.error.empty()) ++failed;
  }
  json out = json::array();
  for (const auto& [kernel, vdd] : groups) {
    json g;
    g["kernel"] = kernel_name(kernel);
    g["vdd"] = vdd;
    json winners = json::object();
    std::map<std::uint32_t, std::pair<double, double>> spread;  // size -> (min, max)
    for (const auto& r : rows) {
      if (r.kernel != kernel || r.vdd != vdd || !r.error.empty()) continue;
      if (r.winner) winners[std::to_string(r.size)] = preset_name(r.plan);
      auto [it, fresh] = spread.try_emplace(r.size, r.gflops_per_watt, r.gflops_per_watt);
      if (!fresh) {
        it->second.first = std::min(it->second.first, r.gflops_per_watt);
        it->second.second = std::max(it->second.second, r.gflops_per_watt);
      }
    }
    double max_ratio = 0;
    for (const auto& [size, mm] : spread)
      if (mm.first > 0) max_ratio = std::max(max_ratio, mm.second / mm.first);
    g["winners"] = std::move(winners);
    const auto x = crossover_size(rows, kernel, vdd);
    g["crossover_size"] = x ? json(*x) : json(nullptr);
    g["max_mode_ratio"] = max_ratio;
    g["within_reported_mode_spread"] = max_ratio <= kReportedModeSpread;
    out.push_back(std::move(g));
  }
  return json{{"points", rows.size()}, {"failed", failed}, {"groups", std::move(out)}};
}

}  // namespace versa
