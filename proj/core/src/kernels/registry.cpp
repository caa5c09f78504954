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

#include <algorithm>
#include <array>

#include "common.hpp"
#include "versa/errors.hpp"

namespace versa {

namespace {

constexpr std::array<std::pair<KernelName, std::string_view>, 5> kNames{{
    {KernelName::Gemm, "gemm"},
    {KernelName::Stencil2d, "stencil2d"},
    {KernelName::Spmv, "spmv"},
    {KernelName::Kmp, "kmp"},
    {KernelName::Mergesort, "mergesort"},
}};

void invalid(const KernelSpec& spec, const std::string& why) {
  throw Error(ErrorCode::InvalidKernel, std::string(kernel_name(spec.kernel)) + ": " + why);
}

}  // namespace

std::string_view kernel_name(KernelName k) {
  for (const auto& [v, s] : kNames)
    if (v == k) return s;
  return "?";
}

std::optional<KernelName> kernel_from_name(std::string_view name) {
  for (const auto& [v, s] : kNames)
    if (s == name) return v;
  return std::nullopt;
}

const std::vector<KernelName>& all_kernels() {
  static const std::vector<KernelName> all{KernelName::Gemm, KernelName::Stencil2d, KernelName::Spmv,
                                           KernelName::Kmp, KernelName::Mergesort};
  return all;
}

const std::vector<Preset>& supported_plans(KernelName k) {
  static const std::vector<Preset> gemm{Preset::PrivateSpmR2r, Preset::SharedCache, Preset::PrivateSpm};
  static const std::vector<Preset> stencil{Preset::PrivateCache, Preset::PrivateSpmR2r};
  static const std::vector<Preset> spmv{Preset::SharedCache, Preset::PrivateCache};
  static const std::vector<Preset> kmp{Preset::SharedCache, Preset::PrivateSpm};
  static const std::vector<Preset> sort{Preset::SharedSpm, Preset::SharedCache};
  switch (k) {
    case KernelName::Gemm: return gemm;
    case KernelName::Stencil2d: return stencil;
    case KernelName::Spmv: return spmv;
    case KernelName::Kmp: return kmp;
    case KernelName::Mergesort: return sort;
  }
  return gemm;
}

std::pair<Preset, Preset> kernel_plans(KernelName k) {
  const auto& p = supported_plans(k);
  return {p[0], p[1]};
}

bool plan_supported(KernelName k, Preset p) {
  const auto& v = supported_plans(k);
  return std::find(v.begin(), v.end(), p) != v.end();
}

std::uint64_t footprint_bytes(const KernelSpec& spec) {
  const std::uint64_t n = spec.size;
  switch (spec.kernel) {
    case KernelName::Gemm: return 3 * n * n * 4;
    case KernelName::Stencil2d: return (n * n + (n >= 2 ? (n - 2) * (n - 2) : 0)) * 4;
    case KernelName::Spmv: {
      const std::uint64_t nnz = n * std::min<std::uint64_t>(spec.nnz_per_row, n);
      return ((n + 1) + 2 * nnz + 2 * n) * 4;
    }
    case KernelName::Kmp: return (2 * n + 2 * static_cast<std::uint64_t>(spec.pattern_len)) * 4;
    case KernelName::Mergesort: return 2 * n * 4;
  }
  return 0;
}

void validate_kernel(const KernelSpec& spec, const ChipGeometry& g) {
  switch (spec.kernel) {
    case KernelName::Gemm:
      if (spec.size < 1) invalid(spec, "size must be at least 1");
      break;
    case KernelName::Stencil2d:
      if (spec.size < 3) invalid(spec, "grid side must be at least 3");
      break;
    case KernelName::Spmv:
      if (spec.size < 1) invalid(spec, "size must be at least 1");
      if (spec.nnz_per_row < 1) invalid(spec, "nnz_per_row must be at least 1");
      break;
    case KernelName::Kmp:
      if (spec.pattern_len < 1 || spec.pattern_len > 16) invalid(spec, "pattern_len must be in [1, 16]");
      if (spec.alphabet < 1) invalid(spec, "alphabet must be at least 1");
      if (spec.size < spec.pattern_len) invalid(spec, "text shorter than the pattern");
      break;
    case KernelName::Mergesort:
      if (spec.size < 1) invalid(spec, "size must be at least 1");
      break;
  }
  if (spec.repeat < 1) invalid(spec, "repeat must be at least 1");
  if (spec.repeat > 1 && spec.kernel != KernelName::Stencil2d) invalid(spec, "repeat is only supported by stencil2d");
  const std::uint64_t fp = footprint_bytes(spec);
  if (fp > spec.max_footprint)
    invalid(spec, "footprint of " + std::to_string(fp) + " bytes exceeds the limit of " +
                      std::to_string(spec.max_footprint));
  if (2 * fp > g.global_capacity) invalid(spec, "footprint does not fit next-level memory");
}

Workload generate(const KernelSpec& spec, Preset plan, const Chip& chip) {
  if (!plan_supported(spec.kernel, plan))
    throw Error(ErrorCode::PlanUnsupported, std::string(kernel_name(spec.kernel)) + " has no '" +
                                                std::string(preset_name(plan)) + "' plan");
  validate_kernel(spec, chip.geometry());
  switch (spec.kernel) {
    case KernelName::Gemm: return kernels::gemm(spec, plan, chip);
    case KernelName::Stencil2d: return kernels::stencil(spec, plan, chip);
    case KernelName::Spmv: return kernels::spmv(spec, plan, chip);
    case KernelName::Kmp: return kernels::kmp(spec, plan, chip);
    case KernelName::Mergesort: return kernels::mergesort(spec, plan, chip);
  }
  throw Error(ErrorCode::PlanUnsupported, "unknown kernel");
}

KernelRun run_kernel(const KernelSpec& spec, Preset plan, const ChipGeometry& geometry, const SimOptions& opts,
                     const DvfsPoint& dvfs) {
  const Chip chip = build_geometry(geometry);
  Workload wl = generate(spec, plan, chip);
  Simulator sim(chip, opts);
  for (const auto& seg : wl.image) sim.memory().write_range(seg.word, seg.data);
  for (auto& [id, prog] : wl.programs) sim.load(id, std::move(prog));

  KernelRun out;
  out.stats = sim.run();
  out.stats.kernel = std::string(kernel_name(spec.kernel));
  out.stats.plan = std::string(preset_name(plan));
  out.output_match = wl.check(sim.memory(), out.mismatch);
  out.flops_match = out.stats.flops == wl.expected_flops;
  if (!out.flops_match && out.mismatch.empty())
    out.mismatch = "flop count " + std::to_string(out.stats.flops) + " != expected " +
                   std::to_string(wl.expected_flops);
  out.stats.output_match = out.output_match;
  out.stats.apply_dvfs(dvfs);
  return out;
}

}  // namespace versa
