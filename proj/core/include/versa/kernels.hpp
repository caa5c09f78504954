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
 * @file kernels.hpp
 * @brief Program generators and reference implementations for the kernel suite.
 *
 * | kernel    | `size` means        | supported plans                                |
 * |-----------|---------------------|------------------------------------------------|
 * | gemm      | n (n x n x n, f32)  | private_spm_r2r, shared_cache, private_spm     |
 * | stencil2d | grid side (f32)     | private_cache, private_spm_r2r                 |
 * | spmv      | rows (CSR, f32)     | shared_cache, private_cache                    |
 * | kmp       | text length (i32)   | shared_cache, private_spm                      |
 * | mergesort | elements (i32)      | shared_spm, shared_cache                       |
 *
 * The first two plans of each kernel form its comparison pair. Any other
 * kernel/plan combination raises PlanUnsupported.
 *
 * Integer kernels report comparisons in the flop counters.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "versa/energy.hpp"
#include "versa/engine.hpp"
#include "versa/modes.hpp"
#include "versa/program.hpp"
#include "versa/stats.hpp"
#include "versa/topology.hpp"

namespace versa {

enum class KernelName : std::uint8_t { Gemm, Stencil2d, Spmv, Kmp, Mergesort };

std::string_view kernel_name(KernelName k);
std::optional<KernelName> kernel_from_name(std::string_view name);
const std::vector<KernelName>& all_kernels();

struct KernelSpec {
  KernelName kernel = KernelName::Gemm;
  std::uint32_t size = 16;
  std::uint64_t seed = 1;
  std::uint32_t nnz_per_row = 8;  // spmv
  std::uint32_t pattern_len = 4;  // kmp, at most 16
  std::uint32_t alphabet = 2;     // kmp
  std::uint32_t repeat = 1;       // stencil2d: back-to-back passes over the grid
  std::uint64_t max_footprint = 512 * 1024;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// Bytes of input plus output data.
std::uint64_t footprint_bytes(const KernelSpec& spec);
/// Throws InvalidKernel for bad sizes or an oversized footprint.
void validate_kernel(const KernelSpec& spec, const ChipGeometry& g);

const std::vector<Preset>& supported_plans(KernelName k);
/// The two plans compared for this kernel.
std::pair<Preset, Preset> kernel_plans(KernelName k);
bool plan_supported(KernelName k, Preset p);

struct MemoryImage {
  std::uint64_t word = 0;  // next-level word index
  std::vector<Word> data;
};

struct Workload {
  std::vector<std::pair<CoreId, Program>> programs;
  std::vector<MemoryImage> image;
  /// Compares next-level memory against the reference; fills `why` on mismatch.
  std::function<bool(const NextLevelMemory&, std::string& why)> check;
  std::uint64_t expected_flops = 0;
};

/// Throws PlanUnsupported or InvalidKernel.
Workload generate(const KernelSpec& spec, Preset plan, const Chip& chip);

struct KernelRun {
  StatRecord stats;
  bool output_match = false;
  bool flops_match = false;
  std::string mismatch;
};

KernelRun run_kernel(const KernelSpec& spec, Preset plan, const ChipGeometry& geometry, const SimOptions& opts,
                     const DvfsPoint& dvfs);

// ---------------------------------------------------------------------------
// Input generation and sequential references.

namespace ref {

/// Deterministic value in [-1, 1) with 24 random mantissa bits.
float unit_float(std::uint64_t& state);

struct GemmData {
  std::uint32_t n = 0;
  std::vector<float> a;  // row-major n x n
  std::vector<float> b;  // row-major n x n
};
GemmData gemm_inputs(const KernelSpec& spec);
/// C = A x B, each entry accumulated from 0 over k in ascending order.
std::vector<float> gemm(const std::vector<float>& a, const std::vector<float>& b, std::uint32_t m,
                        std::uint32_t k, std::uint32_t n);

struct StencilData {
  std::uint32_t n = 0;
  std::vector<float> grid;     // n x n
  std::vector<float> weights;  // 3 x 3
};
StencilData stencil_inputs(const KernelSpec& spec);
/// Valid 3x3 convolution, output (n-2) x (n-2), taps summed row-major from 0.
std::vector<float> stencil(const std::vector<float>& grid, std::uint32_t n, const std::vector<float>& w);

struct Csr {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::uint32_t> row_ptr;
  std::vector<std::uint32_t> col;
  std::vector<float> val;
};
struct SpmvData {
  Csr a;
  std::vector<float> x;
};
SpmvData spmv_inputs(const KernelSpec& spec);
/// y = A x, each row accumulated from 0 in stored order.
std::vector<float> spmv(const Csr& a, const std::vector<float>& x);

struct KmpData {
  std::vector<std::int32_t> text;
  std::vector<std::int32_t> pattern;
};
KmpData kmp_inputs(const KernelSpec& spec);
std::vector<std::int32_t> kmp_failure(const std::vector<std::int32_t>& pattern);
/// Start positions of every (possibly overlapping) occurrence.
std::vector<std::uint32_t> kmp(const std::vector<std::int32_t>& text, const std::vector<std::int32_t>& pattern);

std::vector<std::int32_t> mergesort_inputs(const KernelSpec& spec);
/// Top-down stable merge sort.
std::vector<std::int32_t> mergesort(std::vector<std::int32_t> v);

}  // namespace ref

}  // namespace versa
