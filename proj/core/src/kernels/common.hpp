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

// Shared plumbing for the kernel generators. Not installed.

#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "versa/kernels.hpp"
#include "versa/program.hpp"
#include "versa/sync.hpp"
#include "versa/topology.hpp"

namespace versa::kernels {

/// T-SPM word workers bump when they finish; the manager waits on it.
inline constexpr std::uint32_t kDoneWord = 0;
/// G-SPM word managers bump after publishing a flushed region.
inline constexpr std::uint32_t kFlushedWord = 0;

inline Addr gaddr(std::uint64_t word) { return AddressMap::kGlobalBase + static_cast<Addr>(word * 4); }
inline Addr raddr(std::uint64_t word) { return AddressMap::kRocmBase + static_cast<Addr>(word * 4); }

inline Word fbits(float f) { return std::bit_cast<Word>(f); }
inline float bitsf(Word w) { return std::bit_cast<float>(w); }

inline std::uint64_t round_up(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b * b; }
inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

struct Range {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint64_t size() const { return hi > lo ? hi - lo : 0; }
  bool empty() const { return hi <= lo; }
};

/// Even split of [0, n) into `parts`; the first n % parts parts get one more.
Range split(std::uint64_t n, int parts, int i);
/// Blocked split with blocks rounded up to `align`; trailing parts may be empty.
Range aligned_split(std::uint64_t n, int parts, int i, std::uint64_t align);

/// Worker ordinal in mesh order (row-major over the chip-wide mesh).
int mesh_ordinal(const Chip& chip, const CoreId& worker);

Task<void> signal_done();

/// Line flushes covering global words [lo, hi) for a tile in `rxb` mode.
/// In private mode the lines are looked up in `private_slice`.
std::vector<op::FlushLine> flush_lines(const ChipGeometry& g, RxbKind rxb, Range words, int private_slice);

/// The tile manager: applies the plan, then (if `wait_for` > 0) waits until
/// that many workers have signalled and issues the flushes.
Program manager_program(TileMode mode, int wait_for, std::vector<op::FlushLine> flushes);

/// Appends a memory image segment.
void put(Workload& wl, std::uint64_t word, std::vector<Word> data);
std::vector<Word> to_words(const std::vector<float>& v);
std::vector<Word> to_words(const std::vector<std::int32_t>& v);

/// Compares `n` words starting at `word` with `expected`, `stride` apart per
/// row of `row_len` words.
bool compare_rows(const NextLevelMemory& mem, std::uint64_t word, std::uint64_t stride,
                  const std::vector<Word>& expected, std::uint64_t row_len, std::string& why);

// Per-kernel generators.
Workload gemm(const KernelSpec& spec, Preset plan, const Chip& chip);
Workload stencil(const KernelSpec& spec, Preset plan, const Chip& chip);
Workload spmv(const KernelSpec& spec, Preset plan, const Chip& chip);
Workload kmp(const KernelSpec& spec, Preset plan, const Chip& chip);
Workload mergesort(const KernelSpec& spec, Preset plan, const Chip& chip);

}  // namespace versa::kernels
