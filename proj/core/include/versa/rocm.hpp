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
 * @file rocm.hpp
 * @brief Reconfigurable L1 memory slices and the flat next-level memory.
 *
 * Each slice owns one SRAM array that every mode reuses verbatim:
 *
 *   spm    word-addressed scratchpad over the whole array
 *   cache  direct-mapped, write-back, write-allocate; line i lives in
 *          SRAM words [i*L, (i+1)*L), tags are side metadata
 *   fifo   ring over SRAM words [0, capacity) with head/fill registers
 *
 * A transition never touches SRAM contents. Entering cache mode invalidates
 * all tags; entering fifo mode resets the ring registers; leaving cache mode
 * with dirty lines raises DirtyDrop in strict mode.
 */

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "versa/modes.hpp"
#include "versa/topology.hpp"

namespace versa {

/// Flat word-addressed backing store, allocated lazily in pages.
class NextLevelMemory {
 public:
  explicit NextLevelMemory(std::uint64_t words);

  Word read(std::uint64_t word) const;
  void write(std::uint64_t word, Word v);
  std::vector<Word> read_range(std::uint64_t word, std::size_t n) const;
  void write_range(std::uint64_t word, std::span<const Word> data);

  std::uint64_t size_words() const { return size_; }

 private:
  static constexpr std::uint64_t kPageWords = 1024;
  void check(std::uint64_t word) const;

  std::uint64_t size_;
  mutable std::vector<std::unique_ptr<Word[]>> pages_;
};

/// How a slice's local word index maps back to next-level memory.
struct Projection {
  bool striped = false;  // shared mode: slice holds every S-th stripe
  int slice = 0;
  int slices = 1;
  int granularity = 1;

  std::uint64_t to_global(std::uint64_t local_word) const;
  friend bool operator==(const Projection&, const Projection&) = default;
};

struct SliceStats {
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t evictions = 0;
  std::uint64_t writebacks = 0;
  std::uint64_t conflicts = 0;  // arbitration losses at this port
  std::uint64_t grants = 0;
  std::uint64_t pushes = 0;
  std::uint64_t pops = 0;
  std::uint32_t fifo_max_fill = 0;
  std::uint64_t flushes = 0;
};

class Slice {
 public:
  explicit Slice(std::uint32_t words, SliceMode initial = SliceMode::spm());

  const SliceMode& mode() const { return mode_; }
  const Projection& projection() const { return proj_; }
  std::uint32_t words() const { return static_cast<std::uint32_t>(sram_.size()); }

  /// Applies a mode transition. `strict` turns dirty lines into DirtyDrop.
  /// Returns false when the target equals the current state (nothing to do).
  bool transition(const SliceMode& target, const Projection& proj, bool strict, const std::string& name);
  bool has_dirty() const;

  // Scratchpad. Throws OutOfRange.
  Word spm_read(std::uint64_t local_word);
  void spm_write(std::uint64_t local_word, Word v);

  // Cache.
  struct CacheOutcome {
    bool hit = false;
    bool dirty_eviction = false;
    Word value = 0;
  };
  CacheOutcome cache_access(bool write, Word value, std::uint64_t local_word, NextLevelMemory& mem);
  /// Writes back the line holding `local_word` if resident and dirty.
  /// Returns the number of words written back.
  int flush_line(std::uint64_t local_word, NextLevelMemory& mem);
  /// Writes back every dirty line; returns the number of lines written.
  int flush_all(NextLevelMemory& mem);
  int n_lines() const;
  /// Pure tag probe, no state change.
  bool probe(std::uint64_t local_word) const;

  // FIFO.
  std::uint32_t fifo_fill() const { return fill_; }
  std::uint32_t fifo_capacity() const { return capacity_; }
  bool fifo_full() const { return fill_ >= capacity_; }
  bool fifo_empty() const { return fill_ == 0; }
  Word fifo_front() const;
  Word fifo_pop();
  void fifo_push(Word v);

  std::span<const Word> sram() const { return sram_; }
  std::span<Word> sram_backdoor() { return sram_; }

  SliceStats stats;

 private:
  struct LineMeta {
    std::uint64_t tag = 0;
    bool valid = false;
    bool dirty = false;
  };
  void write_back(std::size_t index, NextLevelMemory& mem);

  std::vector<Word> sram_;
  SliceMode mode_;
  Projection proj_;
  std::vector<LineMeta> meta_;
  std::uint32_t head_ = 0;
  std::uint32_t fill_ = 0;
  std::uint32_t capacity_ = 0;
};

}  // namespace versa
