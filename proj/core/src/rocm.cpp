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

#include "versa/rocm.hpp"

#include <algorithm>

#include "versa/errors.hpp"

namespace versa {

NextLevelMemory::NextLevelMemory(std::uint64_t words)
    : size_(words), pages_((words + kPageWords - 1) / kPageWords) {}

void NextLevelMemory::check(std::uint64_t word) const {
  if (word >= size_)
    throw Error(ErrorCode::OutOfRange, "next-level word " + std::to_string(word) + " beyond capacity");
}

Word NextLevelMemory::read(std::uint64_t word) const {
  check(word);
  const auto& page = pages_[word / kPageWords];
  return page ? page[word % kPageWords] : 0;
}

void NextLevelMemory::write(std::uint64_t word, Word v) {
  check(word);
  auto& page = pages_[word / kPageWords];
  if (!page) page = std::make_unique<Word[]>(kPageWords);  // value-initialised
  page[word % kPageWords] = v;
}

std::vector<Word> NextLevelMemory::read_range(std::uint64_t word, std::size_t n) const {
  std::vector<Word> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = read(word + i);
  return out;
}

void NextLevelMemory::write_range(std::uint64_t word, std::span<const Word> data) {
  for (std::size_t i = 0; i < data.size(); ++i) write(word + i, data[i]);
}

std::uint64_t Projection::to_global(std::uint64_t local_word) const {
  if (!striped) return local_word;
  const auto g = static_cast<std::uint64_t>(granularity);
  const auto s = static_cast<std::uint64_t>(slices);
  return ((local_word / g) * s + static_cast<std::uint64_t>(slice)) * g + local_word % g;
}

// ---------------------------------------------------------------------------

Slice::Slice(std::uint32_t words, SliceMode initial) : sram_(words), mode_(initial) {
  if (mode_.kind == SliceKind::Cache) meta_.assign(static_cast<std::size_t>(n_lines()), LineMeta{});
  if (mode_.kind == SliceKind::Fifo) capacity_ = mode_.fifo_capacity ? mode_.fifo_capacity : words;
}

int Slice::n_lines() const {
  return mode_.kind == SliceKind::Cache ? static_cast<int>(sram_.size()) / mode_.line_words : 0;
}

bool Slice::has_dirty() const {
  return std::any_of(meta_.begin(), meta_.end(), [](const LineMeta& m) { return m.valid && m.dirty; });
}

bool Slice::transition(const SliceMode& target, const Projection& proj, bool strict, const std::string& name) {
  const bool same_mapping = target.kind != SliceKind::Cache || proj == proj_;
  if (target == mode_ && same_mapping) return false;
  if (mode_.kind == SliceKind::Cache && has_dirty()) {
    if (strict)
      throw Error(ErrorCode::DirtyDrop,
                  name + ": leaving cache mode with dirty lines (flush first or disable strict mode)");
    for (auto& m : meta_) m.dirty = false;
  }
  mode_ = target;
  proj_ = proj;
  meta_.clear();
  if (mode_.kind == SliceKind::Cache) meta_.assign(static_cast<std::size_t>(n_lines()), LineMeta{});
  head_ = 0;
  fill_ = 0;
  capacity_ = 0;
  if (mode_.kind == SliceKind::Fifo)
    capacity_ = mode_.fifo_capacity ? mode_.fifo_capacity : static_cast<std::uint32_t>(sram_.size());
  return true;
}

Word Slice::spm_read(std::uint64_t local_word) {
  if (local_word >= sram_.size())
    throw Error(ErrorCode::OutOfRange, "scratchpad read beyond slice: word " + std::to_string(local_word));
  ++stats.reads;
  return sram_[local_word];
}

void Slice::spm_write(std::uint64_t local_word, Word v) {
  if (local_word >= sram_.size())
    throw Error(ErrorCode::OutOfRange, "scratchpad write beyond slice: word " + std::to_string(local_word));
  ++stats.writes;
  sram_[local_word] = v;
}

void Slice::write_back(std::size_t index, NextLevelMemory& mem) {
  const auto lw = static_cast<std::uint64_t>(mode_.line_words);
  const auto nl = static_cast<std::uint64_t>(meta_.size());
  const std::uint64_t line_no = meta_[index].tag * nl + index;
  for (std::uint64_t j = 0; j < lw; ++j)
    mem.write(proj_.to_global(line_no * lw + j), sram_[index * lw + j]);
  meta_[index].dirty = false;
  ++stats.writebacks;
}

Slice::CacheOutcome Slice::cache_access(bool write, Word value, std::uint64_t local_word, NextLevelMemory& mem) {
  const auto lw = static_cast<std::uint64_t>(mode_.line_words);
  const auto nl = static_cast<std::uint64_t>(meta_.size());
  const std::uint64_t line_no = local_word / lw;
  const std::size_t index = line_no % nl;
  const std::uint64_t tag = line_no / nl;
  auto& m = meta_[index];
  CacheOutcome out;
  out.hit = m.valid && m.tag == tag;
  if (out.hit) {
    ++stats.hits;
  } else {
    ++stats.misses;
    if (m.valid) {
      ++stats.evictions;
      if (m.dirty) {
        out.dirty_eviction = true;
        write_back(index, mem);
      }
    }
    for (std::uint64_t j = 0; j < lw; ++j) sram_[index * lw + j] = mem.read(proj_.to_global(line_no * lw + j));
    m.valid = true;
    m.dirty = false;
    m.tag = tag;
  }
  const std::size_t w = index * lw + local_word % lw;
  if (write) {
    ++stats.writes;
    sram_[w] = value;
    m.dirty = true;
  } else {
    ++stats.reads;
    out.value = sram_[w];
  }
  return out;
}

bool Slice::probe(std::uint64_t local_word) const {
  if (mode_.kind != SliceKind::Cache) return false;
  const auto lw = static_cast<std::uint64_t>(mode_.line_words);
  const auto nl = static_cast<std::uint64_t>(meta_.size());
  const std::uint64_t line_no = local_word / lw;
  const auto& m = meta_[line_no % nl];
  return m.valid && m.tag == line_no / nl;
}

int Slice::flush_line(std::uint64_t local_word, NextLevelMemory& mem) {
  if (mode_.kind != SliceKind::Cache) return 0;
  ++stats.flushes;
  const auto lw = static_cast<std::uint64_t>(mode_.line_words);
  const auto nl = static_cast<std::uint64_t>(meta_.size());
  const std::uint64_t line_no = local_word / lw;
  const std::size_t index = line_no % nl;
  auto& m = meta_[index];
  if (!m.valid || !m.dirty || m.tag != line_no / nl) return 0;
  write_back(index, mem);
  return mode_.line_words;
}

int Slice::flush_all(NextLevelMemory& mem) {
  int lines = 0;
  for (std::size_t i = 0; i < meta_.size(); ++i) {
    if (meta_[i].valid && meta_[i].dirty) {
      write_back(i, mem);
      ++lines;
    }
  }
  return lines;
}

Word Slice::fifo_front() const { return sram_[head_]; }

Word Slice::fifo_pop() {
  Word v = sram_[head_];
  head_ = (head_ + 1) % capacity_;
  --fill_;
  ++stats.pops;
  return v;
}

void Slice::fifo_push(Word v) {
  sram_[(head_ + fill_) % capacity_] = v;
  ++fill_;
  ++stats.pushes;
  stats.fifo_max_fill = std::max(stats.fifo_max_fill, fill_);
}

}  // namespace versa
