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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace versa {

struct ChipGeometry;

enum class RxbKind : std::uint8_t { Shared, Private, Queue };
std::string_view rxb_kind_name(RxbKind k);

/// Producer/consumer binding through one slice. Indices are tile-local.
struct QueuePair {
  int producer = 0;
  int consumer = 0;
  int slice = 0;
  friend bool operator==(const QueuePair&, const QueuePair&) = default;
};

struct RxbMode {
  RxbKind kind = RxbKind::Shared;
  std::vector<QueuePair> pairs;  // only meaningful for Queue

  static RxbMode shared() { return {RxbKind::Shared, {}}; }
  static RxbMode private_mode() { return {RxbKind::Private, {}}; }
  static RxbMode queue(std::vector<QueuePair> p) { return {RxbKind::Queue, std::move(p)}; }

  /// Pair index the worker takes part in (either end), if any.
  std::optional<int> pair_of(int worker) const;

  friend bool operator==(const RxbMode&, const RxbMode&) = default;
};

enum class SliceKind : std::uint8_t { Cache, Spm, Fifo };
std::string_view slice_kind_name(SliceKind k);

struct SliceMode {
  SliceKind kind = SliceKind::Spm;
  int line_words = 8;              // cache only
  std::uint32_t fifo_capacity = 0; // words; 0 selects the whole slice

  static SliceMode cache(int line_words = 8) { return {SliceKind::Cache, line_words, 0}; }
  static SliceMode spm() { return {SliceKind::Spm, 8, 0}; }
  static SliceMode fifo(std::uint32_t capacity = 0) { return {SliceKind::Fifo, 8, capacity}; }

  friend bool operator==(const SliceMode&, const SliceMode&) = default;
};

/// The reconfigurable state of one tile: crossbar mode, per-slice memory
/// mode, and the tile-wide default for register links.
struct TileMode {
  RxbMode rxb;
  std::vector<SliceMode> slices;
  bool r2r_enabled = false;

  static TileMode uniform(RxbMode rxb, SliceMode slice, int n_slices, bool r2r = false);

  /// Throws ModeViolation for an inconsistent mode (bad pair, bad slice mode).
  void validate(const ChipGeometry& g) const;

  friend bool operator==(const TileMode&, const TileMode&) = default;
};

/// Named mode plans used by the kernel suite.
enum class Preset : std::uint8_t {
  SharedCache,
  SharedSpm,
  PrivateCache,
  PrivateSpm,
  PrivateSpmR2r,
  QueueFifo,
};

std::string_view preset_name(Preset p);
std::optional<Preset> preset_from_name(std::string_view name);
const std::vector<Preset>& all_presets();

/// Expands a preset for the given geometry. QueueFifo pairs worker 2i with
/// worker 2i+1 through slice 2i; the remaining slices stay in SPM mode.
TileMode make_plan(Preset p, const ChipGeometry& g);

}  // namespace versa
