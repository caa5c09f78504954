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

#include "versa/modes.hpp"

#include <bit>
#include <set>

#include "versa/errors.hpp"
#include "versa/topology.hpp"

namespace versa {

std::string_view rxb_kind_name(RxbKind k) {
  switch (k) {
    case RxbKind::Shared: return "shared";
    case RxbKind::Private: return "private";
    case RxbKind::Queue: return "queue";
  }
  return "?";
}

std::string_view slice_kind_name(SliceKind k) {
  switch (k) {
    case SliceKind::Cache: return "cache";
    case SliceKind::Spm: return "spm";
    case SliceKind::Fifo: return "fifo";
  }
  return "?";
}

std::optional<int> RxbMode::pair_of(int worker) const {
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (pairs[i].producer == worker || pairs[i].consumer == worker) return static_cast<int>(i);
  return std::nullopt;
}

TileMode TileMode::uniform(RxbMode rxb, SliceMode slice, int n_slices, bool r2r) {
  TileMode m;
  m.rxb = std::move(rxb);
  m.slices.assign(static_cast<std::size_t>(n_slices), slice);
  m.r2r_enabled = r2r;
  return m;
}

void TileMode::validate(const ChipGeometry& g) const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::ModeViolation, "invalid mode: " + what); };
  if (static_cast<int>(slices.size()) != g.slices_per_tile) bad("one slice mode per slice required");
  for (std::size_t i = 0; i < slices.size(); ++i) {
    const auto& s = slices[i];
    if (s.kind == SliceKind::Cache) {
      if (s.line_words < 1 || !std::has_single_bit(static_cast<unsigned>(s.line_words)) ||
          static_cast<std::uint32_t>(s.line_words) > g.slice_words())
        bad("slice " + std::to_string(i) + " line_words must be a power of two within the slice");
    }
    if (s.kind == SliceKind::Fifo && s.fifo_capacity > g.slice_words())
      bad("slice " + std::to_string(i) + " fifo capacity exceeds slice");
  }
  if (rxb.kind != RxbKind::Queue) {
    if (!rxb.pairs.empty()) bad("queue pairs given outside queue mode");
    return;
  }
  std::set<int> cores, used_slices;
  for (const auto& p : rxb.pairs) {
    auto in_range = [&](int v, int n) { return v >= 0 && v < n; };
    if (!in_range(p.producer, g.workers_per_tile) || !in_range(p.consumer, g.workers_per_tile) ||
        !in_range(p.slice, g.slices_per_tile))
      bad("queue pair index out of range");
    if (p.producer == p.consumer) bad("queue pair producer equals consumer");
    if (!cores.insert(p.producer).second || !cores.insert(p.consumer).second)
      bad("queue pairs must be disjoint over cores");
    if (!used_slices.insert(p.slice).second) bad("queue pairs must be disjoint over slices");
    if (slices[static_cast<std::size_t>(p.slice)].kind != SliceKind::Fifo)
      bad("queue pair slice " + std::to_string(p.slice) + " is not in fifo mode");
  }
}

namespace {

struct PresetEntry {
  Preset preset;
  std::string_view name;
};

constexpr PresetEntry kPresetNames[] = {
    {Preset::SharedCache, "shared_cache"},     {Preset::SharedSpm, "shared_spm"},
    {Preset::PrivateCache, "private_cache"},   {Preset::PrivateSpm, "private_spm"},
    {Preset::PrivateSpmR2r, "private_spm_r2r"}, {Preset::QueueFifo, "queue_fifo"},
};

}  // namespace

std::string_view preset_name(Preset p) {
  for (const auto& e : kPresetNames)
    if (e.preset == p) return e.name;
  return "?";
}

std::optional<Preset> preset_from_name(std::string_view name) {
  for (const auto& e : kPresetNames)
    if (e.name == name) return e.preset;
  return std::nullopt;
}

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> all = {Preset::SharedCache, Preset::SharedSpm,
                                          Preset::PrivateCache, Preset::PrivateSpm,
                                          Preset::PrivateSpmR2r, Preset::QueueFifo};
  return all;
}

TileMode make_plan(Preset p, const ChipGeometry& g) {
  const int s = g.slices_per_tile;
  switch (p) {
    case Preset::SharedCache: return TileMode::uniform(RxbMode::shared(), SliceMode::cache(), s);
    case Preset::SharedSpm: return TileMode::uniform(RxbMode::shared(), SliceMode::spm(), s);
    case Preset::PrivateCache: return TileMode::uniform(RxbMode::private_mode(), SliceMode::cache(), s);
    case Preset::PrivateSpm: return TileMode::uniform(RxbMode::private_mode(), SliceMode::spm(), s);
    case Preset::PrivateSpmR2r:
      return TileMode::uniform(RxbMode::private_mode(), SliceMode::spm(), s, true);
    case Preset::QueueFifo: {
      TileMode m = TileMode::uniform(RxbMode::shared(), SliceMode::spm(), s);
      std::vector<QueuePair> pairs;
      for (int i = 0; i + 1 < g.workers_per_tile; i += 2) {
        pairs.push_back({i, i + 1, i});
        m.slices[static_cast<std::size_t>(i)] = SliceMode::fifo();
      }
      m.rxb = RxbMode::queue(std::move(pairs));
      return m;
    }
  }
  return TileMode::uniform(RxbMode::shared(), SliceMode::spm(), s);
}

}  // namespace versa
