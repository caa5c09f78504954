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

#include "versa/topology.hpp"

#include <bit>

#include "versa/errors.hpp"

namespace versa {

Direction opposite(Direction d) {
  switch (d) {
    case Direction::W: return Direction::E;
    case Direction::E: return Direction::W;
    case Direction::N: return Direction::S;
    case Direction::S: return Direction::N;
  }
  return d;
}

std::string_view direction_name(Direction d) {
  switch (d) {
    case Direction::W: return "W";
    case Direction::E: return "E";
    case Direction::N: return "N";
    case Direction::S: return "S";
  }
  return "?";
}

std::string to_string(const CoreId& id) {
  if (id.is_manager()) return "t" + std::to_string(id.tile) + ".mgr";
  return "t" + std::to_string(id.tile) + ".w" + std::to_string(id.local);
}

std::string_view region_name(Region r) {
  switch (r) {
    case Region::Rocm: return "rocm";
    case Region::Tspm: return "tspm";
    case Region::Gspm: return "gspm";
    case Region::Global: return "global";
  }
  return "?";
}

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidGeometry, "invalid geometry: " + what);
}

}  // namespace

void ChipGeometry::validate() const {
  if (n_tiles < 1) invalid("n_tiles must be >= 1");
  if (tile_grid.rows < 1 || tile_grid.cols < 1 || tile_grid.rows * tile_grid.cols != n_tiles)
    invalid("tile_grid.rows * tile_grid.cols must equal n_tiles");
  if (workers_per_tile < 1) invalid("workers_per_tile must be >= 1");
  if (worker_grid.rows < 1 || worker_grid.cols < 1 ||
      worker_grid.rows * worker_grid.cols != workers_per_tile)
    invalid("worker_grid.rows * worker_grid.cols must equal workers_per_tile");
  if (workers_per_tile != slices_per_tile)
    invalid("workers_per_tile must equal slices_per_tile (one crossbar port per worker and per slice)");
  if (word_size != 4) invalid("word_size is fixed at 4 bytes");
  if (slice_capacity == 0 || slice_capacity % word_size != 0 ||
      !std::has_single_bit(slice_capacity / word_size))
    invalid("slice_capacity must be a power-of-two multiple of word_size");
  if (static_cast<std::uint64_t>(slice_capacity) * static_cast<std::uint64_t>(slices_per_tile) >
      (AddressMap::kTspmBase - AddressMap::kRocmBase))
    invalid("tile ROCM exceeds its address window");
  for (auto [cap, name] : {std::pair{tspm_capacity, "tspm_capacity"},
                           std::pair{gspm_capacity, "gspm_capacity"}}) {
    if (cap < 64 || cap % word_size != 0 || cap > 0x1000'0000u)
      invalid(std::string(name) + " must be a word multiple in [64, 256 MiB]");
  }
  if (global_capacity == 0 || global_capacity % word_size != 0 ||
      global_capacity > 0xC000'0000u)
    invalid("global_capacity must be a word multiple no larger than 3 GiB");
  if (next_level_latency < 0) invalid("next_level_latency must be >= 0");
  if (next_level_width < 1) invalid("next_level_width must be >= 1");
  if (interleave_granularity < 1 ||
      slice_words() % static_cast<std::uint32_t>(interleave_granularity) != 0)
    invalid("interleave_granularity must be >= 1 and divide the slice word count");
}

// ---------------------------------------------------------------------------
// AddressMap

AddressMap::AddressMap(const ChipGeometry& g)
    : rocm_size_(g.slice_capacity * static_cast<std::uint32_t>(g.slices_per_tile)),
      tspm_size_(g.tspm_capacity),
      gspm_size_(g.gspm_capacity),
      global_size_(g.global_capacity),
      slices_(g.slices_per_tile),
      granularity_(g.interleave_granularity) {}

Addr AddressMap::region_base(Region r) {
  switch (r) {
    case Region::Rocm: return kRocmBase;
    case Region::Tspm: return kTspmBase;
    case Region::Gspm: return kGspmBase;
    case Region::Global: return kGlobalBase;
  }
  return 0;
}

std::uint32_t AddressMap::region_size(Region r) const {
  switch (r) {
    case Region::Rocm: return rocm_size_;
    case Region::Tspm: return tspm_size_;
    case Region::Gspm: return gspm_size_;
    case Region::Global: return global_size_;
  }
  return 0;
}

std::optional<Location> AddressMap::decode(Addr a) const {
  for (Region r : {Region::Global, Region::Gspm, Region::Tspm, Region::Rocm}) {
    Addr base = region_base(r);
    if (a >= base && a - base < region_size(r)) return Location{r, a - base};
  }
  return std::nullopt;
}

Addr AddressMap::encode(Location loc) const {
  if (loc.offset >= region_size(loc.region))
    throw Error(ErrorCode::OutOfRange, "offset outside region " + std::string(region_name(loc.region)));
  return region_base(loc.region) + loc.offset;
}

AddressMap::SliceWord AddressMap::shared_slice(std::uint64_t word) const {
  const auto g = static_cast<std::uint64_t>(granularity_);
  const auto s = static_cast<std::uint64_t>(slices_);
  const std::uint64_t stripe = word / g;
  return {static_cast<int>(stripe % s),
          static_cast<std::uint32_t>((stripe / s) * g + word % g)};
}

std::uint64_t AddressMap::shared_word(int slice, std::uint64_t local_word) const {
  const auto g = static_cast<std::uint64_t>(granularity_);
  const auto s = static_cast<std::uint64_t>(slices_);
  return ((local_word / g) * s + static_cast<std::uint64_t>(slice)) * g + local_word % g;
}

// ---------------------------------------------------------------------------
// Chip

Chip::Chip(const ChipGeometry& g) : geometry_(g), map_(g) {
  const int wpt = g.workers_per_tile;
  cores_.reserve(static_cast<std::size_t>(g.total_cores()));
  for (int t = 0; t < g.n_tiles; ++t) {
    cores_.push_back(CoreId::manager(t));
    for (int l = 0; l < wpt; ++l) cores_.push_back(CoreId::worker(t, l));
  }

  const int n = g.total_workers();
  neighbors_.assign(static_cast<std::size_t>(n) * 4, -1);
  for (int w = 0; w < n; ++w) {
    MeshCoord c = mesh_coord(worker_at(w));
    for (Direction d : kAllDirections) {
      MeshCoord nc = c;
      switch (d) {
        case Direction::W: nc.col -= 1; break;
        case Direction::E: nc.col += 1; break;
        case Direction::N: nc.row -= 1; break;
        case Direction::S: nc.row += 1; break;
      }
      if (auto nb = worker_at_mesh(nc))
        neighbors_[static_cast<std::size_t>(w) * 4 + static_cast<std::size_t>(d)] = worker_index(*nb);
    }
  }
}

int Chip::core_index(const CoreId& id) const {
  const int base = id.tile * (geometry_.workers_per_tile + 1);
  return id.is_manager() ? base : base + 1 + id.local;
}

int Chip::worker_index(const CoreId& id) const {
  return id.tile * geometry_.workers_per_tile + id.local;
}

CoreId Chip::worker_at(int worker_index) const {
  return CoreId::worker(worker_index / geometry_.workers_per_tile,
                        worker_index % geometry_.workers_per_tile);
}

MeshCoord Chip::mesh_coord(const CoreId& worker) const {
  const auto& g = geometry_;
  const int tr = worker.tile / g.tile_grid.cols;
  const int tc = worker.tile % g.tile_grid.cols;
  return {tr * g.worker_grid.rows + worker.local / g.worker_grid.cols,
          tc * g.worker_grid.cols + worker.local % g.worker_grid.cols};
}

int Chip::tile_of_mesh(MeshCoord c) const {
  const auto& g = geometry_;
  return (c.row / g.worker_grid.rows) * g.tile_grid.cols + c.col / g.worker_grid.cols;
}

std::optional<CoreId> Chip::worker_at_mesh(MeshCoord c) const {
  const auto& g = geometry_;
  if (c.row < 0 || c.col < 0 || c.row >= g.mesh_rows() || c.col >= g.mesh_cols()) return std::nullopt;
  const int local = (c.row % g.worker_grid.rows) * g.worker_grid.cols + c.col % g.worker_grid.cols;
  return CoreId::worker(tile_of_mesh(c), local);
}

std::optional<CoreId> Chip::r2r_neighbor(const CoreId& worker, Direction d) const {
  if (!worker.is_worker()) return std::nullopt;
  const int nb = neighbors_[static_cast<std::size_t>(worker_index(worker)) * 4 + static_cast<std::size_t>(d)];
  if (nb < 0) return std::nullopt;
  return worker_at(nb);
}

Chip build_geometry(const ChipGeometry& config) {
  config.validate();
  return Chip(config);
}

}  // namespace versa
