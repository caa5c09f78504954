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
 * @file topology.hpp
 * @brief Chip geometry, core identities, the address map and the R2R mesh.
 *
 * A chip is a grid of tiles. Each tile holds a 4x2 array of worker cores, one
 * manager core, a crossbar with one port per worker and per memory slice, and
 * a tile scratchpad. One global scratchpad and a flat next-level memory are
 * shared by all tiles.
 *
 * Worker arrays are tiled edge to edge so that the register links form one
 * chip-wide mesh. With the default 2x2 tile grid the mesh is 8 rows by 4
 * columns:
 *
 *       col: 0   1 | 2   3
 *   row 0   t0  t0 | t1  t1
 *   ...            |
 *   row 3   t0  t0 | t1  t1
 *   ---------------+--------
 *   row 4   t2  t2 | t3  t3
 *   ...
 *
 * Built chips are immutable and shared read-only by the simulation engine.
 */

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace versa {

using Word = std::uint32_t;
using Addr = std::uint32_t;
using Cycle = std::uint64_t;

enum class Direction : std::uint8_t { W = 0, E = 1, N = 2, S = 3 };
inline constexpr std::array<Direction, 4> kAllDirections{Direction::W, Direction::E,
                                                         Direction::N, Direction::S};

Direction opposite(Direction d);
std::string_view direction_name(Direction d);

enum class CoreRole : std::uint8_t { Worker, Manager };

struct CoreId {
  int tile = 0;
  CoreRole role = CoreRole::Worker;
  int local = 0;  // worker index within the tile; 0 for managers

  static CoreId worker(int tile, int local) { return {tile, CoreRole::Worker, local}; }
  static CoreId manager(int tile) { return {tile, CoreRole::Manager, 0}; }

  bool is_worker() const { return role == CoreRole::Worker; }
  bool is_manager() const { return role == CoreRole::Manager; }
  friend bool operator==(const CoreId&, const CoreId&) = default;
};

std::string to_string(const CoreId& id);

struct GridDims {
  int rows = 0;
  int cols = 0;
  friend bool operator==(const GridDims&, const GridDims&) = default;
};

struct ChipGeometry {
  int n_tiles = 4;
  int workers_per_tile = 8;
  GridDims tile_grid{2, 2};
  GridDims worker_grid{4, 2};
  int slices_per_tile = 8;
  std::uint32_t slice_capacity = 16384;  // bytes
  std::uint32_t word_size = 4;
  std::uint32_t tspm_capacity = 4096;
  std::uint32_t gspm_capacity = 4096;
  int next_level_latency = 20;
  int next_level_width = 4;               // words per cycle
  std::uint32_t global_capacity = 64u << 20;  // bytes of next-level memory
  int interleave_granularity = 1;         // words; shared-mode slice striping

  /// Throws InvalidGeometry naming the first violated invariant.
  void validate() const;

  int total_workers() const { return n_tiles * workers_per_tile; }
  int total_cores() const { return n_tiles * (workers_per_tile + 1); }
  std::uint32_t slice_words() const { return slice_capacity / word_size; }
  int mesh_rows() const { return tile_grid.rows * worker_grid.rows; }
  int mesh_cols() const { return tile_grid.cols * worker_grid.cols; }

  friend bool operator==(const ChipGeometry&, const ChipGeometry&) = default;
};

enum class Region : std::uint8_t { Rocm, Tspm, Gspm, Global };
std::string_view region_name(Region r);

struct Location {
  Region region;
  std::uint32_t offset;  // bytes from the region base
  friend bool operator==(const Location&, const Location&) = default;
};

/// Fixed-base address map. ROCM addresses are tile-local: each worker sees
/// its own tile's slices at the same range.
class AddressMap {
 public:
  static constexpr Addr kRocmBase = 0x0000'0000;
  static constexpr Addr kTspmBase = 0x1000'0000;
  static constexpr Addr kGspmBase = 0x2000'0000;
  static constexpr Addr kGlobalBase = 0x4000'0000;

  explicit AddressMap(const ChipGeometry& g);

  std::optional<Location> decode(Addr a) const;
  Addr encode(Location loc) const;
  std::uint32_t region_size(Region r) const;
  static Addr region_base(Region r);

  /// Shared-mode striping of a ROCM (or global) word index onto slices.
  struct SliceWord {
    int slice;
    std::uint32_t local_word;
  };
  SliceWord shared_slice(std::uint64_t word) const;
  std::uint64_t shared_word(int slice, std::uint64_t local_word) const;

  int slices() const { return slices_; }
  int granularity() const { return granularity_; }

 private:
  std::uint32_t rocm_size_;
  std::uint32_t tspm_size_;
  std::uint32_t gspm_size_;
  std::uint32_t global_size_;
  int slices_;
  int granularity_;
};

struct MeshCoord {
  int row;
  int col;
  friend bool operator==(const MeshCoord&, const MeshCoord&) = default;
};

/// Immutable wiring of a chip: core order, mesh coordinates and neighbours.
class Chip {
 public:
  const ChipGeometry& geometry() const { return geometry_; }
  const AddressMap& address_map() const { return map_; }

  /// All cores in stepping order: per tile the manager, then workers 0..n-1.
  const std::vector<CoreId>& cores() const { return cores_; }
  int core_index(const CoreId& id) const;
  const CoreId& core(int index) const { return cores_[static_cast<std::size_t>(index)]; }

  int worker_count() const { return geometry_.total_workers(); }
  int worker_index(const CoreId& id) const;  // dense index over workers only
  CoreId worker_at(int worker_index) const;

  MeshCoord mesh_coord(const CoreId& worker) const;
  std::optional<CoreId> worker_at_mesh(MeshCoord c) const;
  int tile_of_mesh(MeshCoord c) const;

  /// Neighbour across the chip-wide mesh, or nullopt at the boundary.
  std::optional<CoreId> r2r_neighbor(const CoreId& worker, Direction d) const;

 private:
  friend Chip build_geometry(const ChipGeometry& config);
  explicit Chip(const ChipGeometry& g);

  ChipGeometry geometry_;
  AddressMap map_;
  std::vector<CoreId> cores_;
  // [worker_index * 4 + dir] -> neighbour worker index or -1
  std::vector<int> neighbors_;
};

Chip build_geometry(const ChipGeometry& config);

}  // namespace versa
