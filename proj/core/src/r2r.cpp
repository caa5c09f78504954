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

#include "versa/r2r.hpp"

#include <cassert>

namespace versa {

LinkMesh::LinkMesh(const Chip& chip) {
  const int n = chip.worker_count();
  links_.assign(static_cast<std::size_t>(n) * 4, LinkState{});
  targets_.assign(static_cast<std::size_t>(n) * 4, -1);
  for (int w = 0; w < n; ++w) {
    for (Direction d : kAllDirections) {
      if (auto nb = chip.r2r_neighbor(chip.worker_at(w), d))
        targets_[static_cast<std::size_t>(w) * 4 + static_cast<std::size_t>(d)] = chip.worker_index(*nb);
    }
  }
  reader_of_.assign(links_.size(), -1);
  writer_of_.assign(links_.size(), -1);
}

int LinkMesh::out_link(int worker_index, Direction d) const {
  const int l = worker_index * 4 + static_cast<int>(d);
  return targets_[static_cast<std::size_t>(l)] < 0 ? -1 : l;
}

int LinkMesh::in_link(int worker_index, Direction d) const {
  const int nb = targets_[static_cast<std::size_t>(worker_index) * 4 + static_cast<std::size_t>(d)];
  if (nb < 0) return -1;
  return nb * 4 + static_cast<int>(opposite(d));
}

LinkMesh::Ticket LinkMesh::request_read(int link) {
  reqs_.push_back({Kind::Read, link, -1, 0});
  return static_cast<Ticket>(reqs_.size() - 1);
}

LinkMesh::Ticket LinkMesh::request_write(int link, Word value) {
  reqs_.push_back({Kind::Write, -1, link, value});
  return static_cast<Ticket>(reqs_.size() - 1);
}

LinkMesh::Ticket LinkMesh::request_move(int in, int out) {
  reqs_.push_back({Kind::Move, in, out, 0});
  return static_cast<Ticket>(reqs_.size() - 1);
}

void LinkMesh::resolve() {
  outcomes_.assign(reqs_.size(), Outcome{});
  if (reqs_.empty()) return;

  for (std::size_t i = 0; i < reqs_.size(); ++i) {
    const auto& r = reqs_[i];
    if (r.in >= 0) {
      assert(reader_of_[static_cast<std::size_t>(r.in)] < 0 && "one reader per link per cycle");
      reader_of_[static_cast<std::size_t>(r.in)] = static_cast<int>(i);
    }
    if (r.out >= 0) {
      assert(writer_of_[static_cast<std::size_t>(r.out)] < 0 && "one writer per link per cycle");
      writer_of_[static_cast<std::size_t>(r.out)] = static_cast<int>(i);
    }
  }

  // Start optimistic, then knock out requests whose condition fails until stable.
  std::vector<char> ok(reqs_.size(), 1);
  for (std::size_t i = 0; i < reqs_.size(); ++i) {
    const auto& r = reqs_[i];
    if (r.in >= 0 && !links_[static_cast<std::size_t>(r.in)].full) {
      ok[i] = 0;
      outcomes_[i].read_side_failed = true;
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < reqs_.size(); ++i) {
      const auto& r = reqs_[i];
      if (!ok[i] || r.out < 0) continue;
      if (!links_[static_cast<std::size_t>(r.out)].full) continue;
      const int rd = reader_of_[static_cast<std::size_t>(r.out)];
      if (rd < 0 || !ok[static_cast<std::size_t>(rd)]) {
        ok[i] = 0;
        changed = true;
      }
    }
  }

  // Reads observe pre-cycle payloads; collect them before any write lands.
  for (std::size_t i = 0; i < reqs_.size(); ++i) {
    const auto& r = reqs_[i];
    if (ok[i] && r.in >= 0) outcomes_[i].value = links_[static_cast<std::size_t>(r.in)].payload;
  }
  for (std::size_t i = 0; i < reqs_.size(); ++i) {
    const auto& r = reqs_[i];
    if (ok[i] && r.in >= 0) links_[static_cast<std::size_t>(r.in)].full = false;
  }
  for (std::size_t i = 0; i < reqs_.size(); ++i) {
    const auto& r = reqs_[i];
    outcomes_[i].ok = ok[i] != 0;
    if (r.out < 0) continue;
    auto& link = links_[static_cast<std::size_t>(r.out)];
    if (ok[i]) {
      link.full = true;
      link.payload = r.kind == Kind::Move ? outcomes_[i].value : r.value;
      link.writer_pending = false;
      ++transfers_;
    } else if (!outcomes_[i].read_side_failed) {
      link.writer_pending = true;
    }
  }

  for (const auto& r : reqs_) {
    if (r.in >= 0) reader_of_[static_cast<std::size_t>(r.in)] = -1;
    if (r.out >= 0) writer_of_[static_cast<std::size_t>(r.out)] = -1;
  }
  reqs_.clear();
}

}  // namespace versa
