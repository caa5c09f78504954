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

#include "versa/cli/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "versa/cli/commands.hpp"
#include "versa/engine.hpp"
#include "versa/errors.hpp"
#include "versa/kernels.hpp"
#include "versa/r2r.hpp"
#include "versa/sweep.hpp"
#include "versa/sync.hpp"

namespace versa::cli {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SimOptions sim_options(const AcceptanceOptions& o) {
  SimOptions s;
  s.timing = o.timing;
  s.energy = o.energy;
  return s;
}

Addr rocm(std::uint64_t word) { return static_cast<Addr>(AddressMap::kRocmBase + 4 * word); }

int slices(const AcceptanceOptions& o) { return o.geometry.slices_per_tile; }

// ---- 1: access latency ----------------------------------------------------

Task<void> load_loop(int n) {
  for (int i = 0; i < n; ++i) co_await op::Load{rocm(static_cast<std::uint64_t>(i))};
}

Cycle load_loop_cycles(const AcceptanceOptions& o, RxbMode rxb, int n) {
  const Chip chip = build_geometry(o.geometry);
  Simulator sim(chip, sim_options(o));
  sim.set_initial_mode(0, TileMode::uniform(std::move(rxb), SliceMode::spm(), slices(o)));
  sim.load(CoreId::worker(0, 0), Program(load_loop(n)));
  return sim.run().cycles;
}

double cycles_per_access(const AcceptanceOptions& o, const RxbMode& rxb) {
  const Cycle a = load_loop_cycles(o, rxb, 64);
  const Cycle b = load_loop_cycles(o, rxb, 192);
  return static_cast<double>(b - a) / 128.0;
}

void latency_ratio(const AcceptanceOptions& o, CheckResult& r) {
  const double priv = cycles_per_access(o, RxbMode::private_mode());
  const double shared = cycles_per_access(o, RxbMode::shared());
  r.measured = "private " + fmt("%g", priv) + ", shared " + fmt("%g", shared) + " cycles/access (" +
               fmt("%.1f", 100.0 * (1.0 - priv / shared)) + "% lower)";
  r.expected = "private 2, shared 3 (exact)";
  r.passed = priv == 2.0 && shared == 3.0;
  if (!r.passed) r.detail = "33% latency reduction not reproduced";
}

// ---- 2: privatization ---------------------------------------------------

Task<void> stream_words(std::vector<Addr> addrs) {
  for (Addr a : addrs) co_await op::Load{a};
}

double stream_bandwidth(const AcceptanceOptions& o, bool private_mode, int words) {
  const Chip chip = build_geometry(o.geometry);
  Simulator sim(chip, sim_options(o));
  sim.set_initial_mode(0, TileMode::uniform(private_mode ? RxbMode::private_mode() : RxbMode::shared(),
                                            SliceMode::spm(), slices(o)));
  const auto& map = chip.address_map();
  const int workers = o.geometry.workers_per_tile;
  for (int w = 0; w < workers; ++w) {
    std::vector<Addr> addrs;
    for (int i = 0; i < words; ++i) {
      const auto local = static_cast<std::uint64_t>(w * words + i);
      // Private: each worker walks its own slice. Shared: every word lands in slice 0.
      addrs.push_back(private_mode ? rocm(static_cast<std::uint64_t>(i)) : rocm(map.shared_word(0, local)));
    }
    sim.load(CoreId::worker(0, w), Program(stream_words(std::move(addrs))));
  }
  const Cycle c = sim.run().cycles;
  return static_cast<double>(workers) * words / static_cast<double>(c);
}

void privatization(const AcceptanceOptions& o, CheckResult& r) {
  const double priv = stream_bandwidth(o, true, 256);
  const double shared = stream_bandwidth(o, false, 256);
  const double ratio = priv / shared;
  r.measured = fmt("%.3f", ratio) + "x (private " + fmt("%.3f", priv) + ", all-to-one shared " + fmt("%.3f", shared) +
               " words/cycle)";
  r.expected = ">= 7.5x";
  r.passed = ratio >= 7.5;
}

// ---- 3: queue vs ping-pong ------------------------------------------------

constexpr int kStreamWords = 1024;
constexpr int kPingPongBlock = 64;

Task<void> queue_producer(int n) {
  for (int i = 0; i < n; ++i) co_await op::FifoPush{0, static_cast<Word>(i * 7 + 1)};
}

Task<void> queue_consumer(int n, std::vector<Word>* got) {
  for (int i = 0; i < n; ++i) got->push_back(co_await op::FifoPop{0});
}

// T-SPM word 0 counts filled blocks, word 1 counts drained blocks.
Task<void> pingpong_producer(int n, int block) {
  const int blocks = n / block;
  for (int b = 0; b < blocks; ++b) {
    while (b >= 2 && static_cast<int>(co_await op::Atomic{AtomicKind::Read, tspm_addr(1), 0}) < b - 1) {
    }
    const std::uint64_t base = static_cast<std::uint64_t>((b % 2) * block);
    for (int i = 0; i < block; ++i)
      co_await op::Store{rocm(base + static_cast<std::uint64_t>(i)), static_cast<Word>((b * block + i) * 7 + 1)};
    co_await op::Atomic{AtomicKind::FetchAdd, tspm_addr(0), 1};
  }
}

Task<void> pingpong_consumer(int n, int block, std::vector<Word>* got) {
  const int blocks = n / block;
  for (int b = 0; b < blocks; ++b) {
    while (static_cast<int>(co_await op::Atomic{AtomicKind::Read, tspm_addr(0), 0}) <= b) {
    }
    const std::uint64_t base = static_cast<std::uint64_t>((b % 2) * block);
    for (int i = 0; i < block; ++i) got->push_back(co_await op::Load{rocm(base + static_cast<std::uint64_t>(i))});
    co_await op::Atomic{AtomicKind::FetchAdd, tspm_addr(1), 1};
  }
}

bool stream_ok(const std::vector<Word>& got, int n) {
  if (static_cast<int>(got.size()) != n) return false;
  for (int i = 0; i < n; ++i)
    if (got[static_cast<std::size_t>(i)] != static_cast<Word>(i * 7 + 1)) return false;
  return true;
}

void queue_doubling(const AcceptanceOptions& o, CheckResult& r) {
  const Chip chip = build_geometry(o.geometry);
  std::vector<Word> q_got, p_got;
  Cycle q_cycles = 0, p_cycles = 0;
  {
    Simulator sim(chip, sim_options(o));
    sim.set_initial_mode(0, make_plan(Preset::QueueFifo, o.geometry));
    sim.load(CoreId::worker(0, 0), Program(queue_producer(kStreamWords)));
    sim.load(CoreId::worker(0, 1), Program(queue_consumer(kStreamWords, &q_got)));
    q_cycles = sim.run().cycles;
  }
  {
    Simulator sim(chip, sim_options(o));
    sim.set_initial_mode(0, make_plan(Preset::SharedSpm, o.geometry));
    sim.load(CoreId::worker(0, 0), Program(pingpong_producer(kStreamWords, kPingPongBlock)));
    sim.load(CoreId::worker(0, 1), Program(pingpong_consumer(kStreamWords, kPingPongBlock, &p_got)));
    p_cycles = sim.run().cycles;
  }
  const double q = static_cast<double>(kStreamWords) / static_cast<double>(q_cycles);
  const double p = static_cast<double>(kStreamWords) / static_cast<double>(p_cycles);
  r.measured = fmt("%.3f", q / p) + "x (queue " + fmt("%.3f", q) + ", ping-pong " + fmt("%.3f", p) + " words/cycle)";
  r.expected = ">= 1.9x";
  const bool data_ok = stream_ok(q_got, kStreamWords) && stream_ok(p_got, kStreamWords);
  r.passed = q / p >= 1.9 && data_ok;
  if (!data_ok) r.detail = "received stream differs from the sent stream";
}

// ---- 4: reconfiguration ---------------------------------------------------

Task<void> hammer(int n) {
  for (int i = 0; i < n; ++i) co_await op::Load{rocm(static_cast<std::uint64_t>(i % 16))};
}

Task<void> switch_at(int delay, TileMode target) {
  co_await op::Compute{static_cast<std::uint32_t>(delay), 0};
  op::SetMode set{std::move(target)};
  co_await std::move(set);
}

Task<void> persist_writer(int n, std::vector<Word>* got) {
  for (int i = 0; i < n; ++i) co_await op::Store{rocm(static_cast<std::uint64_t>(i)), static_cast<Word>(0xA5A50000u + i)};
  co_await op::Atomic{AtomicKind::FetchAdd, tspm_addr(0), 1};
  while (co_await op::Atomic{AtomicKind::Read, tspm_addr(0), 0} < 2) {
  }
  for (int i = 0; i < n; ++i) got->push_back(co_await op::Load{rocm(static_cast<std::uint64_t>(i))});
}

Task<void> persist_manager(TileMode spm, TileMode cache) {
  while (co_await op::Atomic{AtomicKind::Read, tspm_addr(0), 0} < 1) {
  }
  op::SetMode to_cache{std::move(cache)};
  co_await std::move(to_cache);
  op::SetMode to_spm{std::move(spm)};
  co_await std::move(to_spm);
  co_await op::Atomic{AtomicKind::FetchAdd, tspm_addr(0), 1};
}

void reconfiguration(const AcceptanceOptions& o, CheckResult& r) {
  const Chip chip = build_geometry(o.geometry);
  SimOptions so = sim_options(o);
  so.trace = true;
  Simulator sim(chip, so);
  sim.set_initial_mode(0, make_plan(Preset::PrivateSpm, o.geometry));
  for (int w = 0; w < o.geometry.workers_per_tile; ++w) sim.load(CoreId::worker(0, w), Program(hammer(40)));
  sim.load(CoreId::manager(0), Program(switch_at(21, make_plan(Preset::SharedSpm, o.geometry))));
  sim.run();

  Cycle c = 0;
  bool found = false;
  Cycle first_after = ~Cycle{0};
  bool blocked_ok = true;
  for (const auto& e : sim.trace())
    if (e.op == "set_mode") {
      c = e.accept;
      found = true;
    }
  for (const auto& e : sim.trace()) {
    if (e.op != "load" || !found) continue;
    if (e.accept == c || e.accept == c + 1) blocked_ok = false;
    if (e.accept >= c) first_after = std::min(first_after, e.accept);
  }

  // spm -> cache -> spm round trip keeps the SRAM contents.
  constexpr int kWords = 16;
  std::vector<Word> got;
  {
    Simulator s2(chip, sim_options(o));
    s2.set_initial_mode(0, make_plan(Preset::PrivateSpm, o.geometry));
    s2.load(CoreId::worker(0, 0), Program(persist_writer(kWords, &got)));
    s2.load(CoreId::manager(0), Program(persist_manager(make_plan(Preset::PrivateSpm, o.geometry),
                                                        make_plan(Preset::PrivateCache, o.geometry))));
    s2.run();
  }
  bool persisted = static_cast<int>(got.size()) == kWords;
  for (int i = 0; persisted && i < kWords; ++i)
    persisted = got[static_cast<std::size_t>(i)] == static_cast<Word>(0xA5A50000u + i);

  const bool at_c2 = found && first_after == c + 2;
  r.measured = found ? "set_mode at " + std::to_string(c) + ", no grant at c/c+1: " + (blocked_ok ? "yes" : "no") +
                           ", first grant at c+" + std::to_string(first_after - c) +
                           ", SRAM round trip: " + (persisted ? "intact" : "corrupted")
                     : "no set_mode observed";
  r.expected = "blocked exactly c, c+1; first grant c+2; contents intact";
  r.passed = found && blocked_ok && at_c2 && persisted;
}

// ---- 5: barrier scaling -----------------------------------------------------

Task<void> barrier_loop(BarrierScope scope, int episodes) {
  for (int e = 0; e < episodes; ++e) {
    co_await op::Compute{1, 0};
    co_await op::Barrier{scope};
  }
}

double mean_episode_latency(const AcceptanceOptions& o, BarrierScope scope, int n) {
  constexpr int kEpisodes = 4;
  const Chip chip = build_geometry(o.geometry);
  SimOptions so = sim_options(o);
  for (int w = 0; w < n; ++w) so.barrier_participants.push_back(w);
  Simulator sim(chip, so);
  for (int w = 0; w < n; ++w) sim.load(chip.worker_at(w), Program(barrier_loop(scope, kEpisodes)));
  const StatRecord st = sim.run();
  double sum = 0;
  int count = 0;
  for (const auto& b : st.barriers)
    if (b.scope == scope && b.arrivals > 0) {
      sum += static_cast<double>(b.latency());
      ++count;
    }
  if (count != kEpisodes)
    throw Error(ErrorCode::TargetMismatch, "expected " + std::to_string(kEpisodes) + " barrier episodes, saw " +
                                               std::to_string(count));
  return sum / count;
}

void barrier_scaling(const AcceptanceOptions& o, CheckResult& r) {
  const std::vector<int> ns{4, 8, 16, 32};
  std::vector<double> lat;
  for (int n : ns) lat.push_back(mean_episode_latency(o, BarrierScope::Centralized, n));

  const double k = static_cast<double>(ns.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = ns[i];
    sx += x;
    sy += lat[i];
    sxx += x * x;
    sxy += x * lat[i];
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / k;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double fit = icpt + slope * ns[i];
    ss_res += (lat[i] - fit) * (lat[i] - fit);
    ss_tot += (lat[i] - sy / k) * (lat[i] - sy / k);
  }
  const double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 0.0;

  const int all = o.geometry.total_workers();
  const double central = lat.back();
  const double tree = mean_episode_latency(o, BarrierScope::Tree, std::min(32, all));
  const double ratio = central / tree;

  std::ostringstream m;
  m << "centralized latency";
  for (std::size_t i = 0; i < ns.size(); ++i) m << (i ? ", " : " ") << "N=" << ns[i] << ":" << fmt("%g", lat[i]);
  m << "; R^2 " << fmt("%.4f", r2) << "; tree " << fmt("%g", tree) << " -> centralized/tree " << fmt("%.2f", ratio)
    << "x";
  r.measured = m.str();
  r.expected = "R^2 >= 0.98, ratio >= 3.0x at N=32";
  r.passed = r2 >= 0.98 && ratio >= 3.0 && all >= 32;
  if (all < 32) r.detail = "geometry has fewer than 32 workers";
}

// ---- 6: register link FIFO equivalence ----------------------------------

struct Topology {
  std::string name;
  // Ordered source to sink: a writer, zero or more movers, a reader.
  std::vector<std::vector<int>> chains;  // per chain: link indices along the path
};

std::vector<int> path_links(const Chip& chip, const LinkMesh& mesh, MeshCoord from, Direction d, int hops) {
  std::vector<int> links;
  MeshCoord at = from;
  for (int h = 0; h < hops; ++h) {
    const auto id = chip.worker_at_mesh(at);
    if (!id) throw Error(ErrorCode::ConfigError, "link topology does not fit the mesh");
    const int l = mesh.out_link(chip.worker_index(*id), d);
    if (l < 0) throw Error(ErrorCode::ConfigError, "link topology does not fit the mesh");
    links.push_back(l);
    switch (d) {
      case Direction::E: ++at.col; break;
      case Direction::W: --at.col; break;
      case Direction::S: ++at.row; break;
      case Direction::N: --at.row; break;
    }
  }
  return links;
}

// Independent reference: every link is a one-entry FIFO. Within a cycle a
// read succeeds iff the entry was occupied at cycle start; a write succeeds
// iff the entry was free or is drained in the same cycle. Along a chain the
// downstream stage decides first.
bool run_schedule(const Chip& chip, const Topology& topo, std::mt19937_64& rng, std::string& why) {
  LinkMesh mesh(chip);
  const std::size_t nchains = topo.chains.size();
  std::uniform_int_distribution<int> len_dist(1, 12);
  std::uniform_real_distribution<double> prob(0.2, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  struct ChainState {
    std::vector<Word> sent;
    std::vector<Word> received;
    std::size_t next = 0;
    std::vector<std::optional<Word>> model;  // reference FIFO entries
    std::vector<double> p;                   // per stage: writer, movers..., reader
    std::vector<int> moved;                  // words forwarded per mover
  };
  std::vector<ChainState> cs(nchains);
  for (std::size_t k = 0; k < nchains; ++k) {
    auto& c = cs[k];
    const int n = len_dist(rng);
    for (int i = 0; i < n; ++i) c.sent.push_back(static_cast<Word>(rng()));
    c.model.assign(topo.chains[k].size(), std::nullopt);
    const std::size_t stages = topo.chains[k].size() + 1;
    for (std::size_t s = 0; s < stages; ++s) c.p.push_back(prob(rng));
    c.moved.assign(stages, 0);
  }

  for (int cycle = 0; cycle < 4000; ++cycle) {
    bool done = true;
    for (const auto& c : cs) done = done && c.received.size() == c.sent.size();
    if (done) return true;

    struct Pending {
      std::size_t chain, stage;
      LinkMesh::Ticket t;
    };
    std::vector<Pending> reqs;
    std::vector<std::vector<char>> tries(nchains);
    for (std::size_t k = 0; k < nchains; ++k) {
      auto& c = cs[k];
      const auto& links = topo.chains[k];
      const std::size_t stages = links.size() + 1;
      tries[k].assign(stages, 0);
      for (std::size_t s = 0; s < stages; ++s) {
        const std::size_t total = c.sent.size();
        const bool has_work = s == 0                ? c.next < total
                              : s + 1 == stages     ? c.received.size() < total
                                                    : static_cast<std::size_t>(c.moved[s]) < total;
        if (!has_work || coin(rng) >= c.p[s]) continue;
        tries[k][s] = 1;
        LinkMesh::Ticket t;
        if (s == 0)
          t = mesh.request_write(links[0], c.sent[c.next]);
        else if (s + 1 == stages)
          t = mesh.request_read(links[s - 1]);
        else
          t = mesh.request_move(links[s - 1], links[s]);
        reqs.push_back({k, s, t});
      }
    }

    // Reference outcomes, sink first.
    std::vector<std::vector<char>> ok(nchains);
    for (std::size_t k = 0; k < nchains; ++k) {
      auto& c = cs[k];
      const std::size_t stages = topo.chains[k].size() + 1;
      ok[k].assign(stages, 0);
      bool drained = false;  // does the stage downstream of link s-? drain it
      for (std::size_t s = stages; s-- > 0;) {
        if (!tries[k][s]) {
          drained = false;
          continue;
        }
        const bool in_ok = s == 0 || c.model[s - 1].has_value();
        const bool out_ok = s + 1 == stages || !c.model[s].has_value() || drained;
        ok[k][s] = in_ok && out_ok;
        drained = ok[k][s] && s > 0;
      }
    }

    mesh.resolve();
    for (const auto& q : reqs) {
      const auto& out = mesh.outcome(q.t);
      if (out.ok != static_cast<bool>(ok[q.chain][q.stage])) {
        why = topo.name + ": cycle " + std::to_string(cycle) + " stage " + std::to_string(q.stage) +
              (out.ok ? " succeeded" : " blocked") + " against the FIFO reference";
        return false;
      }
    }
    // Apply the reference model and collect received words.
    for (std::size_t k = 0; k < nchains; ++k) {
      auto& c = cs[k];
      const std::size_t stages = topo.chains[k].size() + 1;
      std::vector<std::optional<Word>> next = c.model;
      for (std::size_t s = 0; s < stages; ++s) {
        if (!ok[k][s]) continue;
        if (s > 0) next[s - 1].reset();
      }
      for (std::size_t s = 0; s < stages; ++s) {
        if (!ok[k][s]) continue;
        const Word w = s == 0 ? c.sent[c.next] : *c.model[s - 1];
        if (s + 1 < stages) next[s] = w;
        if (s == 0) ++c.next;
        else if (s + 1 == stages) c.received.push_back(w);
        else ++c.moved[s];
      }
      c.model = std::move(next);
    }
    for (const auto& q : reqs) {
      const std::size_t stages = topo.chains[q.chain].size() + 1;
      if (q.stage + 1 != stages || !ok[q.chain][q.stage]) continue;
      const auto& c = cs[q.chain];
      if (mesh.outcome(q.t).value != c.received.back()) {
        why = topo.name + ": reader observed a stale or reordered word";
        return false;
      }
    }
    for (std::size_t k = 0; k < nchains; ++k) {
      const auto& c = cs[k];
      for (std::size_t i = 0; i < c.received.size(); ++i)
        if (c.received[i] != c.sent[i]) {
          why = topo.name + ": received sequence differs from sent sequence";
          return false;
        }
      for (std::size_t l = 0; l < topo.chains[k].size(); ++l) {
        const auto& st = mesh.state(topo.chains[k][l]);
        const bool model_full = c.model[l].has_value();
        if (st.full != model_full || (model_full && st.payload != *c.model[l])) {
          why = topo.name + ": link state diverges from the FIFO reference (overwrite or lost word)";
          return false;
        }
      }
    }
  }
  why = topo.name + ": schedule did not drain within 4000 cycles";
  return false;
}

Task<void> ring_member(Direction in, Direction out) {
  const Word v = co_await op::R2rRead{in};
  co_await op::R2rWrite{out, v};
}

std::string detect_cyclic_wait(const AcceptanceOptions& o) {
  const Chip chip = build_geometry(o.geometry);
  Simulator sim(chip, sim_options(o));
  for (int t = 0; t < o.geometry.n_tiles; ++t) sim.set_initial_mode(t, make_plan(Preset::PrivateSpmR2r, o.geometry));
  // 2x2 square in the mesh corner, each member waits on its predecessor.
  const std::array<std::pair<MeshCoord, std::pair<Direction, Direction>>, 4> ring{{
      {{0, 0}, {Direction::S, Direction::E}},
      {{0, 1}, {Direction::W, Direction::S}},
      {{1, 1}, {Direction::N, Direction::W}},
      {{1, 0}, {Direction::E, Direction::N}},
  }};
  for (const auto& [at, dirs] : ring) sim.load(*chip.worker_at_mesh(at), Program(ring_member(dirs.first, dirs.second)));
  try {
    sim.run();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Deadlock) return e.what();
    throw;
  }
  return {};
}

void r2r_equivalence(const AcceptanceOptions& o, CheckResult& r) {
  const Chip chip = build_geometry(o.geometry);
  const LinkMesh mesh(chip);
  const int rows = o.geometry.mesh_rows();
  const int cols = o.geometry.mesh_cols();
  const int wcols = o.geometry.worker_grid.cols;
  std::vector<Topology> topos;
  topos.push_back({"single link", {path_links(chip, mesh, {0, 0}, Direction::E, 1)}});
  if (cols > wcols)
    topos.push_back({"cross-tile link", {path_links(chip, mesh, {0, wcols - 1}, Direction::E, 1)}});
  topos.push_back({"row pipeline", {path_links(chip, mesh, {0, 0}, Direction::E, cols - 1)}});
  topos.push_back({"column pipeline", {path_links(chip, mesh, {0, 0}, Direction::S, rows - 1)}});
  topos.push_back({"bidirectional pair",
                   {path_links(chip, mesh, {0, 0}, Direction::E, 1), path_links(chip, mesh, {0, 1}, Direction::W, 1)}});

  std::mt19937_64 rng(0x5eed);
  std::string why;
  std::uint64_t runs = 0;
  bool ok = true;
  for (const auto& t : topos) {
    for (std::uint64_t i = 0; i < o.r2r_schedules && ok; ++i, ++runs) ok = run_schedule(chip, t, rng, why);
    if (!ok) break;
  }
  const std::string deadlock = detect_cyclic_wait(o);
  r.measured = std::to_string(runs) + " schedules over " + std::to_string(topos.size()) + " topologies " +
               (ok ? "matched" : "diverged") + "; cyclic wait " + (deadlock.empty() ? "not reported" : "reported");
  r.expected = "all schedules match the depth-1 FIFO; Deadlock reported";
  r.passed = ok && !deadlock.empty();
  r.detail = ok ? deadlock : why;
}

// ---- 7/8: kernels ---------------------------------------------------------

struct KernelSizes {
  KernelName kernel;
  std::vector<std::uint32_t> sizes;
};

const std::vector<KernelSizes>& transparency_sizes() {
  static const std::vector<KernelSizes> v{
      {KernelName::Gemm, {8, 16}},          {KernelName::Stencil2d, {10, 18}}, {KernelName::Spmv, {64, 128}},
      {KernelName::Kmp, {512, 1024}},       {KernelName::Mergesort, {1024, 2048}},
  };
  return v;
}

void transparency(const AcceptanceOptions& o, CheckResult& r) {
  std::vector<SweepPoint> points;
  for (const auto& ks : transparency_sizes()) {
    KernelSpec base;
    base.kernel = ks.kernel;
    auto p = sweep_points(base, supported_plans(ks.kernel), ks.sizes, {1.0});
    points.insert(points.end(), p.begin(), p.end());
  }
  const auto rows = run_sweep(points, o.geometry, sim_options(o), o.dvfs_table, o.jobs);
  std::size_t good = 0;
  for (const auto& row : rows) {
    if (row.output_match && row.error.empty()) {
      ++good;
    } else if (r.detail.empty()) {
      r.detail = std::string(kernel_name(row.kernel)) + "/" + std::string(preset_name(row.plan)) + " size " +
                 std::to_string(row.size) + ": " + row.error;
    }
  }
  r.measured = std::to_string(good) + "/" + std::to_string(rows.size()) + " kernel x plan x size runs match";
  r.expected = "all match the reference exactly";
  r.passed = good == rows.size() && !rows.empty();
}

void stencil_inversion(const AcceptanceOptions& o, CheckResult& r) {
  KernelSpec base;
  base.kernel = KernelName::Stencil2d;
  base.repeat = 16;
  const std::vector<std::uint32_t> sizes{8, 16, 34, 66, 130, 256};
  const auto [cache, spm] = kernel_plans(KernelName::Stencil2d);
  const auto rows = run_sweep(sweep_points(base, {cache, spm}, sizes, {1.0}), o.geometry, sim_options(o), o.dvfs_table,
                              o.jobs);
  std::ostringstream m;
  std::optional<Preset> first, last;
  double small_ratio = 0;
  for (auto size : sizes) {
    double gc = 0, gs = 0;
    for (const auto& row : rows) {
      if (row.size != size) continue;
      if (!row.error.empty()) {
        r.detail = "size " + std::to_string(size) + ": " + row.error;
        return;
      }
      (row.plan == cache ? gc : gs) = row.gflops_per_watt;
      if (row.winner) (size == sizes.front() ? first : last) = row.plan;
    }
    if (size == sizes.front()) small_ratio = gc / gs;
    m << (size == sizes.front() ? "" : ", ") << "N=" << size << " " << (gc > gs ? "cache" : "spm_r2r") << " "
      << fmt("%.1f", gc) << "/" << fmt("%.1f", gs);
  }
  r.measured = m.str() + " GFLOPS/W (cache/spm_r2r)";
  r.expected = "private_cache wins N=8, private_spm_r2r wins N=256";
  r.passed = first == cache && last == spm;
  r.detail = "smallest-size cache advantage " + fmt("%.2f", small_ratio) + "x (direction only)";
}

// ---- 9: energy ----------------------------------------------------------

void energy_arithmetic(const AcceptanceOptions& o, CheckResult& r) {
  const Chip chip = build_geometry(o.geometry);
  KernelSpec spec;
  spec.kernel = KernelName::Gemm;
  spec.size = 16;
  Workload wl = generate(spec, Preset::SharedCache, chip);
  Simulator sim(chip, sim_options(o));
  for (const auto& seg : wl.image) sim.memory().write_range(seg.word, seg.data);
  for (auto& [id, prog] : wl.programs) sim.load(id, std::move(prog));
  const StatRecord st = sim.run();
  const EnergyLedger& led = sim.ledger();

  bool conserved = true;
  double sum = 0;
  for (auto c : all_energy_classes()) {
    std::uint64_t tiles = 0;
    for (int t = 0; t < led.n_tiles(); ++t) tiles += led.tile_count(t, c);
    conserved = conserved && tiles == led.count(c);
    conserved = conserved && led.energy(c) == led.coefficients().of(c) * static_cast<double>(led.count(c));
    conserved = conserved && st.energy.energy[static_cast<std::size_t>(c)] == led.energy(c);
    sum += led.energy(c);
  }
  conserved = conserved && sum == st.energy.total && st.accounting_closes();

  const double sub = st.energy.monolithic_word_energy > 0
                         ? st.energy.subbank_word_energy / st.energy.monolithic_word_energy
                         : 0.0;
  const DvfsPoint nominal = dvfs_point(o.dvfs_table, 1.0);
  const DvfsPoint mep = dvfs_point(o.dvfs_table, 0.6);
  const double watts = nominal.energy_per_cycle_pj * 1e-12 * nominal.freq_hz;
  const double mep_ratio = mep.gflops_per_watt() / nominal.gflops_per_watt();

  const bool sub_ok = std::abs(sub - 1.0 / 3.4) <= 0.01;
  const bool env_ok = std::abs(watts - 0.810) <= 0.0081;
  const bool mep_ok = std::abs(mep_ratio - 2.47) <= 0.01;
  r.measured = std::string("conservation ") + (conserved ? "exact" : "broken") + "; sub-bank/monolithic " +
               fmt("%.4f", sub) + "; envelope " + fmt("%.4f", watts) + " W; efficiency ratio " +
               fmt("%.3f", mep_ratio) + " (" + fmt("%.2f", mep.gflops_per_watt()) + " GFLOPS/W at 0.6 V)";
  r.expected = "exact; 0.2941 +- 0.01; 0.810 W +- 1%; 2.47 +- 0.01";
  r.passed = conserved && sub_ok && env_ok && mep_ok;
}

// ---- 10: determinism -------------------------------------------------------

void determinism(const AcceptanceOptions& o, CheckResult& r) {
  RunConfig cfg;
  cfg.geometry = o.geometry;
  cfg.timing = o.timing;
  cfg.energy = o.energy;
  cfg.dvfs_table = o.dvfs_table;
  cfg.kernel.kernel = KernelName::Spmv;
  cfg.kernel.size = 64;
  const std::string a = to_json_canonical(simulate(cfg)).dump();
  const std::string b = to_json_canonical(simulate(cfg)).dump();

  cfg.kernel.kernel = KernelName::Gemm;
  cfg.sweep.sizes = {8, 12, 16};
  cfg.sweep.plans = supported_plans(KernelName::Gemm);
  cfg.sweep.vdds = {0.6, 1.0};
  const std::string s1 = to_csv(sweep(cfg, 1));
  const std::string s4 = to_csv(sweep(cfg, 4));
  r.measured = std::string("run records ") + (a == b ? "identical" : "differ") + "; sweep CSV --jobs 1 vs 4 " +
               (s1 == s4 ? "identical" : "differ");
  r.expected = "identical";
  r.passed = a == b && s1 == s4;
}

struct Criterion {
  const char* name;
  double limit;
  void (*fn)(const AcceptanceOptions&, CheckResult&);
};

const std::array<Criterion, kCriteriaCount>& criteria() {
  static const std::array<Criterion, kCriteriaCount> c{{
      {"latency ratio", 1, latency_ratio},
      {"privatization contention", 5, privatization},
      {"queue doubling", 5, queue_doubling},
      {"reconfiguration cost", 0, reconfiguration},
      {"barrier scaling", 10, barrier_scaling},
      {"register link FIFO equivalence", 30, r2r_equivalence},
      {"functional transparency", 120, transparency},
      {"stencil2d inversion", 0, stencil_inversion},
      {"energy arithmetic", 0, energy_arithmetic},
      {"determinism", 0, determinism},
  }};
  return c;
}

}  // namespace

AcceptanceOptions acceptance_options(const RunConfig& c) {
  AcceptanceOptions o;
  o.geometry = c.geometry;
  o.timing = c.timing;
  o.energy = c.energy;
  o.dvfs_table = c.dvfs_table;
  o.jobs = c.sweep.jobs;
  return o;
}

std::string_view criterion_name(int id) {
  if (id < 1 || id > kCriteriaCount) return "?";
  return criteria()[static_cast<std::size_t>(id - 1)].name;
}

CheckResult run_criterion(int id, const AcceptanceOptions& opts) {
  CheckResult r;
  r.id = id;
  r.name = std::string(criterion_name(id));
  if (id < 1 || id > kCriteriaCount) {
    r.detail = "no such criterion";
    return r;
  }
  const auto& c = criteria()[static_cast<std::size_t>(id - 1)];
  r.limit_seconds = c.limit;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.fn(opts, r);
  } catch (const Error& e) {
    r.passed = false;
    r.detail = std::string(error_code_name(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (opts.enforce_runtime && r.limit_seconds > 0 && r.seconds > r.limit_seconds) {
    r.passed = false;
    r.detail = "runtime " + fmt("%.2f", r.seconds) + " s exceeds " + fmt("%g", r.limit_seconds) + " s";
  }
  return r;
}

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opts, const std::vector<int>& ids) {
  std::vector<int> todo = ids;
  if (todo.empty()) {
    todo.resize(kCriteriaCount);
    std::iota(todo.begin(), todo.end(), 1);
  }
  std::vector<CheckResult> out;
  for (int id : todo) out.push_back(run_criterion(id, opts));
  return out;
}

std::string format_check(const CheckResult& r) {
  std::string s = std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + ": " +
                  r.measured + " | expected " + r.expected + " | " + fmt("%.2f", r.seconds) + " s";
  if (r.limit_seconds > 0) s += " (limit " + fmt("%g", r.limit_seconds) + " s)";
  if (!r.detail.empty()) s += " | " + r.detail;
  return s;
}

}  // namespace versa::cli
