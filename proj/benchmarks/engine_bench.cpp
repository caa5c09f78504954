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

// Host-side throughput of the simulator: simulated cycles per second for
// synthetic load streams and for full kernel runs.

#include <benchmark/benchmark.h>

#include "versa/engine.hpp"
#include "versa/kernels.hpp"
#include "versa/r2r.hpp"
#include "versa/rxb.hpp"

namespace {

using namespace versa;

void BM_LoadStream(benchmark::State& state) {
  const bool priv = state.range(0) != 0;
  const Chip chip = build_geometry(ChipGeometry{});
  std::uint64_t cycles = 0;
  for (auto _ : state) {
    Simulator sim(chip);
    for (int t = 0; t < 4; ++t)
      sim.set_initial_mode(t, make_plan(priv ? Preset::PrivateSpm : Preset::SharedSpm, chip.geometry()));
    for (int i = 0; i < chip.worker_count(); ++i) {
      std::vector<CoreOp> ops;
      for (std::uint32_t k = 0; k < 512; ++k) ops.push_back(op::Load{4 * k});
      sim.load(chip.worker_at(i), Program::from_ops(std::move(ops)));
    }
    cycles += sim.run().cycles;
  }
  state.counters["sim_cycles/s"] = benchmark::Counter(static_cast<double>(cycles), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_LoadStream)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Kernel(benchmark::State& state) {
  KernelSpec spec;
  spec.kernel = static_cast<KernelName>(state.range(0));
  spec.size = static_cast<std::uint32_t>(state.range(1));
  const Preset plan = kernel_plans(spec.kernel).first;
  std::uint64_t cycles = 0;
  for (auto _ : state) {
    const KernelRun r = run_kernel(spec, plan, ChipGeometry{}, SimOptions{}, DvfsPoint{});
    cycles += r.stats.cycles;
    benchmark::DoNotOptimize(r.output_match);
  }
  state.SetLabel(std::string(kernel_name(spec.kernel)) + "/" + std::string(preset_name(plan)));
  state.counters["sim_cycles/s"] = benchmark::Counter(static_cast<double>(cycles), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Kernel)
    ->Args({static_cast<int>(KernelName::Gemm), 16})
    ->Args({static_cast<int>(KernelName::Stencil2d), 34})
    ->Args({static_cast<int>(KernelName::Spmv), 128})
    ->Args({static_cast<int>(KernelName::Kmp), 1024})
    ->Args({static_cast<int>(KernelName::Mergesort), 2048})
    ->Unit(benchmark::kMillisecond);

void BM_LrgArbitrate(benchmark::State& state) {
  LrgArbiter a(8);
  const std::vector<int> req{0, 2, 3, 5, 7};
  for (auto _ : state) benchmark::DoNotOptimize(a.arbitrate(req));
}
BENCHMARK(BM_LrgArbitrate);

void BM_LinkResolve(benchmark::State& state) {
  const Chip chip = build_geometry(ChipGeometry{});
  LinkMesh mesh(chip);
  const int l = mesh.out_link(0, Direction::E);
  Word v = 0;
  for (auto _ : state) {
    mesh.request_write(l, ++v);
    mesh.request_read(l);
    mesh.resolve();
  }
}
BENCHMARK(BM_LinkResolve);

}  // namespace

BENCHMARK_MAIN();
