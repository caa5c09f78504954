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

// versa: run, sweep, validate, presets.
//
// Every flag has an environment variable with the VERSA_ prefix; an explicit
// flag wins over the variable, and both win over the config file.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "versa/cli/commands.hpp"
#include "versa/cli/config.hpp"
#include "versa/errors.hpp"
#include "versa/stats.hpp"

namespace {

using namespace versa;
using namespace versa::cli;

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string strict_dirty;
  std::vector<int> checks;
  bool no_time_limits = false;
};

RunConfig effective_config(const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (f.seed) c.seed = *f.seed;
  if (f.jobs) c.sweep.jobs = *f.jobs;
  if (!f.strict_dirty.empty()) {
    if (f.strict_dirty != "on" && f.strict_dirty != "off")
      throw Error(ErrorCode::ConfigError, "--strict-dirty: expected on or off, got '" + f.strict_dirty + "'");
    c.strict_dirty = f.strict_dirty == "on";
  }
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-level simulator of a reconfigurable-memory multiprocessor", "versa"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  app.add_option("--config", f.config, "run configuration (JSON)")->envname("VERSA_CONFIG");
  app.add_option("--out", f.out, "output file (run: stats JSON, sweep: CSV); stdout if omitted")
      ->envname("VERSA_OUT");
  app.add_option("--seed", f.seed, "workload seed")->envname("VERSA_SEED");
  app.add_option("--jobs", f.jobs, "sweep threads (0: all cores)")
      ->envname("VERSA_JOBS")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--strict-dirty", f.strict_dirty, "reject mode changes that would drop dirty lines")
      ->envname("VERSA_STRICT_DIRTY");

  auto* run = app.add_subcommand("run", "run one kernel and write its StatRecord");
  auto* sweep = app.add_subcommand("sweep", "run a size x plan x voltage sweep; CSV plus JSON summary");
  auto* validate = app.add_subcommand("validate", "run the acceptance checks");
  validate->add_option("--check", f.checks, "criterion numbers to run (default: all)")
      ->check(CLI::Range(1, kCriteriaCount));
  validate->add_flag("--no-time-limits", f.no_time_limits, "do not fail checks on runtime");
  auto* presets = app.add_subcommand("presets", "list mode presets and kernel plan pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << nlohmann::json{{"error", {{"code", "UsageError"}, {"message", e.what()}}}}.dump() << "\n";
    return kExitConfig;
  }

  if (presets->parsed()) return cmd_presets(std::cout);

  RunConfig cfg;
  try {
    cfg = effective_config(f);
  } catch (const std::exception& e) {
    std::cerr << error_json(e).dump() << "\n";
    return kExitConfig;
  }

  if (run->parsed()) return cmd_run(cfg, f.out, std::cout, std::cerr);
  if (sweep->parsed()) return cmd_sweep(cfg, f.out, -1, std::cout, std::cerr);
  if (validate->parsed()) {
    AcceptanceOptions opts = acceptance_options(cfg);
    opts.enforce_runtime = !f.no_time_limits;
    return cmd_validate(opts, f.checks, std::cout);
  }
  return kExitConfig;
}
