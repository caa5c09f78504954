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

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "versa/cli/commands.hpp"
#include "versa/cli/config.hpp"
#include "versa/errors.hpp"

namespace versa::cli {
namespace {

ErrorCode parse_error(std::string_view text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << text;
  return ErrorCode::IllegalOp;
}

TEST(Config, EmptyObjectIsDefaults) { EXPECT_EQ(parse_config("{}"), RunConfig{}); }

TEST(Config, RoundTrip) {
  RunConfig c;
  c.geometry.next_level_latency = 30;
  c.timing.gspm = 7;
  c.plan = Preset::PrivateSpmR2r;
  c.kernel.kernel = KernelName::Stencil2d;
  c.kernel.size = 34;
  c.kernel.repeat = 4;
  c.energy.flop = 2.25;
  c.vdd = 0.8;
  c.seed = 99;
  c.strict_dirty = false;
  c.output.csv = "out.csv";
  c.sweep.sizes = {10, 18};
  c.sweep.vdds = {0.6, 1.0};
  c.sweep.jobs = 3;
  EXPECT_EQ(parse_config(serialize(c)), c);
  EXPECT_EQ(parse_config(serialize(RunConfig{})), RunConfig{});
}

TEST(Config, RejectsUnknownKeys) {
  EXPECT_EQ(parse_error(R"({"geometry": {"n_tile": 4}})"), ErrorCode::ConfigError);
  EXPECT_EQ(parse_error(R"({"colour": 1})"), ErrorCode::ConfigError);
}

TEST(Config, RejectsWrongTypes) {
  EXPECT_EQ(parse_error(R"({"seed": "one"})"), ErrorCode::ConfigError);
  EXPECT_EQ(parse_error(R"({"geometry": {"tile_grid": [2]}})"), ErrorCode::ConfigError);
}

TEST(Config, RejectsComments) { EXPECT_EQ(parse_error("{ // no\n}"), ErrorCode::ConfigError); }

TEST(Config, RejectsBadWorkerCount) {
  EXPECT_EQ(parse_error(R"({"geometry": {"workers_per_tile": 7}})"), ErrorCode::ConfigError);
}

TEST(Config, RejectsUnknownNames) {
  EXPECT_EQ(parse_error(R"({"plan": "ring_cache"})"), ErrorCode::ConfigError);
  EXPECT_EQ(parse_error(R"({"kernel": {"name": "fft"}})"), ErrorCode::ConfigError);
  EXPECT_EQ(parse_error(R"({"energy": {"dram": 1.0}})"), ErrorCode::ConfigError);
}

TEST(Config, SeedReachesKernel) {
  const RunConfig c = parse_config(R"({"seed": 5})");
  EXPECT_EQ(c.kernel_spec().seed, 5u);
}

TEST(Config, DefaultPlanIsKernelPairHead) {
  const RunConfig c = parse_config(R"({"kernel": {"name": "spmv", "size": 64}})");
  EXPECT_EQ(c.effective_plan(), kernel_plans(KernelName::Spmv).first);
}

TEST(Commands, SummaryPath) {
  EXPECT_EQ(summary_path_for("a/b.csv"), "a/b.summary.json");
  EXPECT_EQ(summary_path_for("table"), "table.summary.json");
  EXPECT_EQ(summary_path_for(""), "");
}

TEST(Commands, ErrorJson) {
  const auto j = error_json(Error(ErrorCode::Deadlock, "stuck"));
  EXPECT_EQ(j["error"]["code"], "Deadlock");
  EXPECT_EQ(j["error"]["message"], "stuck");
}

TEST(Commands, RunWritesStatRecord) {
  RunConfig c;
  c.kernel.size = 8;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(c, "", out, err), kExitOk) << err.str();
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["kernel"], "gemm");
  EXPECT_EQ(j["output_match"], true);
  EXPECT_EQ(j["config"]["kernel"]["size"], 8);
}

TEST(Commands, RunReportsSimulationFailure) {
  RunConfig c;
  c.kernel.size = 8;
  c.cycle_limit = 10;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(c, "", out, err), kExitFailed);
  EXPECT_EQ(nlohmann::json::parse(err.str())["error"]["code"], "CycleLimitExceeded");
}

TEST(Commands, SweepIsIndependentOfJobs) {
  RunConfig c;
  c.sweep.sizes = {8, 12};
  c.sweep.vdds = {0.6, 1.0};
  std::ostringstream o1, e1, o2, e2;
  ASSERT_EQ(cmd_sweep(c, "", 1, o1, e1), kExitOk);
  ASSERT_EQ(cmd_sweep(c, "", 2, o2, e2), kExitOk);
  EXPECT_EQ(o1.str(), o2.str());
  EXPECT_EQ(e1.str(), e2.str());
  // header + 2 sizes x 2 plans x 2 voltages
  const std::string csv = o1.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
}

TEST(Commands, PresetsListsEveryPreset) {
  std::ostringstream out;
  ASSERT_EQ(cmd_presets(out), kExitOk);
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["presets"].size(), all_presets().size());
  EXPECT_EQ(j["kernels"].size(), all_kernels().size());
}

TEST(Commands, ValidateSingleCheck) {
  std::ostringstream out;
  EXPECT_EQ(cmd_validate(AcceptanceOptions{}, {1}, out), kExitOk);
  EXPECT_NE(out.str().find("[PASS] 1"), std::string::npos);
}

TEST(Commands, ValidateDetectsWrongTiming) {
  AcceptanceOptions o;
  o.timing.private_spm = 3;
  std::ostringstream out;
  EXPECT_EQ(cmd_validate(o, {1}, out), kExitFailed);
  EXPECT_NE(out.str().find("[FAIL] 1"), std::string::npos);
}

}  // namespace
}  // namespace versa::cli
