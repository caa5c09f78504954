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
#include <string>

#include "versa/errors.hpp"
#include "versa/kernels.hpp"

namespace versa {
namespace {

std::vector<std::int32_t> chars(const std::string& s) { return {s.begin(), s.end()}; }

std::vector<std::uint32_t> naive_find(const std::vector<std::int32_t>& t, const std::vector<std::int32_t>& p) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i + p.size() <= t.size(); ++i)
    if (std::equal(p.begin(), p.end(), t.begin() + static_cast<std::ptrdiff_t>(i))) out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

TEST(Reference, KmpOverlappingMatches) {
  EXPECT_EQ(ref::kmp(chars("ababcabab"), chars("abab")), (std::vector<std::uint32_t>{0, 5}));
  EXPECT_EQ(ref::kmp(chars("aaaa"), chars("aa")), (std::vector<std::uint32_t>{0, 1, 2}));
  EXPECT_EQ(ref::kmp_failure(chars("abab")), (std::vector<std::int32_t>{0, 0, 1, 2}));
}

TEST(Reference, KmpAgreesWithNaiveSearch) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    KernelSpec s;
    s.kernel = KernelName::Kmp;
    s.size = 2048;
    s.seed = seed;
    const auto d = ref::kmp_inputs(s);
    EXPECT_EQ(ref::kmp(d.text, d.pattern), naive_find(d.text, d.pattern));
  }
}

TEST(Reference, GemmTimesIdentity) {
  const std::uint32_t n = 6;
  std::vector<float> a(n * n), eye(n * n, 0.0f);
  for (std::uint32_t i = 0; i < n * n; ++i) a[i] = static_cast<float>(i) * 0.5f - 3.0f;
  for (std::uint32_t i = 0; i < n; ++i) eye[i * n + i] = 1.0f;
  EXPECT_EQ(ref::gemm(a, eye, n, n, n), a);
  EXPECT_EQ(ref::gemm(eye, a, n, n, n), a);
}

TEST(Reference, GemmRectangular) {
  // [1 2 3; 4 5 6] x [1; 1; 1] = [6; 15]
  EXPECT_EQ(ref::gemm({1, 2, 3, 4, 5, 6}, {1, 1, 1}, 2, 3, 1), (std::vector<float>{6, 15}));
}

TEST(Reference, SpmvIdentity) {
  ref::Csr a;
  a.rows = a.cols = 5;
  for (std::uint32_t i = 0; i < 5; ++i) {
    a.row_ptr.push_back(i);
    a.col.push_back(i);
    a.val.push_back(1.0f);
  }
  a.row_ptr.push_back(5);
  const std::vector<float> x{1.5f, -2, 0, 7, 3};
  EXPECT_EQ(ref::spmv(a, x), x);
}

TEST(Reference, StencilOfConstantGridIsWeightSum) {
  const std::uint32_t n = 5;
  const std::vector<float> grid(n * n, 2.0f);
  const std::vector<float> w{1, 0, 0, 0, 1, 0, 0, 0, 1};
  const auto out = ref::stencil(grid, n, w);
  ASSERT_EQ(out.size(), 9u);
  for (float v : out) EXPECT_EQ(v, 6.0f);
}

TEST(Reference, StencilIdentityWeightsCropBorder) {
  const std::uint32_t n = 4;
  std::vector<float> grid(n * n);
  for (std::uint32_t i = 0; i < n * n; ++i) grid[i] = static_cast<float>(i);
  const auto out = ref::stencil(grid, n, {0, 0, 0, 0, 1, 0, 0, 0, 0});
  EXPECT_EQ(out, (std::vector<float>{5, 6, 9, 10}));
}

TEST(Reference, MergesortMatchesStdSort) {
  KernelSpec s;
  s.kernel = KernelName::Mergesort;
  s.size = 1000;
  auto v = ref::mergesort_inputs(s);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(ref::mergesort(v), sorted);
}

TEST(Reference, InputsDependOnSeed) {
  KernelSpec a;
  KernelSpec b;
  b.seed = 2;
  EXPECT_EQ(ref::gemm_inputs(a).a, ref::gemm_inputs(a).a);
  EXPECT_NE(ref::gemm_inputs(a).a, ref::gemm_inputs(b).a);
}

TEST(Registry, Names) {
  for (KernelName k : all_kernels()) EXPECT_EQ(kernel_from_name(kernel_name(k)), k);
  EXPECT_FALSE(kernel_from_name("fft").has_value());
  for (KernelName k : all_kernels()) {
    const auto [a, b] = kernel_plans(k);
    EXPECT_TRUE(plan_supported(k, a));
    EXPECT_TRUE(plan_supported(k, b));
  }
}

TEST(Registry, RepeatOnlyForStencil) {
  KernelSpec s;
  s.repeat = 2;
  EXPECT_THROW(validate_kernel(s, ChipGeometry{}), Error);
  s.kernel = KernelName::Stencil2d;
  s.size = 10;
  EXPECT_NO_THROW(validate_kernel(s, ChipGeometry{}));
  s.repeat = 0;
  EXPECT_THROW(validate_kernel(s, ChipGeometry{}), Error);
}

TEST(Registry, UnsupportedPlan) {
  KernelSpec s;
  s.kernel = KernelName::Kmp;
  s.size = 512;
  Preset bad = Preset::SharedCache;
  bool found = false;
  for (Preset p : all_presets())
    if (!plan_supported(KernelName::Kmp, p)) {
      bad = p;
      found = true;
      break;
    }
  if (!found) GTEST_SKIP() << "kmp supports every plan";
  try {
    run_kernel(s, bad, ChipGeometry{}, SimOptions{}, DvfsPoint{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PlanUnsupported);
  }
}

struct KernelCase {
  KernelName kernel;
  std::uint32_t size;
};

void PrintTo(const KernelCase& c, std::ostream* os) { *os << kernel_name(c.kernel) << "/" << c.size; }

class KernelRunTest : public ::testing::TestWithParam<KernelCase> {};

TEST_P(KernelRunTest, BothPlansMatchReference) {
  KernelSpec s;
  s.kernel = GetParam().kernel;
  s.size = GetParam().size;
  const auto [a, b] = kernel_plans(s.kernel);
  for (Preset p : {a, b}) {
    const KernelRun r = run_kernel(s, p, ChipGeometry{}, SimOptions{}, DvfsPoint{});
    EXPECT_TRUE(r.output_match) << preset_name(p) << ": " << r.mismatch;
    EXPECT_TRUE(r.flops_match) << preset_name(p);
    EXPECT_TRUE(r.stats.accounting_closes()) << preset_name(p);
    EXPECT_GT(r.stats.cycles, 0u);
  }
}

INSTANTIATE_TEST_SUITE_P(Kernels, KernelRunTest,
                         ::testing::Values(KernelCase{KernelName::Gemm, 8}, KernelCase{KernelName::Stencil2d, 10},
                                           KernelCase{KernelName::Spmv, 64}, KernelCase{KernelName::Kmp, 512},
                                           KernelCase{KernelName::Mergesort, 1024}),
                         [](const auto& info) { return std::string(kernel_name(info.param.kernel)); });

}  // namespace
}  // namespace versa
