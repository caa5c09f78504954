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

#include <algorithm>
#include <set>

#include "versa/kernels.hpp"

namespace versa::ref {

namespace {

std::uint64_t splitmix(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t stream(const KernelSpec& spec, std::uint64_t salt) {
  return spec.seed * 0x2545F4914F6CDD1Dull ^ salt;
}

std::vector<float> floats(std::uint64_t& s, std::size_t n) {
  std::vector<float> v(n);
  for (auto& x : v) x = unit_float(s);
  return v;
}

void merge_into(std::vector<std::int32_t>& v, std::vector<std::int32_t>& tmp, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return;
  const std::size_t mid = lo + (hi - lo) / 2;
  merge_into(v, tmp, lo, mid);
  merge_into(v, tmp, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) tmp[k++] = v[j] < v[i] ? v[j++] : v[i++];
  while (i < mid) tmp[k++] = v[i++];
  while (j < hi) tmp[k++] = v[j++];
  std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo), tmp.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
}

}  // namespace

float unit_float(std::uint64_t& state) {
  const auto bits = static_cast<std::int32_t>(splitmix(state) >> 40);  // 24 bits
  return static_cast<float>(bits) / 8388608.0f - 1.0f;
}

GemmData gemm_inputs(const KernelSpec& spec) {
  GemmData d;
  d.n = spec.size;
  std::uint64_t s = stream(spec, 0x6e6d);
  const std::size_t nn = static_cast<std::size_t>(spec.size) * spec.size;
  d.a = floats(s, nn);
  d.b = floats(s, nn);
  return d;
}

std::vector<float> gemm(const std::vector<float>& a, const std::vector<float>& b, std::uint32_t m,
                        std::uint32_t k, std::uint32_t n) {
  std::vector<float> c(static_cast<std::size_t>(m) * n);
  for (std::uint32_t i = 0; i < m; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      float acc = 0.0f;
      for (std::uint32_t p = 0; p < k; ++p)
        acc = acc + a[static_cast<std::size_t>(i) * k + p] * b[static_cast<std::size_t>(p) * n + j];
      c[static_cast<std::size_t>(i) * n + j] = acc;
    }
  return c;
}

StencilData stencil_inputs(const KernelSpec& spec) {
  StencilData d;
  d.n = spec.size;
  std::uint64_t s = stream(spec, 0x57e1);
  d.weights = floats(s, 9);
  d.grid = floats(s, static_cast<std::size_t>(spec.size) * spec.size);
  return d;
}

std::vector<float> stencil(const std::vector<float>& grid, std::uint32_t n, const std::vector<float>& w) {
  if (n < 3) return {};
  const std::uint32_t m = n - 2;
  std::vector<float> out(static_cast<std::size_t>(m) * m);
  for (std::uint32_t i = 0; i < m; ++i)
    for (std::uint32_t j = 0; j < m; ++j) {
      float acc = 0.0f;
      for (std::uint32_t di = 0; di < 3; ++di)
        for (std::uint32_t dj = 0; dj < 3; ++dj)
          acc = acc + w[di * 3 + dj] * grid[static_cast<std::size_t>(i + di) * n + j + dj];
      out[static_cast<std::size_t>(i) * m + j] = acc;
    }
  return out;
}

SpmvData spmv_inputs(const KernelSpec& spec) {
  SpmvData d;
  const std::uint32_t n = spec.size;
  const std::uint32_t k = std::min(spec.nnz_per_row, n);
  std::uint64_t s = stream(spec, 0x5b3f);
  d.a.rows = d.a.cols = n;
  d.a.row_ptr.push_back(0);
  for (std::uint32_t r = 0; r < n; ++r) {
    std::set<std::uint32_t> cols;
    while (cols.size() < k) cols.insert(static_cast<std::uint32_t>(splitmix(s) % n));
    for (auto c : cols) {
      d.a.col.push_back(c);
      d.a.val.push_back(unit_float(s));
    }
    d.a.row_ptr.push_back(static_cast<std::uint32_t>(d.a.col.size()));
  }
  d.x = floats(s, n);
  return d;
}

std::vector<float> spmv(const Csr& a, const std::vector<float>& x) {
  std::vector<float> y(a.rows);
  for (std::uint32_t r = 0; r < a.rows; ++r) {
    float acc = 0.0f;
    for (std::uint32_t e = a.row_ptr[r]; e < a.row_ptr[r + 1]; ++e) acc = acc + a.val[e] * x[a.col[e]];
    y[r] = acc;
  }
  return y;
}

KmpData kmp_inputs(const KernelSpec& spec) {
  KmpData d;
  std::uint64_t s = stream(spec, 0x4b4d);
  const std::uint64_t alpha = std::max<std::uint32_t>(1, spec.alphabet);
  d.pattern.resize(spec.pattern_len);
  for (auto& c : d.pattern) c = static_cast<std::int32_t>(splitmix(s) % alpha);
  d.text.resize(spec.size);
  for (auto& c : d.text) c = static_cast<std::int32_t>(splitmix(s) % alpha);
  return d;
}

std::vector<std::int32_t> kmp_failure(const std::vector<std::int32_t>& p) {
  std::vector<std::int32_t> f(p.size(), 0);
  std::int32_t k = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    while (k > 0 && p[static_cast<std::size_t>(k)] != p[i]) k = f[static_cast<std::size_t>(k - 1)];
    if (p[static_cast<std::size_t>(k)] == p[i]) ++k;
    f[i] = k;
  }
  return f;
}

std::vector<std::uint32_t> kmp(const std::vector<std::int32_t>& text, const std::vector<std::int32_t>& pattern) {
  std::vector<std::uint32_t> out;
  if (pattern.empty() || pattern.size() > text.size()) return out;
  const auto f = kmp_failure(pattern);
  const auto m = static_cast<std::int32_t>(pattern.size());
  std::int32_t q = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    while (q > 0 && pattern[static_cast<std::size_t>(q)] != text[i]) q = f[static_cast<std::size_t>(q - 1)];
    if (pattern[static_cast<std::size_t>(q)] == text[i]) ++q;
    if (q == m) {
      out.push_back(static_cast<std::uint32_t>(i + 1 - pattern.size()));
      q = f[static_cast<std::size_t>(q - 1)];
    }
  }
  return out;
}

std::vector<std::int32_t> mergesort_inputs(const KernelSpec& spec) {
  std::uint64_t s = stream(spec, 0x3e65);
  std::vector<std::int32_t> v(spec.size);
  for (auto& x : v) x = static_cast<std::int32_t>(static_cast<std::uint32_t>(splitmix(s) >> 32));
  return v;
}

std::vector<std::int32_t> mergesort(std::vector<std::int32_t> v) {
  std::vector<std::int32_t> tmp(v.size());
  merge_into(v, tmp, 0, v.size());
  return v;
}

}  // namespace versa::ref
