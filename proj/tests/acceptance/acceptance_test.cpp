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

// Runs criteria 1-10 of the built-in acceptance suite with default parameters
// and prints one line per criterion. Exits nonzero if any check fails.

#include <iostream>

#include "versa/cli/acceptance.hpp"

int main() {
  const versa::cli::AcceptanceOptions opts;
  int failed = 0;
  for (int id = 1; id <= versa::cli::kCriteriaCount; ++id) {
    const auto r = versa::cli::run_criterion(id, opts);
    std::cout << versa::cli::format_check(r) << std::endl;
    if (!r.passed) ++failed;
  }
  std::cout << (failed ? "acceptance: FAILED (" + std::to_string(failed) + " of 10)" : std::string("acceptance: all 10 passed"))
            << std::endl;
  return failed ? 1 : 0;
}
