/*
 * Copyright 2026 The rcsat Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcsat/sampler.hpp"

namespace rcsat {

/// Summary of a sampling run: configuration echo, per-cycle-count unique
/// solution counts, the cumulative unique count after each training
/// iteration, and the wall-clock throughput (unique solutions per second).
struct RunReport {
  nlohmann::json config;
  std::map<int, std::uint64_t> unique_per_cycle;
  std::vector<std::uint64_t> cumulative_unique_per_iteration;
  std::uint64_t attempts = 0;
  std::uint64_t valid = 0;
  std::uint64_t unique_total = 0;
  double wall_seconds = 0.0;
  double throughput = 0.0;
  bool no_solutions = false;
  bool interrupted = false;

  nlohmann::json to_json() const;
};

/// Buckets without solutions inside [min_cycles, eta] appear with count 0.
RunReport make_report(const SolutionSet& set, nlohmann::json config, int iters, int min_cycles,
                      int eta);

/// Write-then-rename so readers never observe a partial file.
void write_text_atomic(const std::string& path, const std::string& content);

std::string solutions_to_text(const SolutionSet& set);
std::string per_cycle_csv(const RunReport& report);
std::string per_iteration_csv(const RunReport& report);

}  // namespace rcsat
