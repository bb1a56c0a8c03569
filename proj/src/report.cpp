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

#include "rcsat/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rcsat/errors.hpp"

namespace rcsat {

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["config"] = config;
  nlohmann::json per_cc = nlohmann::json::object();
  for (const auto& [cc, count] : unique_per_cycle) per_cc[std::to_string(cc)] = count;
  j["unique_per_cycle"] = per_cc;
  j["cumulative_unique_per_iteration"] = cumulative_unique_per_iteration;
  j["attempts"] = attempts;
  j["valid"] = valid;
  j["unique_total"] = unique_total;
  j["wall_seconds"] = wall_seconds;
  j["throughput"] = throughput;
  j["no_solutions"] = no_solutions;
  j["interrupted"] = interrupted;
  return j;
}

RunReport make_report(const SolutionSet& set, nlohmann::json config, int iters, int min_cycles,
                      int eta) {
  RunReport rep;
  rep.config = std::move(config);
  for (int cc = min_cycles; cc <= eta; ++cc) rep.unique_per_cycle[cc] = 0;
  for (const auto& [cc, sols] : set.buckets)
    if (!sols.empty()) rep.unique_per_cycle[cc] = sols.size();
  rep.cumulative_unique_per_iteration.assign(static_cast<std::size_t>(iters > 0 ? iters : 0), 0);
  for (const Solution* s : set.all()) {
    for (int j = s->first_found_iter; j <= iters; ++j)
      rep.cumulative_unique_per_iteration[static_cast<std::size_t>(j - 1)]++;
  }
  rep.attempts = set.attempts;
  rep.valid = set.valid;
  rep.unique_total = set.unique_count;
  rep.wall_seconds = set.wall_seconds;
  rep.throughput = set.wall_seconds > 0.0 ? static_cast<double>(set.unique_count) / set.wall_seconds : 0.0;
  rep.no_solutions = set.unique_count == 0;
  rep.interrupted = set.interrupted;
  return rep;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + tmp);
    f << content;
    if (!f) throw IoError("failed writing: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw IoError("cannot rename into place: " + path);
}

std::string solutions_to_text(const SolutionSet& set) {
  std::ostringstream out;
  for (const Solution* s : set.all()) out << s->cycles << " " << s->bits_string() << "\n";
  return out.str();
}

std::string per_cycle_csv(const RunReport& report) {
  std::ostringstream out;
  out << "cycle_count,unique_solutions\n";
  for (const auto& [cc, count] : report.unique_per_cycle) out << cc << "," << count << "\n";
  return out.str();
}

std::string per_iteration_csv(const RunReport& report) {
  std::ostringstream out;
  out << "iteration,cumulative_unique\n";
  for (std::size_t j = 0; j < report.cumulative_unique_per_iteration.size(); ++j)
    out << (j + 1) << "," << report.cumulative_unique_per_iteration[j] << "\n";
  return out.str();
}

}  // namespace rcsat
