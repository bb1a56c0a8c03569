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

#include <atomic>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rcsat/relaxed.hpp"

namespace rcsat {

struct SamplerConfig {
  int eta = 50;             // max clock cycles
  int min_cycles = 1;       // lower horizon bound
  int iters = 5;            // training iterations per horizon
  double lr = 50.0;         // gradient-descent step size
  int batch = 256;          // candidate rows per horizon
  double threshold = 0.5;   // rounding threshold for bit extraction; ties round to 1
  std::uint64_t seed = 1;
  double init_scale = 2.0;  // V ~ uniform[-init_scale, init_scale]
  double noise_std = 0.0;   // additive Gaussian noise on gradients, 0 = off
  double decay = 0.0;       // per-iteration multiplicative shrink of V toward 0, 0 = off
  int threads = 1;          // batch-row parallelism in the engine
};

/// A validated, discretized input sequence: simulating `bits` from the zero
/// state satisfies the constraint at cycle `cycles`.
struct Solution {
  int cycles = 0;
  std::vector<std::uint8_t> bits;  // cycles x n, cycle-major row layout
  int first_found_iter = 0;        // 1-based training iteration
  int horizon = 0;                 // outer-loop cycle count it was found at

  std::string bits_string() const;  // per-cycle 01 groups joined by spaces
  std::string key() const;          // dedup key over the flat bit string
};

struct SolutionSet {
  std::map<int, std::vector<Solution>> buckets;  // cycle count -> insertion order
  std::set<std::pair<int, std::string>> keys;    // (cycles, bits) uniqueness
  std::uint64_t attempts = 0;  // rounded candidate rows examined
  std::uint64_t valid = 0;     // rows that passed discrete validation (incl. duplicates)
  std::uint64_t unique_count = 0;
  double wall_seconds = 0.0;
  bool interrupted = false;

  std::vector<const Solution*> all() const;
};

/// One gradient-descent update V - lr * grad. When noise_std > 0 and an RNG
/// is supplied, Gaussian noise is added to the gradients before the update.
BatchedVars gd_step(const BatchedVars& V, const BatchedVars& grads, double lr,
                    double noise_std = 0.0, std::mt19937_64* rng = nullptr);

/// Rounds each batch row of V (sigmoid >= threshold -> 1), simulates it
/// discretely from the zero state for cc cycles and keeps the rows whose
/// masked outputs at cycle cc hit the target. Returned solutions carry exact
/// bits, never probabilities.
std::vector<Solution> extract_solutions(const BatchedVars& V, const SequentialCircuit& c,
                                        const OutputConstraint& cons, int cc, double threshold);

/// Inserts solutions not already present under the (cycles, bits) key,
/// keeping insertion order stable and updating the valid/unique counters.
void dedup_merge(SolutionSet& set, const std::vector<Solution>& sols);

/// Cycle-by-cycle backtracking: for each horizon cc in
/// [min_cycles, eta], train a fresh batch of candidate sequences by gradient
/// descent and harvest valid roundings after every iteration. Deterministic
/// for a fixed config (including seed). A set `stop` flag ends the run early
/// at the next iteration boundary, returning the partial set.
SolutionSet run_backtracking(const SequentialCircuit& c, const OutputConstraint& cons,
                             const SamplerConfig& cfg, const std::atomic<bool>* stop = nullptr);

}  // namespace rcsat
