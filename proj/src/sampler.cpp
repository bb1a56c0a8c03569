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

#include "rcsat/sampler.hpp"

#include <chrono>
#include <cmath>

#include "rcsat/errors.hpp"

namespace rcsat {

namespace {

// splitmix64; decorrelates the per-horizon streams so horizons stay
// independent of each other and of eta.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string Solution::bits_string() const {
  const std::size_t n = cycles > 0 ? bits.size() / cycles : 0;
  std::string s;
  s.reserve(bits.size() + cycles);
  for (int t = 0; t < cycles; ++t) {
    if (t) s += ' ';
    for (std::size_t k = 0; k < n; ++k) s += bits[t * n + k] ? '1' : '0';
  }
  return s;
}

std::string Solution::key() const {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
  return s;
}

std::vector<const Solution*> SolutionSet::all() const {
  std::vector<const Solution*> out;
  out.reserve(unique_count);
  for (const auto& [cc, sols] : buckets)
    for (const auto& s : sols) out.push_back(&s);
  return out;
}

BatchedVars gd_step(const BatchedVars& V, const BatchedVars& grads, double lr, double noise_std,
                    std::mt19937_64* rng) {
  if (grads.size() != V.size()) throw DimensionMismatchError("gradient horizon differs from V");
  if (lr <= 0.0) throw DimensionMismatchError("learning rate must be positive");
  BatchedVars out = V;
  std::normal_distribution<double> noise(0.0, noise_std);
  for (std::size_t t = 0; t < V.size(); ++t) {
    if (grads[t].rows != V[t].rows || grads[t].cols != V[t].cols)
      throw DimensionMismatchError("gradient shape differs from V");
    for (std::size_t i = 0; i < out[t].v.size(); ++i) {
      double g = grads[t].v[i];
      if (!std::isfinite(g)) throw NonFiniteGradientError("cycle " + std::to_string(t + 1));
      if (noise_std > 0.0 && rng) g += noise(*rng);
      out[t].v[i] -= lr * g;
    }
  }
  return out;
}

std::vector<Solution> extract_solutions(const BatchedVars& V, const SequentialCircuit& c,
                                        const OutputConstraint& cons, int cc, double threshold) {
  if (static_cast<int>(V.size()) != cc) throw DimensionMismatchError("V horizon must equal cc");
  const std::size_t b = V.empty() ? 0 : V[0].rows;

  std::vector<BitMatrix> rounded(cc, BitMatrix(b, c.n));
  for (int t = 0; t < cc; ++t)
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t k = 0; k < c.n; ++k)
        rounded[t].at(i, k) = sigmoid(V[t].at(i, k)) >= threshold ? 1 : 0;

  DiscreteTrace tr = simulate_discrete(c, rounded, BitMatrix(b, c.r, 0));
  const BitMatrix& y = tr.outputs[cc - 1];

  std::vector<Solution> out;
  for (std::size_t i = 0; i < b; ++i) {
    const std::uint8_t* tgt = cons.target.row(cons.target.rows == 1 ? 0 : i);
    bool ok = true;
    for (std::size_t k = 0; k < c.m && ok; ++k)
      if (cons.mask[k] && y.at(i, k) != tgt[k]) ok = false;
    if (!ok) continue;
    Solution s;
    s.cycles = cc;
    s.bits.resize(cc * c.n);
    for (int t = 0; t < cc; ++t)
      for (std::size_t k = 0; k < c.n; ++k) s.bits[t * c.n + k] = rounded[t].at(i, k);
    out.push_back(std::move(s));
  }
  return out;
}

void dedup_merge(SolutionSet& set, const std::vector<Solution>& sols) {
  for (const auto& s : sols) {
    set.valid++;
    if (!set.keys.emplace(s.cycles, s.key()).second) continue;
    set.buckets[s.cycles].push_back(s);
    set.unique_count++;
  }
}

SolutionSet run_backtracking(const SequentialCircuit& c, const OutputConstraint& cons,
                             const SamplerConfig& cfg, const std::atomic<bool>* stop) {
  if (cfg.min_cycles < 1 || cfg.eta < cfg.min_cycles)
    throw DimensionMismatchError("cycle bounds must satisfy 1 <= min_cycles <= eta");
  if (cfg.batch < 1) throw DimensionMismatchError("batch must be >= 1");
  if (cfg.threshold <= 0.0 || cfg.threshold >= 1.0)
    throw DimensionMismatchError("threshold must lie strictly inside (0,1)");

  const auto t0 = std::chrono::steady_clock::now();
  SolutionSet set;

  for (int cc = cfg.min_cycles; cc <= cfg.eta; ++cc) {
    std::mt19937_64 rng(mix64(cfg.seed ^ (0x5eedULL + static_cast<std::uint64_t>(cc))));
    std::uniform_real_distribution<double> init(-cfg.init_scale, cfg.init_scale);

    BatchedVars V(cc, Matrix(cfg.batch, c.n));
    for (auto& vt : V)
      for (auto& x : vt.v) x = init(rng);

    for (int j = 1; j <= cfg.iters; ++j) {
      if (stop && stop->load()) {
        set.interrupted = true;
        set.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return set;
      }
      auto P = sigmoid_embed(V);
      Trace tr = forward_relaxed(c, P, cfg.threads);
      BatchedVars grads = backward_bptt(c, tr, cons, V, static_cast<std::size_t>(cc), cfg.threads);
      V = gd_step(V, grads, cfg.lr, cfg.noise_std, &rng);
      if (cfg.decay > 0.0)
        for (auto& vt : V)
          for (auto& x : vt.v) x *= (1.0 - cfg.decay);

      auto sols = extract_solutions(V, c, cons, cc, cfg.threshold);
      set.attempts += static_cast<std::uint64_t>(cfg.batch);
      for (auto& s : sols) {
        s.first_found_iter = j;
        s.horizon = cc;
      }
      dedup_merge(set, sols);
    }
  }
  set.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return set;
}

}  // namespace rcsat
