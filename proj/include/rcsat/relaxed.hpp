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

#include <cstddef>
#include <span>
#include <vector>

#include "rcsat/circuit.hpp"

namespace rcsat {

/// Dense row-major double matrix. Used both for unconstrained variables
/// (logits) and for probability tensors, which carry the additional [0,1]
/// range contract enforced at the engine boundaries.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> v;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), v(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
  double* row(std::size_t r) { return v.data() + r * cols; }
  const double* row(std::size_t r) const { return v.data() + r * cols; }

  bool operator==(const Matrix& o) const = default;
};

/// Per-cycle learnable logits V_t (and their gradients): T matrices of shape
/// batch x n.
using BatchedVars = std::vector<Matrix>;

/// Elementwise logistic sigmoid per cycle, mapping logits to probabilities in
/// (0,1). Throws NonFiniteInputError on NaN/Inf entries.
std::vector<Matrix> sigmoid_embed(const BatchedVars& V);

double sigmoid(double v);

/// Probability of a gate's output given fan-in probabilities in [0,1]:
///   NOT 1-p        BUF p
///   AND prod p_i   NAND 1-prod p_i
///   OR 1-prod(1-p_i)  NOR prod(1-p_i)
///   XOR (1-p1)p2 + p1(1-p2)   XNOR p1 p2 + (1-p1)(1-p2)
/// On binary fan-ins this coincides with the Boolean gate. Values outside
/// [0,1] by more than 1e-12 raise DomainError; closer ones are snapped.
double gate_prob(GateOp op, std::span<const double> fanin);

/// Partial derivatives of gate_prob w.r.t. each fan-in, written to
/// `partials` (same length as `fanin`). N-ary product gates use a
/// division-free left/right partial-product sweep.
void gate_grad(GateOp op, std::span<const double> fanin, std::span<double> partials);

std::vector<double> gate_grad(GateOp op, std::span<const double> fanin);

/// Partial target valuation over primary outputs. `target` is batch x m or
/// broadcastable 1 x m; `mask[k]` marks output k as constrained (at least one
/// entry must be set).
struct OutputConstraint {
  BitMatrix target;
  std::vector<std::uint8_t> mask;
};

/// Stored activations of a relaxed forward pass: everything needed for the
/// reverse sweep without recomputation.
struct Trace {
  std::size_t horizon = 0;  // T
  std::size_t batch = 0;
  std::vector<Matrix> acts;     // T matrices, batch x num_signals
  std::vector<Matrix> outputs;  // T matrices, batch x m
  std::vector<Matrix> states;   // T+1 matrices, batch x r
};

/// Evaluates the circuit under the probability model for P.size() cycles
/// starting from state h0. On all-binary inputs the trace equals
/// simulate_discrete bit for bit. Batch rows are independent; `threads` > 1
/// splits them into ranges with results identical to sequential evaluation.
Trace forward_relaxed(const SequentialCircuit& c, const std::vector<Matrix>& P, const Matrix& h0,
                      int threads = 1);

/// Zero initial state.
Trace forward_relaxed(const SequentialCircuit& c, const std::vector<Matrix>& P, int threads = 1);

struct LossResult {
  double total = 0.0;
  std::vector<double> per_row;
};

/// Squared error between the trace outputs at the given cycle (1-based) and
/// the constrained targets, summed over batch rows and masked outputs.
LossResult loss(const Trace& trace, const OutputConstraint& cons, std::size_t cycle);

/// Reverse-mode sweep from `cycle` back to cycle 1, returning dL/dV_t for
/// every cycle of the horizon (zeros after `cycle`). Adjoints flow through
/// gates via gate_grad, across cycles through the state slots, and through
/// the sigmoid via p(1-p). `trace` must come from forward_relaxed on
/// sigmoid_embed(V).
BatchedVars backward_bptt(const SequentialCircuit& c, const Trace& trace,
                          const OutputConstraint& cons, const BatchedVars& V, std::size_t cycle,
                          int threads = 1);

/// Loss taken at the final cycle of the trace.
BatchedVars backward_bptt(const SequentialCircuit& c, const Trace& trace,
                          const OutputConstraint& cons, const BatchedVars& V, int threads = 1);

}  // namespace rcsat
