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

#include "rcsat/relaxed.hpp"

#include <cmath>
#include <thread>

#include "rcsat/errors.hpp"

namespace rcsat {

namespace {

constexpr double kRangeSlack = 1e-12;

// Snap values within kRangeSlack of [0,1] onto the interval; anything further
// out is a caller bug that must not be hidden by clamping.
double checked_unit(double p, const char* what) {
  if (std::isnan(p) || p < -kRangeSlack || p > 1.0 + kRangeSlack)
    throw DomainError(std::string(what) + " value outside [0,1]: " + std::to_string(p));
  if (p < 0.0) return 0.0;
  if (p > 1.0) return 1.0;
  return p;
}

// Clamp rounding overshoot of a gate output back into [0,1].
inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

// Unchecked probability kernels; the engine guarantees fan-ins in [0,1].
inline double prob_kernel(GateOp op, const double* p, std::size_t k) {
  switch (op) {
    case GateOp::Not: return 1.0 - p[0];
    case GateOp::Buf: return p[0];
    case GateOp::And: {
      double acc = 1.0;
      for (std::size_t i = 0; i < k; ++i) acc *= p[i];
      return acc;
    }
    case GateOp::Nand: {
      double acc = 1.0;
      for (std::size_t i = 0; i < k; ++i) acc *= p[i];
      return 1.0 - acc;
    }
    case GateOp::Or: {
      double acc = 1.0;
      for (std::size_t i = 0; i < k; ++i) acc *= (1.0 - p[i]);
      return 1.0 - acc;
    }
    case GateOp::Nor: {
      double acc = 1.0;
      for (std::size_t i = 0; i < k; ++i) acc *= (1.0 - p[i]);
      return acc;
    }
    case GateOp::Xor: return clamp01((1.0 - p[0]) * p[1] + p[0] * (1.0 - p[1]));
    case GateOp::Xnor: return clamp01(p[0] * p[1] + (1.0 - p[0]) * (1.0 - p[1]));
  }
  return 0.0;
}

// Writes d(gate)/d(p_i) into partials. Product gates use left/right partial
// products so zero-valued fan-ins never force a 0/0.
inline void grad_kernel(GateOp op, const double* p, std::size_t k, double* partials,
                        std::vector<double>& scratch) {
  switch (op) {
    case GateOp::Not: partials[0] = -1.0; return;
    case GateOp::Buf: partials[0] = 1.0; return;
    case GateOp::Xor:
      partials[0] = 1.0 - 2.0 * p[1];
      partials[1] = 1.0 - 2.0 * p[0];
      return;
    case GateOp::Xnor:
      partials[0] = 2.0 * p[1] - 1.0;
      partials[1] = 2.0 * p[0] - 1.0;
      return;
    default: break;
  }
  // AND/NAND differentiate prod(p_i); OR/NOR differentiate prod(1-p_i).
  const bool complement = (op == GateOp::Or || op == GateOp::Nor);
  const double sign = (op == GateOp::And || op == GateOp::Nor) ? 1.0 : -1.0;
  scratch.resize(k + 1);
  scratch[0] = 1.0;  // prefix products
  for (std::size_t i = 0; i < k; ++i) {
    double x = complement ? 1.0 - p[i] : p[i];
    scratch[i + 1] = scratch[i] * x;
  }
  double suffix = 1.0;
  for (std::size_t i = k; i-- > 0;) {
    double base = scratch[i] * suffix;  // prod over j != i
    partials[i] = complement ? -sign * base : sign * base;
    double x = complement ? 1.0 - p[i] : p[i];
    suffix *= x;
  }
}

void check_arity(GateOp op, std::size_t k) {
  if (gate_op_is_unary(op)) {
    if (k != 1) throw ArityError(std::string(gate_op_name(op)) + " takes 1 input, got " + std::to_string(k));
  } else if (op == GateOp::Xor || op == GateOp::Xnor) {
    if (k != 2) throw ArityError(std::string(gate_op_name(op)) + " takes 2 inputs, got " + std::to_string(k));
  } else if (k < 2) {
    throw ArityError(std::string(gate_op_name(op)) + " takes >= 2 inputs, got " + std::to_string(k));
  }
}

// Splits [0, rows) into contiguous ranges and runs fn on each, in parallel
// when threads > 1. Rows are independent so the partition cannot change
// results.
template <typename Fn>
void for_row_ranges(std::size_t rows, int threads, Fn&& fn) {
  int nt = threads < 1 ? 1 : threads;
  if (nt == 1 || rows <= 1) {
    fn(std::size_t{0}, rows);
    return;
  }
  nt = static_cast<int>(std::min<std::size_t>(nt, rows));
  std::vector<std::thread> pool;
  pool.reserve(nt);
  std::size_t chunk = (rows + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    std::size_t lo = t * chunk;
    std::size_t hi = std::min(rows, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

std::vector<Matrix> sigmoid_embed(const BatchedVars& V) {
  std::vector<Matrix> P;
  P.reserve(V.size());
  for (const auto& vt : V) {
    Matrix pt(vt.rows, vt.cols);
    for (std::size_t i = 0; i < vt.v.size(); ++i) {
      if (!std::isfinite(vt.v[i])) throw NonFiniteInputError("logit at flat index " + std::to_string(i));
      pt.v[i] = sigmoid(vt.v[i]);
    }
    P.push_back(std::move(pt));
  }
  return P;
}

double gate_prob(GateOp op, std::span<const double> fanin) {
  check_arity(op, fanin.size());
  std::vector<double> p(fanin.size());
  for (std::size_t i = 0; i < fanin.size(); ++i) p[i] = checked_unit(fanin[i], "fanin");
  return clamp01(prob_kernel(op, p.data(), p.size()));
}

void gate_grad(GateOp op, std::span<const double> fanin, std::span<double> partials) {
  check_arity(op, fanin.size());
  if (partials.size() != fanin.size()) throw ArityError("partials span size must match fanin size");
  std::vector<double> p(fanin.size());
  for (std::size_t i = 0; i < fanin.size(); ++i) p[i] = checked_unit(fanin[i], "fanin");
  std::vector<double> scratch;
  grad_kernel(op, p.data(), p.size(), partials.data(), scratch);
}

std::vector<double> gate_grad(GateOp op, std::span<const double> fanin) {
  std::vector<double> out(fanin.size());
  gate_grad(op, fanin, out);
  return out;
}

Trace forward_relaxed(const SequentialCircuit& c, const std::vector<Matrix>& P, const Matrix& h0,
                      int threads) {
  const std::size_t T = P.size();
  const std::size_t b = T > 0 ? P[0].rows : h0.rows;
  if (h0.rows != b || h0.cols != c.r)
    throw DimensionMismatchError("h0 must be batch x " + std::to_string(c.r));
  for (const auto& pt : P)
    if (pt.rows != b || pt.cols != c.n)
      throw DimensionMismatchError("each probability matrix must be batch x " + std::to_string(c.n));

  Trace tr;
  tr.horizon = T;
  tr.batch = b;
  tr.acts.assign(T, Matrix(b, c.num_signals));
  tr.outputs.assign(T, Matrix(b, c.m));
  tr.states.assign(T + 1, Matrix(b, c.r));
  tr.states[0] = h0;
  for (auto& x : tr.states[0].v) x = checked_unit(x, "h0");

  for_row_ranges(b, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> vals;
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t t = 0; t < T; ++t) {
        double* act = tr.acts[t].row(i);
        const double* in_row = P[t].row(i);
        const double* st_row = tr.states[t].row(i);
        for (std::size_t k = 0; k < c.n; ++k) act[c.input_slots[k]] = checked_unit(in_row[k], "input");
        for (std::size_t k = 0; k < c.r; ++k) act[c.dff_out_slots[k]] = st_row[k];
        for (int gi : c.topo_order) {
          const auto& g = c.gates[gi];
          vals.resize(g.fanin.size());
          for (std::size_t k = 0; k < g.fanin.size(); ++k) vals[k] = act[g.fanin[k]];
          act[g.out] = clamp01(prob_kernel(g.op, vals.data(), vals.size()));
        }
        double* out_row = tr.outputs[t].row(i);
        double* next_row = tr.states[t + 1].row(i);
        for (std::size_t k = 0; k < c.m; ++k) out_row[k] = act[c.output_slots[k]];
        for (std::size_t k = 0; k < c.r; ++k) next_row[k] = act[c.dff_in_slots[k]];
      }
    }
  });
  return tr;
}

Trace forward_relaxed(const SequentialCircuit& c, const std::vector<Matrix>& P, int threads) {
  const std::size_t b = P.empty() ? 1 : P[0].rows;
  return forward_relaxed(c, P, Matrix(b, c.r, 0.0), threads);
}

namespace {

void check_constraint(const OutputConstraint& cons, std::size_t b, std::size_t m) {
  if (cons.mask.size() != m) throw DimensionMismatchError("mask must have one entry per output");
  bool any = false;
  for (auto x : cons.mask) any = any || x;
  if (!any) throw DimensionMismatchError("constraint mask is empty");
  if (cons.target.cols != m) throw DimensionMismatchError("target must have m columns");
  if (cons.target.rows != 1 && cons.target.rows != b)
    throw DimensionMismatchError("target must have 1 or batch rows");
}

}  // namespace

LossResult loss(const Trace& trace, const OutputConstraint& cons, std::size_t cycle) {
  if (cycle < 1 || cycle > trace.horizon) throw DimensionMismatchError("loss cycle outside trace horizon");
  const Matrix& y = trace.outputs[cycle - 1];
  check_constraint(cons, trace.batch, y.cols);

  LossResult res;
  res.per_row.assign(trace.batch, 0.0);
  for (std::size_t i = 0; i < trace.batch; ++i) {
    const std::uint8_t* tgt = cons.target.row(cons.target.rows == 1 ? 0 : i);
    double acc = 0.0;
    for (std::size_t k = 0; k < y.cols; ++k) {
      if (!cons.mask[k]) continue;
      double d = static_cast<double>(tgt[k]) - y.at(i, k);
      acc += d * d;
    }
    res.per_row[i] = acc;
    res.total += acc;
  }
  return res;
}

BatchedVars backward_bptt(const SequentialCircuit& c, const Trace& trace,
                          const OutputConstraint& cons, const BatchedVars& V, std::size_t cycle,
                          int threads) {
  if (V.size() != trace.horizon)
    throw TraceMismatchError("V horizon " + std::to_string(V.size()) + " vs trace horizon " +
                             std::to_string(trace.horizon));
  for (const auto& vt : V)
    if (vt.rows != trace.batch || vt.cols != c.n)
      throw TraceMismatchError("V matrices must be batch x n");
  if (!trace.acts.empty() && trace.acts[0].cols != c.num_signals)
    throw TraceMismatchError("trace activations do not match circuit");
  if (cycle < 1 || cycle > trace.horizon) throw DimensionMismatchError("loss cycle outside trace horizon");
  check_constraint(cons, trace.batch, c.m);

  const std::size_t T = trace.horizon;
  BatchedVars dV(T, Matrix(trace.batch, c.n));

  for_row_ranges(trace.batch, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> dact(c.num_signals);
    std::vector<double> dstate(c.r);
    std::vector<double> vals;
    std::vector<double> partials;
    std::vector<double> scratch;
    for (std::size_t i = lo; i < hi; ++i) {
      std::fill(dstate.begin(), dstate.end(), 0.0);
      const std::uint8_t* tgt = cons.target.row(cons.target.rows == 1 ? 0 : i);
      // Cycles after the loss cycle receive no adjoint at all.
      for (std::size_t t = cycle; t-- > 0;) {
        std::fill(dact.begin(), dact.end(), 0.0);
        const double* act = trace.acts[t].row(i);
        if (t + 1 == cycle) {
          for (std::size_t k = 0; k < c.m; ++k) {
            if (!cons.mask[k]) continue;
            dact[c.output_slots[k]] += 2.0 * (trace.outputs[t].at(i, k) - static_cast<double>(tgt[k]));
          }
        }
        // State written at this cycle feeds the next cycle's state slots.
        for (std::size_t k = 0; k < c.r; ++k) dact[c.dff_in_slots[k]] += dstate[k];
        for (std::size_t gi_pos = c.topo_order.size(); gi_pos-- > 0;) {
          const auto& g = c.gates[c.topo_order[gi_pos]];
          double adj = dact[g.out];
          if (adj == 0.0) continue;
          const std::size_t k = g.fanin.size();
          vals.resize(k);
          partials.resize(k);
          for (std::size_t j = 0; j < k; ++j) vals[j] = act[g.fanin[j]];
          grad_kernel(g.op, vals.data(), k, partials.data(), scratch);
          for (std::size_t j = 0; j < k; ++j) dact[g.fanin[j]] += adj * partials[j];
        }
        for (std::size_t k = 0; k < c.r; ++k) dstate[k] = dact[c.dff_out_slots[k]];
        double* dv = dV[t].row(i);
        for (std::size_t k = 0; k < c.n; ++k) {
          double p = act[c.input_slots[k]];
          dv[k] = dact[c.input_slots[k]] * p * (1.0 - p);
        }
      }
    }
  });
  return dV;
}

BatchedVars backward_bptt(const SequentialCircuit& c, const Trace& trace,
                          const OutputConstraint& cons, const BatchedVars& V, int threads) {
  return backward_bptt(c, trace, cons, V, trace.horizon, threads);
}

}  // namespace rcsat
