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

#include "rcsat/circuit.hpp"

#include <algorithm>
#include <queue>

#include "rcsat/errors.hpp"

namespace rcsat {

SequentialCircuit build_circuit(const Netlist& nl) {
  SequentialCircuit c;
  c.netlist = nl;
  c.n = nl.inputs.size();
  c.m = nl.outputs.size();
  c.r = nl.dffs.size();
  c.num_signals = nl.signals.size();
  c.slot_name = nl.signals;
  for (std::size_t i = 0; i < nl.signals.size(); ++i)
    c.signal_index.emplace(nl.signals[i], static_cast<int>(i));

  auto slot = [&](const std::string& s) { return c.signal_index.at(s); };
  for (const auto& s : nl.inputs) c.input_slots.push_back(slot(s));
  for (const auto& s : nl.outputs) c.output_slots.push_back(slot(s));
  for (const auto& [q, d] : nl.dffs) {
    c.dff_out_slots.push_back(slot(q));
    c.dff_in_slots.push_back(slot(d));
  }
  c.gates.reserve(nl.gates.size());
  for (const auto& g : nl.gates) {
    SequentialCircuit::Gate gate;
    gate.op = g.op;
    gate.out = slot(g.output);
    for (const auto& f : g.fanin) gate.fanin.push_back(slot(f));
    c.gates.push_back(std::move(gate));
  }

  // Kahn's algorithm over the gate DAG. Inputs and DFF outputs are sources;
  // a gate is ready once all gate-driven fan-ins are placed.
  std::vector<int> producer(c.num_signals, -1);  // slot -> gate index
  for (std::size_t gi = 0; gi < c.gates.size(); ++gi) producer[c.gates[gi].out] = static_cast<int>(gi);

  std::vector<int> pending(c.gates.size(), 0);
  std::vector<std::vector<int>> consumers(c.gates.size());
  std::queue<int> ready;
  for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
    for (int f : c.gates[gi].fanin) {
      if (producer[f] >= 0) {
        ++pending[gi];
        consumers[producer[f]].push_back(static_cast<int>(gi));
      }
    }
    if (pending[gi] == 0) ready.push(static_cast<int>(gi));
  }
  c.topo_order.reserve(c.gates.size());
  while (!ready.empty()) {
    int gi = ready.front();
    ready.pop();
    c.topo_order.push_back(gi);
    for (int next : consumers[gi])
      if (--pending[next] == 0) ready.push(next);
  }

  if (c.topo_order.size() != c.gates.size()) {
    // Walk unresolved gates along unresolved fan-ins until one repeats.
    std::vector<std::string> cycle;
    std::vector<int> seen_at(c.gates.size(), -1);
    int gi = -1;
    for (std::size_t i = 0; i < c.gates.size(); ++i)
      if (pending[i] > 0) {
        gi = static_cast<int>(i);
        break;
      }
    std::vector<int> path;
    while (seen_at[gi] < 0) {
      seen_at[gi] = static_cast<int>(path.size());
      path.push_back(gi);
      for (int f : c.gates[gi].fanin) {
        int p = producer[f];
        if (p >= 0 && pending[p] > 0) {
          gi = p;
          break;
        }
      }
    }
    for (std::size_t i = seen_at[gi]; i < path.size(); ++i)
      cycle.push_back(c.slot_name[c.gates[path[i]].out]);
    throw CombinationalCycleError(std::move(cycle));
  }
  return c;
}

std::uint8_t eval_gate_bool(GateOp op, const std::uint8_t* vals, std::size_t arity) {
  switch (op) {
    case GateOp::Not: return vals[0] ? 0 : 1;
    case GateOp::Buf: return vals[0];
    case GateOp::And: {
      for (std::size_t i = 0; i < arity; ++i)
        if (!vals[i]) return 0;
      return 1;
    }
    case GateOp::Nand: {
      for (std::size_t i = 0; i < arity; ++i)
        if (!vals[i]) return 1;
      return 0;
    }
    case GateOp::Or: {
      for (std::size_t i = 0; i < arity; ++i)
        if (vals[i]) return 1;
      return 0;
    }
    case GateOp::Nor: {
      for (std::size_t i = 0; i < arity; ++i)
        if (vals[i]) return 0;
      return 1;
    }
    case GateOp::Xor: return vals[0] ^ vals[1];
    case GateOp::Xnor: return (vals[0] ^ vals[1]) ? 0 : 1;
  }
  return 0;
}

DiscreteTrace simulate_discrete(const SequentialCircuit& c, const std::vector<BitMatrix>& inputs,
                                const BitMatrix& h0) {
  const std::size_t T = inputs.size();
  const std::size_t b = T > 0 ? inputs[0].rows : h0.rows;
  if (h0.rows != b || h0.cols != c.r)
    throw DimensionMismatchError("h0 must be batch x " + std::to_string(c.r));
  for (const auto& in : inputs)
    if (in.rows != b || in.cols != c.n)
      throw DimensionMismatchError("each input matrix must be batch x " + std::to_string(c.n));

  DiscreteTrace tr;
  tr.states.reserve(T + 1);
  tr.states.push_back(h0);
  tr.outputs.reserve(T);

  std::vector<std::uint8_t> act(c.num_signals);
  std::vector<std::uint8_t> vals;
  for (std::size_t t = 0; t < T; ++t) {
    BitMatrix out(b, c.m);
    BitMatrix next(b, c.r);
    const BitMatrix& state = tr.states.back();
    for (std::size_t i = 0; i < b; ++i) {
      const std::uint8_t* in_row = inputs[t].row(i);
      const std::uint8_t* st_row = state.row(i);
      for (std::size_t k = 0; k < c.n; ++k) act[c.input_slots[k]] = in_row[k];
      for (std::size_t k = 0; k < c.r; ++k) act[c.dff_out_slots[k]] = st_row[k];
      for (int gi : c.topo_order) {
        const auto& g = c.gates[gi];
        vals.resize(g.fanin.size());
        for (std::size_t k = 0; k < g.fanin.size(); ++k) vals[k] = act[g.fanin[k]];
        act[g.out] = eval_gate_bool(g.op, vals.data(), vals.size());
      }
      std::uint8_t* out_row = out.row(i);
      std::uint8_t* next_row = next.row(i);
      for (std::size_t k = 0; k < c.m; ++k) out_row[k] = act[c.output_slots[k]];
      for (std::size_t k = 0; k < c.r; ++k) next_row[k] = act[c.dff_in_slots[k]];
    }
    tr.outputs.push_back(std::move(out));
    tr.states.push_back(std::move(next));
  }
  return tr;
}

DiscreteTrace simulate_discrete(const SequentialCircuit& c, const std::vector<BitMatrix>& inputs) {
  const std::size_t b = inputs.empty() ? 1 : inputs[0].rows;
  return simulate_discrete(c, inputs, BitMatrix(b, c.r, 0));
}

}  // namespace rcsat
