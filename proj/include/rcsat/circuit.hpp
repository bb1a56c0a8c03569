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
#include <string>
#include <unordered_map>
#include <vector>

#include "rcsat/bench.hpp"

namespace rcsat {

/// Dense row-major 0/1 matrix.
struct BitMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> bits;

  BitMatrix() = default;
  BitMatrix(std::size_t r, std::size_t c, std::uint8_t fill = 0) : rows(r), cols(c), bits(r * c, fill) {}

  std::uint8_t& at(std::size_t r, std::size_t c) { return bits[r * cols + c]; }
  std::uint8_t at(std::size_t r, std::size_t c) const { return bits[r * cols + c]; }
  std::uint8_t* row(std::size_t r) { return bits.data() + r * cols; }
  const std::uint8_t* row(std::size_t r) const { return bits.data() + r * cols; }

  bool operator==(const BitMatrix& o) const = default;
};

/// Evaluation-ready sequential circuit: every signal gets a dense slot index
/// (declaration order) and the combinational gates carry a topological
/// evaluation order. DFF outputs act as sources of the combinational core and
/// DFF next-state inputs as sinks.
struct SequentialCircuit {
  Netlist netlist;

  std::size_t n = 0;  // primary inputs
  std::size_t m = 0;  // primary outputs
  std::size_t r = 0;  // flip-flops

  std::size_t num_signals = 0;
  std::unordered_map<std::string, int> signal_index;
  std::vector<std::string> slot_name;  // inverse of signal_index

  std::vector<int> input_slots;    // n entries
  std::vector<int> output_slots;   // m entries, the output slice
  std::vector<int> dff_out_slots;  // r entries, state read slots
  std::vector<int> dff_in_slots;   // r entries, next-state slice

  struct Gate {
    GateOp op;
    int out;
    std::vector<int> fanin;
  };
  std::vector<Gate> gates;      // in netlist order
  std::vector<int> topo_order;  // permutation of gate indices
};

/// Builds the slot layout and a topological order of the combinational core.
/// Throws CombinationalCycleError (listing the signals on one cycle) if a
/// cycle is not broken by a DFF.
SequentialCircuit build_circuit(const Netlist& nl);

struct DiscreteTrace {
  std::vector<BitMatrix> outputs;  // T matrices, b x m
  std::vector<BitMatrix> states;   // T+1 matrices, b x r; states[0] = h0
};

/// Exact Boolean ground-truth simulator. For each cycle t (0-based):
/// outputs[t] reads inputs[t] and states[t]; states[t+1] latches the
/// next-state slice evaluated from the same values.
DiscreteTrace simulate_discrete(const SequentialCircuit& c, const std::vector<BitMatrix>& inputs,
                                const BitMatrix& h0);

/// Same, starting from the all-zero state.
DiscreteTrace simulate_discrete(const SequentialCircuit& c, const std::vector<BitMatrix>& inputs);

/// Single-gate Boolean evaluation used by the simulator.
std::uint8_t eval_gate_bool(GateOp op, const std::uint8_t* vals, std::size_t arity);

}  // namespace rcsat
