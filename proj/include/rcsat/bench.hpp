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
#include <utility>
#include <vector>

namespace rcsat {

enum class GateOp : std::uint8_t { Not, Buf, And, Nand, Or, Nor, Xor, Xnor };

const char* gate_op_name(GateOp op);

/// True for NOT/BUF, the only single-input operators.
bool gate_op_is_unary(GateOp op);

struct GateDef {
  std::string output;
  GateOp op;
  std::vector<std::string> fanin;
};

/// A validated BENCH netlist. `signals` lists every defined signal (INPUT,
/// gate output or DFF output) in the order its defining line appears; that
/// order fixes the dense index layout used by all downstream tensors.
struct Netlist {
  std::string name;
  std::vector<std::string> signals;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<GateDef> gates;
  std::vector<std::pair<std::string, std::string>> dffs;  // (state output Q, next-state input D)
};

struct NetlistStats {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::size_t gates = 0;  // includes NOT and BUF
  std::size_t dffs = 0;
};

/// Parse BENCH-format text: '#' comments, INPUT(x), OUTPUT(x) and
/// `y = OP(a, b, ...)` assignment lines. Operator names are case-insensitive,
/// whitespace and CRLF line endings are tolerated, and definitions may appear
/// after their first use. DFF(x) lines become state elements, not gates.
Netlist parse_bench(const std::string& text, const std::string& name = "");

Netlist parse_bench_file(const std::string& path);

NetlistStats netlist_stats(const Netlist& nl);

/// Serialize back to BENCH text. Re-parsing the result yields a structurally
/// identical netlist (same signal, input, output, gate and DFF order).
std::string to_bench_text(const Netlist& nl);

}  // namespace rcsat
