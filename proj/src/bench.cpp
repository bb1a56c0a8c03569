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

#include "rcsat/bench.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "rcsat/errors.hpp"

namespace rcsat {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::optional<GateOp> lookup_op(const std::string& name) {
  static const std::unordered_map<std::string, GateOp> table = {
      {"NOT", GateOp::Not}, {"BUF", GateOp::Buf},   {"BUFF", GateOp::Buf},
      {"AND", GateOp::And}, {"NAND", GateOp::Nand}, {"OR", GateOp::Or},
      {"NOR", GateOp::Nor}, {"XOR", GateOp::Xor},   {"XNOR", GateOp::Xnor},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

// Parses "KEYWORD ( arg )" syntax, returning (keyword, args). Reports the
// 1-based line number on malformed input.
struct CallLine {
  std::string keyword;
  std::vector<std::string> args;
};

CallLine parse_call(const std::string& body, std::size_t line_no) {
  auto open = body.find('(');
  auto close = body.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw MalformedLineError(line_no, "expected OP(arg, ...): " + body);
  if (!trim(body.substr(close + 1)).empty())
    throw MalformedLineError(line_no, "trailing text after ')': " + body);
  CallLine out;
  out.keyword = trim(body.substr(0, open));
  if (out.keyword.empty()) throw MalformedLineError(line_no, "missing operator name: " + body);
  std::string args = body.substr(open + 1, close - open - 1);
  std::string cur;
  std::stringstream ss(args);
  while (std::getline(ss, cur, ',')) {
    cur = trim(cur);
    if (cur.empty()) throw MalformedLineError(line_no, "empty argument: " + body);
    out.args.push_back(cur);
  }
  if (out.args.empty()) throw MalformedLineError(line_no, "no arguments: " + body);
  return out;
}

}  // namespace

const char* gate_op_name(GateOp op) {
  switch (op) {
    case GateOp::Not: return "NOT";
    case GateOp::Buf: return "BUF";
    case GateOp::And: return "AND";
    case GateOp::Nand: return "NAND";
    case GateOp::Or: return "OR";
    case GateOp::Nor: return "NOR";
    case GateOp::Xor: return "XOR";
    case GateOp::Xnor: return "XNOR";
  }
  return "?";
}

bool gate_op_is_unary(GateOp op) { return op == GateOp::Not || op == GateOp::Buf; }

Netlist parse_bench(const std::string& text, const std::string& name) {
  Netlist nl;
  nl.name = name;

  std::unordered_set<std::string> defined;
  std::unordered_set<std::string> output_seen;
  std::vector<std::pair<std::string, std::size_t>> used;  // (signal, line) for fan-in checks

  auto define = [&](const std::string& sig) {
    if (!defined.insert(sig).second) throw DuplicateDefinitionError(sig);
    nl.signals.push_back(sig);
  };

  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;

    auto eq = line.find('=');
    if (eq == std::string::npos) {
      // declaration: INPUT(x) or OUTPUT(x)
      CallLine call = parse_call(line, line_no);
      std::string kw = upper(call.keyword);
      if (call.args.size() != 1)
        throw MalformedLineError(line_no, kw + " takes exactly one signal");
      if (kw == "INPUT") {
        define(call.args[0]);
        nl.inputs.push_back(call.args[0]);
      } else if (kw == "OUTPUT") {
        if (!output_seen.insert(call.args[0]).second)
          throw DuplicateDefinitionError("OUTPUT " + call.args[0]);
        nl.outputs.push_back(call.args[0]);
        used.emplace_back(call.args[0], line_no);
      } else {
        throw MalformedLineError(line_no, "unknown declaration: " + call.keyword);
      }
      continue;
    }

    std::string lhs = trim(line.substr(0, eq));
    if (lhs.empty()) throw MalformedLineError(line_no, "missing signal name before '='");
    CallLine call = parse_call(trim(line.substr(eq + 1)), line_no);
    std::string op_name = upper(call.keyword);

    if (op_name == "DFF") {
      if (call.args.size() != 1) throw UnsupportedGateError("DFF takes exactly one input");
      define(lhs);
      nl.dffs.emplace_back(lhs, call.args[0]);
      used.emplace_back(call.args[0], line_no);
      continue;
    }

    auto op = lookup_op(op_name);
    if (!op) throw UnsupportedGateError(call.keyword);
    if (gate_op_is_unary(*op)) {
      if (call.args.size() != 1)
        throw UnsupportedGateError(std::string(gate_op_name(*op)) + " takes exactly one input");
    } else if (*op == GateOp::Xor || *op == GateOp::Xnor) {
      // Only the 2-input form has defined semantics here; wider XOR/XNOR
      // must be pre-split by the producer.
      if (call.args.size() != 2)
        throw UnsupportedGateError(std::string(gate_op_name(*op)) + " requires exactly 2 inputs, got " +
                                   std::to_string(call.args.size()));
    } else if (call.args.size() < 2) {
      throw UnsupportedGateError(std::string(gate_op_name(*op)) + " requires at least 2 inputs");
    }
    define(lhs);
    nl.gates.push_back(GateDef{lhs, *op, call.args});
    for (const auto& a : call.args) used.emplace_back(a, line_no);
  }

  if (defined.empty()) throw EmptyNetlistError("no signal definitions");
  if (nl.inputs.empty()) throw EmptyNetlistError("no primary inputs");
  for (const auto& [sig, ln] : used) {
    (void)ln;
    if (!defined.count(sig)) throw UndefinedSignalError(sig);
  }
  return nl;
}

Netlist parse_bench_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open netlist file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  std::string stem = path;
  if (auto slash = stem.find_last_of("/\\"); slash != std::string::npos) stem = stem.substr(slash + 1);
  if (auto dot = stem.rfind('.'); dot != std::string::npos) stem = stem.substr(0, dot);
  return parse_bench(buf.str(), stem);
}

NetlistStats netlist_stats(const Netlist& nl) {
  return NetlistStats{nl.inputs.size(), nl.outputs.size(), nl.gates.size(), nl.dffs.size()};
}

std::string to_bench_text(const Netlist& nl) {
  // Emit OUTPUT declarations first (they define nothing), then every defining
  // line in original declaration order so a re-parse reproduces the layout.
  std::unordered_map<std::string, const GateDef*> gate_by_out;
  for (const auto& g : nl.gates) gate_by_out[g.output] = &g;
  std::unordered_map<std::string, std::string> dff_by_out;
  for (const auto& [q, d] : nl.dffs) dff_by_out[q] = d;
  std::unordered_set<std::string> input_set(nl.inputs.begin(), nl.inputs.end());

  std::ostringstream out;
  if (!nl.name.empty()) out << "# " << nl.name << "\n";
  for (const auto& o : nl.outputs) out << "OUTPUT(" << o << ")\n";
  for (const auto& sig : nl.signals) {
    if (input_set.count(sig)) {
      out << "INPUT(" << sig << ")\n";
    } else if (auto it = dff_by_out.find(sig); it != dff_by_out.end()) {
      out << sig << " = DFF(" << it->second << ")\n";
    } else {
      const GateDef* g = gate_by_out.at(sig);
      out << sig << " = " << gate_op_name(g->op) << "(";
      for (std::size_t i = 0; i < g->fanin.size(); ++i) {
        if (i) out << ", ";
        out << g->fanin[i];
      }
      out << ")\n";
    }
  }
  return out.str();
}

}  // namespace rcsat
