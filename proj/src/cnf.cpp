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

#include "rcsat/cnf.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "rcsat/errors.hpp"

namespace rcsat {

UnrolledCircuit unroll(const SequentialCircuit& c, int cycles) {
  if (cycles < 1) throw DimensionMismatchError("unroll requires at least one cycle");
  UnrolledCircuit u;
  u.cycles = cycles;
  u.node_of.assign(cycles, std::vector<int>(c.num_signals, -1));
  u.pi_nodes.assign(cycles, std::vector<int>(c.n, -1));

  int next_node = 0;
  auto fresh = [&next_node]() { return next_node++; };

  for (int t = 0; t < cycles; ++t) {
    auto& nodes = u.node_of[t];
    for (std::size_t k = 0; k < c.n; ++k) {
      nodes[c.input_slots[k]] = fresh();
      u.pi_nodes[t][k] = nodes[c.input_slots[k]];
    }
    for (std::size_t k = 0; k < c.r; ++k) {
      if (t == 0) {
        nodes[c.dff_out_slots[k]] = fresh();
        u.initial_state_nodes.push_back(nodes[c.dff_out_slots[k]]);
      } else {
        // state read at cycle t is the next-state signal of cycle t-1
        nodes[c.dff_out_slots[k]] = u.node_of[t - 1][c.dff_in_slots[k]];
      }
    }
    for (int gi : c.topo_order) {
      const auto& g = c.gates[gi];
      UnrolledCircuit::UGate ug;
      ug.op = g.op;
      ug.out = fresh();
      nodes[g.out] = ug.out;
      for (int f : g.fanin) ug.fanin.push_back(nodes[f]);
      u.gates.push_back(std::move(ug));
    }
  }
  u.num_nodes = next_node;
  for (std::size_t k = 0; k < c.m; ++k)
    u.final_output_nodes.push_back(u.node_of[cycles - 1][c.output_slots[k]]);
  return u;
}

namespace {

// Merge duplicate literals; returns false (drop the clause) when it contains
// a complementary pair and is therefore always true.
bool normalize_clause(std::vector<int>& lits) {
  std::sort(lits.begin(), lits.end(), [](int a, int b) {
    int va = std::abs(a), vb = std::abs(b);
    return va != vb ? va < vb : a < b;
  });
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i)
    if (lits[i - 1] == -lits[i]) return false;
  return true;
}

void emit(std::vector<std::vector<int>>& clauses, std::vector<int> lits) {
  if (normalize_clause(lits)) clauses.push_back(std::move(lits));
}

void gate_clauses(std::vector<std::vector<int>>& out, GateOp op, int y,
                  const std::vector<int>& xs) {
  switch (op) {
    case GateOp::Not:
      emit(out, {y, xs[0]});
      emit(out, {-y, -xs[0]});
      return;
    case GateOp::Buf:
      emit(out, {-y, xs[0]});
      emit(out, {y, -xs[0]});
      return;
    case GateOp::And: {
      std::vector<int> big{y};
      for (int x : xs) {
        emit(out, {-y, x});
        big.push_back(-x);
      }
      emit(out, std::move(big));
      return;
    }
    case GateOp::Nand: {
      std::vector<int> big{-y};
      for (int x : xs) {
        emit(out, {y, x});
        big.push_back(-x);
      }
      emit(out, std::move(big));
      return;
    }
    case GateOp::Or: {
      std::vector<int> big{-y};
      for (int x : xs) {
        emit(out, {y, -x});
        big.push_back(x);
      }
      emit(out, std::move(big));
      return;
    }
    case GateOp::Nor: {
      std::vector<int> big{y};
      for (int x : xs) {
        emit(out, {-y, -x});
        big.push_back(x);
      }
      emit(out, std::move(big));
      return;
    }
    case GateOp::Xor:
      emit(out, {-y, xs[0], xs[1]});
      emit(out, {-y, -xs[0], -xs[1]});
      emit(out, {y, -xs[0], xs[1]});
      emit(out, {y, xs[0], -xs[1]});
      return;
    case GateOp::Xnor:
      emit(out, {-y, -xs[0], xs[1]});
      emit(out, {-y, xs[0], -xs[1]});
      emit(out, {y, xs[0], xs[1]});
      emit(out, {y, -xs[0], -xs[1]});
      return;
  }
}

}  // namespace

CnfFormula tseitin(const SequentialCircuit& c, const UnrolledCircuit& u,
                   const OutputConstraint& cons) {
  if (cons.mask.size() != c.m) throw DimensionMismatchError("mask must have one entry per output");
  if (cons.target.cols != c.m) throw DimensionMismatchError("target must have m columns");

  CnfFormula f;
  f.num_vars = u.num_nodes;
  auto var = [](int node) { return node + 1; };

  for (const auto& g : u.gates) {
    std::vector<int> xs;
    xs.reserve(g.fanin.size());
    for (int n : g.fanin) xs.push_back(var(n));
    gate_clauses(f.clauses, g.op, var(g.out), xs);
  }
  // zero initial state
  for (int n : u.initial_state_nodes) f.clauses.push_back({-var(n)});
  // output constraint at the final cycle
  for (std::size_t k = 0; k < c.m; ++k) {
    if (!cons.mask[k]) continue;
    int v = var(u.final_output_nodes[k]);
    f.clauses.push_back({cons.target.at(0, k) ? v : -v});
  }

  f.pi_vars.assign(u.cycles, std::vector<int>(c.n));
  for (int t = 0; t < u.cycles; ++t)
    for (std::size_t k = 0; k < c.n; ++k) f.pi_vars[t][k] = var(u.pi_nodes[t][k]);

  f.var_map.reserve(static_cast<std::size_t>(u.cycles) * c.num_signals);
  for (int t = 0; t < u.cycles; ++t)
    for (std::size_t s = 0; s < c.num_signals; ++s)
      f.var_map.emplace_back(t + 1, c.slot_name[s], var(u.node_of[t][s]));
  return f;
}

void write_dimacs(const CnfFormula& f, std::ostream& sink) {
  for (const auto& [t, sig, v] : f.var_map)
    sink << "c map t=" << t << " sig=" << sig << " var=" << v << "\n";
  sink << "p cnf " << f.num_vars << " " << f.clauses.size() << "\n";
  for (const auto& cl : f.clauses) {
    for (int lit : cl) sink << lit << " ";
    sink << "0\n";
  }
  if (!sink) throw IoError("failed writing DIMACS output");
}

DimacsFile read_dimacs(std::istream& in) {
  DimacsFile out;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == 'c') {
      int t = 0, v = 0;
      char sigbuf[256];
      if (std::sscanf(line.c_str(), "c map t=%d sig=%255s var=%d", &t, sigbuf, &v) == 3)
        out.var_map.emplace_back(t, std::string(sigbuf), v);
      continue;
    }
    if (line[0] == 'p') {
      std::istringstream hs(line);
      std::string p, cnf;
      std::size_t nclauses;
      if (!(hs >> p >> cnf >> out.num_vars >> nclauses) || cnf != "cnf")
        throw IoError("malformed DIMACS header: " + line);
      have_header = true;
      continue;
    }
    std::istringstream ls(line);
    std::vector<int> cl;
    int lit;
    while (ls >> lit && lit != 0) cl.push_back(lit);
    out.clauses.push_back(std::move(cl));
  }
  if (!have_header) throw IoError("missing DIMACS header");
  return out;
}

BitMatrix decode_model(const CnfFormula& f, const std::vector<int8_t>& values) {
  if (values.size() < static_cast<std::size_t>(f.num_vars) + 1)
    throw IncompleteModelError("model must assign variables 1.." + std::to_string(f.num_vars));
  for (int v = 1; v <= f.num_vars; ++v)
    if (values[v] != 0 && values[v] != 1)
      throw IncompleteModelError("variable " + std::to_string(v) + " unassigned");
  for (const auto& cl : f.clauses) {
    bool sat = false;
    for (int lit : cl)
      if ((lit > 0 && values[lit] == 1) || (lit < 0 && values[-lit] == 0)) {
        sat = true;
        break;
      }
    if (!sat) throw InvalidModelError("model violates a clause");
  }
  const std::size_t T = f.pi_vars.size();
  const std::size_t n = T > 0 ? f.pi_vars[0].size() : 0;
  BitMatrix seq(T, n);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t k = 0; k < n; ++k) seq.at(t, k) = values[f.pi_vars[t][k]];
  return seq;
}

}  // namespace rcsat
