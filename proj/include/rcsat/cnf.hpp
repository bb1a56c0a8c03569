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

#include <iosfwd>
#include <string>
#include <tuple>
#include <vector>

#include "rcsat/circuit.hpp"
#include "rcsat/relaxed.hpp"

namespace rcsat {

/// The sequential circuit replicated over a fixed horizon. Node ids are
/// 0-based; the state slots of cycle t+1 alias the next-state nodes of cycle
/// t, while cycle-1 state nodes are fresh (they get tied to 0 during CNF
/// encoding). node_of[t][slot] resolves (cycle, signal slot) to a node.
struct UnrolledCircuit {
  int cycles = 0;
  int num_nodes = 0;
  struct UGate {
    GateOp op;
    int out;
    std::vector<int> fanin;
  };
  std::vector<UGate> gates;                 // topological (cycle-major)
  std::vector<std::vector<int>> node_of;    // [t][slot] -> node id
  std::vector<std::vector<int>> pi_nodes;   // [t][input index] -> node id
  std::vector<int> initial_state_nodes;     // r entries (cycle-1 state)
  std::vector<int> final_output_nodes;      // m entries (outputs at cycle T)
};

UnrolledCircuit unroll(const SequentialCircuit& c, int cycles);

struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;  // nonzero DIMACS literals
  // (cycle 1-based, signal name, variable). Total over every unrolled
  // (cycle, signal) pair; aliased state signals share a variable.
  std::vector<std::tuple<int, std::string, int>> var_map;
  std::vector<std::vector<int>> pi_vars;  // [t][input index] -> variable
};

/// Standard Tseitin clauses per gate (n-ary templates, duplicate literals
/// merged, tautological clauses dropped), unit clauses pinning the cycle-1
/// state to 0 and unit clauses asserting the masked outputs at the final
/// cycle. The target row 0 is used; constraint files always produce one row.
CnfFormula tseitin(const SequentialCircuit& c, const UnrolledCircuit& u,
                   const OutputConstraint& cons);

/// `p cnf` header, map comments (`c map t=<cycle> sig=<name> var=<k>`) and
/// zero-terminated clause lines.
void write_dimacs(const CnfFormula& f, std::ostream& sink);

struct DimacsFile {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  std::vector<std::tuple<int, std::string, int>> var_map;
};

DimacsFile read_dimacs(std::istream& in);

/// Projects a full model (values[k] in {0,1} for k = 1..num_vars, -1 for
/// unassigned) onto the per-cycle primary inputs. Throws IncompleteModelError
/// on unassigned variables and InvalidModelError if the model violates a
/// clause.
BitMatrix decode_model(const CnfFormula& f, const std::vector<int8_t>& values);

}  // namespace rcsat
