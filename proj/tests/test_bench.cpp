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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "rcsat/bench.hpp"
#include "rcsat/errors.hpp"
#include "test_circuits.hpp"

using namespace rcsat;
using namespace rcsat::testing;

TEST_CASE("minimal netlist") {
  Netlist nl = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)");
  auto st = netlist_stats(nl);
  CHECK(st.inputs == 2);
  CHECK(st.outputs == 1);
  CHECK(st.gates == 1);
  CHECK(st.dffs == 0);
  CHECK(nl.signals == std::vector<std::string>{"a", "b", "y"});
  CHECK(nl.gates[0].op == GateOp::And);
  CHECK(nl.gates[0].fanin == std::vector<std::string>{"a", "b"});
}

TEST_CASE("fixture stats match the recorded benchmark table") {
  struct Row {
    const char* file;
    std::size_t n, m, g, r;
  };
  const Row rows[] = {
      {"s27.bench", 4, 1, 10, 3},
      {"s208.1.bench", 10, 1, 104, 8},
      {"s386.bench", 7, 7, 159, 6},
      {"b01.bench", 2, 2, 45, 5},
  };
  for (const auto& row : rows) {
    CAPTURE(row.file);
    auto st = netlist_stats(parse_bench_file(fixture_path(row.file)));
    CHECK(st.inputs == row.n);
    CHECK(st.outputs == row.m);
    CHECK(st.gates == row.g);
    CHECK(st.dffs == row.r);
  }
}

TEST_CASE("parser error paths") {
  CHECK_THROWS_AS(parse_bench("OUTPUT(y)\ny = AND(a, b)"), UndefinedSignalError);
  CHECK_THROWS_AS(parse_bench("INPUT(a)\nOUTPUT(a)\na = NOT(a)"), DuplicateDefinitionError);
  CHECK_THROWS_AS(parse_bench("INPUT(a)\ny = FROB(a, a)"), UnsupportedGateError);
  CHECK_THROWS_AS(parse_bench("INPUT(a)\nINPUT(b)\nINPUT(c)\ny = XOR(a, b, c)"), UnsupportedGateError);
  CHECK_THROWS_AS(parse_bench("INPUT(a)\ny = NOT(a, a)"), UnsupportedGateError);
  CHECK_THROWS_AS(parse_bench("INPUT(a)\ny = AND(a)"), UnsupportedGateError);
  CHECK_THROWS_AS(parse_bench(""), EmptyNetlistError);
  CHECK_THROWS_AS(parse_bench("# only comments\n"), EmptyNetlistError);
  CHECK_THROWS_AS(parse_bench("OUTPUT(y)\ny = NOT(y)"), EmptyNetlistError);  // no inputs
  CHECK_THROWS_AS(parse_bench("INPUT(a)\nOUTPUT(zz)\ny = NOT(a)"), UndefinedSignalError);

  try {
    parse_bench("INPUT(a)\n\nwhat is this line\n");
    FAIL("expected MalformedLineError");
  } catch (const MalformedLineError& e) {
    CHECK(e.line_no == 3);
  }
}

TEST_CASE("whitespace, case and CRLF tolerance") {
  Netlist nl = parse_bench("INPUT( a )\r\ninput(b)\r\nOUTPUT(y)\r\n  y =  and( a ,b )\r\n");
  CHECK(nl.inputs == std::vector<std::string>{"a", "b"});
  CHECK(nl.gates[0].op == GateOp::And);
}

TEST_CASE("definitions may appear after use") {
  Netlist nl = parse_bench(
      "OUTPUT(y)\n"
      "y = AND(u, v)\n"
      "u = NOT(a)\n"
      "INPUT(a)\n"
      "v = DFF(y)\n");
  auto st = netlist_stats(nl);
  CHECK(st.inputs == 1);
  CHECK(st.gates == 2);
  CHECK(st.dffs == 1);
  // declaration order follows the defining lines
  CHECK(nl.signals == std::vector<std::string>{"y", "u", "a", "v"});
}

TEST_CASE("dff is a state element, not a gate") {
  Netlist nl = parse_bench(kDffLoop);
  auto st = netlist_stats(nl);
  CHECK(st.gates == 0);
  CHECK(st.dffs == 1);
  CHECK(nl.dffs[0] == std::pair<std::string, std::string>{"q", "d"});
}

TEST_CASE("round-trip: serialize then reparse is structurally identical") {
  const char* files[] = {"s27.bench", "s208.1.bench", "s386.bench", "b01.bench"};
  for (const char* f : files) {
    CAPTURE(f);
    Netlist a = parse_bench_file(fixture_path(f));
    Netlist b = parse_bench(to_bench_text(a), a.name);
    CHECK(a.signals == b.signals);
    CHECK(a.inputs == b.inputs);
    CHECK(a.outputs == b.outputs);
    CHECK(a.dffs == b.dffs);
    REQUIRE(a.gates.size() == b.gates.size());
    for (std::size_t i = 0; i < a.gates.size(); ++i) {
      CHECK(a.gates[i].output == b.gates[i].output);
      CHECK(a.gates[i].op == b.gates[i].op);
      CHECK(a.gates[i].fanin == b.gates[i].fanin);
    }
  }
}
