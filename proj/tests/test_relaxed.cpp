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

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "rcsat/errors.hpp"
#include "rcsat/relaxed.hpp"
#include "test_circuits.hpp"

using namespace rcsat;
using namespace rcsat::testing;

namespace {

SequentialCircuit load(const std::string& text) { return build_circuit(parse_bench(text)); }

OutputConstraint all_ones(std::size_t m) {
  OutputConstraint cons;
  cons.target = BitMatrix(1, m, 1);
  cons.mask.assign(m, 1);
  return cons;
}

std::vector<Matrix> random_probs(std::mt19937& rng, std::size_t T, std::size_t b, std::size_t n) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<Matrix> P(T, Matrix(b, n));
  for (auto& pt : P)
    for (auto& x : pt.v) x = dist(rng);
  return P;
}

BatchedVars random_vars(std::mt19937& rng, std::size_t T, std::size_t b, std::size_t n,
                        double scale = 3.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  BatchedVars V(T, Matrix(b, n));
  for (auto& vt : V)
    for (auto& x : vt.v) x = dist(rng);
  return V;
}

bool grads_close(const BatchedVars& a, const BatchedVars& b, double rel, double abs_floor) {
  REQUIRE(a.size() == b.size());
  for (std::size_t t = 0; t < a.size(); ++t)
    for (std::size_t i = 0; i < a[t].v.size(); ++i) {
      double x = a[t].v[i], y = b[t].v[i];
      double err = std::fabs(x - y);
      double scale = std::max(std::fabs(x), std::fabs(y));
      if (err > abs_floor && err > rel * scale) {
        CAPTURE(t);
        CAPTURE(i);
        CAPTURE(x);
        CAPTURE(y);
        return false;
      }
    }
  return true;
}

}  // namespace

TEST_CASE("sigmoid embedding") {
  BatchedVars V(1, Matrix(1, 3));
  V[0].at(0, 0) = 0.0;
  V[0].at(0, 1) = 20.0;
  V[0].at(0, 2) = std::log(3.0);
  auto P = sigmoid_embed(V);
  CHECK(P[0].at(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(P[0].at(0, 1) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(P[0].at(0, 2) == doctest::Approx(0.75).epsilon(1e-12));

  V[0].at(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(sigmoid_embed(V), NonFiniteInputError);
  V[0].at(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(sigmoid_embed(V), NonFiniteInputError);
}

TEST_CASE("gate probability model") {
  CHECK(gate_prob(GateOp::And, std::vector<double>{0.5, 0.5}) == doctest::Approx(0.25));
  CHECK(gate_prob(GateOp::Nand, std::vector<double>{1.0, 1.0}) == doctest::Approx(0.0));
  CHECK(gate_prob(GateOp::Not, std::vector<double>{0.3}) == doctest::Approx(0.7));
  CHECK(gate_prob(GateOp::Buf, std::vector<double>{0.3}) == doctest::Approx(0.3));
  CHECK(gate_prob(GateOp::Or, std::vector<double>{0.5, 0.5}) == doctest::Approx(0.75));
  CHECK(gate_prob(GateOp::Nor, std::vector<double>{0.5, 0.5}) == doctest::Approx(0.25));
  CHECK(gate_prob(GateOp::Xnor, std::vector<double>{0.5, 1.0}) == doctest::Approx(0.5));

  // XOR against 0.5 washes out the other input entirely
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    double p = dist(rng);
    CHECK(gate_prob(GateOp::Xor, std::vector<double>{p, 0.5}) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("gate probabilities agree with boolean truth tables on binary inputs") {
  const GateOp ops[] = {GateOp::Not,  GateOp::Buf, GateOp::And, GateOp::Nand,
                        GateOp::Or,   GateOp::Nor, GateOp::Xor, GateOp::Xnor};
  for (GateOp op : ops) {
    const std::size_t arity = gate_op_is_unary(op) ? 1 : 2;
    for (unsigned bits = 0; bits < (1u << arity); ++bits) {
      std::vector<double> p(arity);
      std::vector<std::uint8_t> pb(arity);
      for (std::size_t k = 0; k < arity; ++k) {
        pb[k] = (bits >> k) & 1;
        p[k] = pb[k];
      }
      CHECK(gate_prob(op, p) == doctest::Approx(eval_gate_bool(op, pb.data(), arity)).epsilon(0));
    }
  }
}

TEST_CASE("domain checking snaps tiny overshoot and rejects real violations") {
  CHECK(gate_prob(GateOp::Buf, std::vector<double>{1.0 + 1e-13}) == doctest::Approx(1.0));
  CHECK(gate_prob(GateOp::Buf, std::vector<double>{-1e-13}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(gate_prob(GateOp::And, std::vector<double>{1.2, 0.5}), DomainError);
  CHECK_THROWS_AS(gate_prob(GateOp::And, std::vector<double>{-0.1, 0.5}), DomainError);
}

TEST_CASE("gate arity is enforced") {
  CHECK_THROWS_AS(gate_prob(GateOp::Xor, std::vector<double>{0.1, 0.2, 0.3}), ArityError);
  CHECK_THROWS_AS(gate_prob(GateOp::Not, std::vector<double>{0.1, 0.2}), ArityError);
  CHECK_THROWS_AS(gate_prob(GateOp::And, std::vector<double>{0.1}), ArityError);
}

TEST_CASE("gate derivatives match the table and finite differences") {
  CHECK(gate_grad(GateOp::And, std::vector<double>{0.9, 0.3})[0] == doctest::Approx(0.3));
  CHECK(gate_grad(GateOp::And, std::vector<double>{0.9, 0.3})[1] == doctest::Approx(0.9));
  CHECK(gate_grad(GateOp::Or, std::vector<double>{0.9, 0.3})[0] == doctest::Approx(0.7));
  CHECK(gate_grad(GateOp::Xor, std::vector<double>{0.9, 0.5})[0] == doctest::Approx(0.0));
  CHECK(gate_grad(GateOp::Xor, std::vector<double>{0.9, 0.3})[1] == doctest::Approx(1.0 - 1.8));
  CHECK(gate_grad(GateOp::Xnor, std::vector<double>{0.9, 0.3})[0] == doctest::Approx(-0.4));
  CHECK(gate_grad(GateOp::Not, std::vector<double>{0.4})[0] == doctest::Approx(-1.0));

  // 3-input AND at (0.5, 0.5, 0.5): finite differences give 0.25 per input
  auto fd = finite_diff_gate_grad(GateOp::And, {0.5, 0.5, 0.5});
  auto an = gate_grad(GateOp::And, std::vector<double>{0.5, 0.5, 0.5});
  for (int k = 0; k < 3; ++k) {
    CHECK(fd[k] == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(an[k] == doctest::Approx(0.25));
  }

  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dist(0.05, 0.95);
  const GateOp ops[] = {GateOp::Not,  GateOp::Buf, GateOp::And, GateOp::Nand,
                        GateOp::Or,   GateOp::Nor, GateOp::Xor, GateOp::Xnor};
  for (GateOp op : ops) {
    for (int trial = 0; trial < 20; ++trial) {
      std::size_t arity = gate_op_is_unary(op) ? 1 : (op == GateOp::Xor || op == GateOp::Xnor) ? 2
                                                  : 2 + (trial % 3);
      std::vector<double> p(arity);
      for (auto& x : p) x = dist(rng);
      auto analytic = gate_grad(op, p);
      auto numeric = finite_diff_gate_grad(op, p);
      for (std::size_t k = 0; k < arity; ++k)
        CHECK(analytic[k] == doctest::Approx(numeric[k]).epsilon(1e-5));
    }
  }

  // zero-valued fan-ins must not break the product-form partials
  auto z = gate_grad(GateOp::And, std::vector<double>{0.0, 0.0, 0.7});
  CHECK(z[0] == doctest::Approx(0.0));
  CHECK(z[2] == doctest::Approx(0.0));
  auto z2 = gate_grad(GateOp::And, std::vector<double>{0.0, 0.5});
  CHECK(z2[0] == doctest::Approx(0.5));
  CHECK(z2[1] == doctest::Approx(0.0));
}

TEST_CASE("binary consistency: relaxed forward equals the discrete simulator") {
  const std::string sources[] = {kMinimalAnd, kXor2, kAllGates, kCtr2, kParity, kMuxFsm};
  for (const auto& src : sources) {
    auto c = load(src);
    for (int T = 1; T <= 3; ++T) {
      const std::size_t bits = T * c.n;
      if (bits > 12) continue;
      const std::size_t rows = 1ULL << bits;
      std::vector<Matrix> P(T, Matrix(rows, c.n));
      std::vector<BitMatrix> B(T, BitMatrix(rows, c.n));
      for (std::size_t i = 0; i < rows; ++i)
        for (int t = 0; t < T; ++t)
          for (std::size_t k = 0; k < c.n; ++k) {
            int bit = (i >> (t * c.n + k)) & 1;
            P[t].at(i, k) = bit;
            B[t].at(i, k) = bit;
          }
      Trace tr = forward_relaxed(c, P);
      DiscreteTrace ref = simulate_discrete(c, B);
      for (int t = 0; t < T; ++t)
        for (std::size_t i = 0; i < rows; ++i)
          for (std::size_t k = 0; k < c.m; ++k)
            CHECK(tr.outputs[t].at(i, k) == static_cast<double>(ref.outputs[t].at(i, k)));
      for (int t = 0; t <= T; ++t)
        for (std::size_t i = 0; i < rows; ++i)
          for (std::size_t k = 0; k < c.r; ++k)
            CHECK(tr.states[t].at(i, k) == static_cast<double>(ref.states[t].at(i, k)));
    }
  }
}

TEST_CASE("binary consistency on s27, exhaustive per horizon") {
  auto c = build_circuit(parse_bench_file(fixture_path("s27.bench")));
  for (int T = 1; T <= 3; ++T) {
    const std::size_t rows = 1ULL << (4 * T);
    std::vector<Matrix> P(T, Matrix(rows, 4));
    std::vector<BitMatrix> B(T, BitMatrix(rows, 4));
    for (std::size_t i = 0; i < rows; ++i)
      for (int t = 0; t < T; ++t)
        for (int k = 0; k < 4; ++k) {
          int bit = (i >> (t * 4 + k)) & 1;
          P[t].at(i, k) = bit;
          B[t].at(i, k) = bit;
        }
    Trace tr = forward_relaxed(c, P);
    DiscreteTrace ref = simulate_discrete(c, B);
    bool same = true;
    for (int t = 0; t < T && same; ++t)
      for (std::size_t i = 0; i < rows && same; ++i)
        same = tr.outputs[t].at(i, 0) == static_cast<double>(ref.outputs[t].at(i, 0));
    CHECK(same);
  }
}

TEST_CASE("xor at one-half stays at one-half, dff-only circuit delays P") {
  auto cx = load(kXor2);
  std::vector<Matrix> P(3, Matrix(1, 2, 0.5));
  Trace tr = forward_relaxed(cx, P);
  for (int t = 0; t < 3; ++t) CHECK(tr.outputs[t].at(0, 0) == doctest::Approx(0.5));

  auto cd = load(kDffLoop);
  std::vector<Matrix> Pd(3, Matrix(1, 1));
  Pd[0].at(0, 0) = 0.3;
  Pd[1].at(0, 0) = 0.8;
  Pd[2].at(0, 0) = 0.6;
  Trace td = forward_relaxed(cd, Pd);
  CHECK(td.outputs[0].at(0, 0) == doctest::Approx(0.0));  // zero initial state
  CHECK(td.outputs[1].at(0, 0) == doctest::Approx(0.3));
  CHECK(td.outputs[2].at(0, 0) == doctest::Approx(0.8));
  CHECK(td.states[3].at(0, 0) == doctest::Approx(0.6));
}

TEST_CASE("range preservation under random probabilistic inputs") {
  auto c = build_circuit(parse_bench_file(fixture_path("s27.bench")));
  std::mt19937 rng(23);
  auto P = random_probs(rng, 4, 64, c.n);
  Trace tr = forward_relaxed(c, P);
  for (const auto& act : tr.acts)
    for (double x : act.v) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
}

TEST_CASE("loss arithmetic") {
  auto c = load(kMinimalAnd);
  std::vector<Matrix> P(1, Matrix(2, 2));
  P[0].at(0, 0) = 1.0;
  P[0].at(0, 1) = 1.0;  // row 0: output 1
  P[0].at(1, 0) = 0.5;
  P[0].at(1, 1) = 1.0;  // row 1: output 0.5
  Trace tr = forward_relaxed(c, P);
  OutputConstraint cons = all_ones(1);

  auto l = loss(tr, cons, 1);
  CHECK(l.per_row[0] == doctest::Approx(0.0));
  CHECK(l.per_row[1] == doctest::Approx(0.25));
  CHECK(l.total == doctest::Approx(0.25));

  SUBCASE("b=2 m=2 example") {
    Trace t2;
    t2.horizon = 1;
    t2.batch = 2;
    t2.outputs.assign(1, Matrix(2, 2));
    t2.outputs[0].at(0, 0) = 0.0;
    t2.outputs[0].at(0, 1) = 1.0;
    t2.outputs[0].at(1, 0) = 1.0;
    t2.outputs[0].at(1, 1) = 1.0;
    OutputConstraint cc;
    cc.target = BitMatrix(2, 2, 1);
    cc.mask = {1, 1};
    auto l2 = loss(t2, cc, 1);
    CHECK(l2.total == doctest::Approx(1.0));
    CHECK(l2.per_row[0] == doctest::Approx(1.0));
    CHECK(l2.per_row[1] == doctest::Approx(0.0));
  }

  SUBCASE("unconstrained outputs contribute zero") {
    Trace t2;
    t2.horizon = 1;
    t2.batch = 1;
    t2.outputs.assign(1, Matrix(1, 2));
    t2.outputs[0].at(0, 0) = 0.25;
    t2.outputs[0].at(0, 1) = 0.75;
    OutputConstraint cc;
    cc.target = BitMatrix(1, 2, 1);
    cc.mask = {0, 1};
    auto l2 = loss(t2, cc, 1);
    CHECK(l2.total == doctest::Approx(0.0625));
  }
}

TEST_CASE("loss bound: at most one per constrained output per row") {
  auto c = load(kAllGates);
  std::mt19937 rng(5);
  auto P = random_probs(rng, 2, 32, c.n);
  Trace tr = forward_relaxed(c, P);
  OutputConstraint cons = all_ones(c.m);
  auto l = loss(tr, cons, 2);
  std::size_t m_constrained = 2;
  CHECK(l.total >= 0.0);
  CHECK(l.total <= 32.0 * m_constrained);
  for (double x : l.per_row) {
    CHECK(x >= 0.0);
    CHECK(x <= static_cast<double>(m_constrained));
  }
}

TEST_CASE("single AND gate backward, worked example") {
  auto c = load(kMinimalAnd);
  BatchedVars V(1, Matrix(1, 2, 0.0));  // sigmoid(0) = 0.5 on both inputs
  auto P = sigmoid_embed(V);
  Trace tr = forward_relaxed(c, P);
  OutputConstraint cons = all_ones(1);

  auto l = loss(tr, cons, 1);
  CHECK(l.total == doctest::Approx(0.5625));  // (1 - 0.25)^2

  auto grads = backward_bptt(c, tr, cons, V);
  // dL/dp1 = -2 (1 - p1 p2) p2 = -0.75; through sigmoid' = 0.25 -> -0.1875
  CHECK(grads[0].at(0, 0) == doctest::Approx(-0.1875));
  CHECK(grads[0].at(0, 1) == doctest::Approx(-0.1875));

  auto fd = finite_diff_grads(c, cons, V, 1);
  CHECK(grads_close(grads, fd, 1e-4, 1e-7));
}

TEST_CASE("zero loss with binary activations gives zero gradients") {
  auto c = load(kMinimalAnd);
  BatchedVars V(1, Matrix(1, 2, 30.0));  // saturated at 1
  auto P = sigmoid_embed(V);
  Trace tr = forward_relaxed(c, P);
  OutputConstraint cons = all_ones(1);
  auto grads = backward_bptt(c, tr, cons, V);
  CHECK(std::fabs(grads[0].at(0, 0)) < 1e-10);
  CHECK(std::fabs(grads[0].at(0, 1)) < 1e-10);
}

TEST_CASE("gradients vanish for cycles after the loss cycle") {
  auto c = load(kCtr2);
  std::mt19937 rng(29);
  auto V = random_vars(rng, 4, 3, c.n);
  auto P = sigmoid_embed(V);
  Trace tr = forward_relaxed(c, P);
  OutputConstraint cons = all_ones(1);
  auto grads = backward_bptt(c, tr, cons, V, 2);
  for (std::size_t t = 2; t < 4; ++t)
    for (double g : grads[t].v) CHECK(g == 0.0);
  // and the leading cycles match finite differences of the cycle-2 loss
  auto fd = finite_diff_grads(c, cons, V, 2);
  CHECK(grads_close(grads, fd, 1e-4, 1e-7));
}

TEST_CASE("bptt gradient check across circuits and horizons") {
  const std::string sources[] = {kMinimalAnd, kXor2, kAllGates, kCtr2, kParity, kMuxFsm};
  std::mt19937 rng(101);
  for (const auto& src : sources) {
    auto c = load(src);
    OutputConstraint cons = all_ones(c.m);
    for (std::size_t T : {1u, 2u, 5u}) {
      auto V = random_vars(rng, T, 2, c.n);
      auto P = sigmoid_embed(V);
      Trace tr = forward_relaxed(c, P);
      auto grads = backward_bptt(c, tr, cons, V);
      auto fd = finite_diff_grads(c, cons, V, T);
      CHECK(grads_close(grads, fd, 1e-4, 1e-7));
    }
  }
  auto s27 = build_circuit(parse_bench_file(fixture_path("s27.bench")));
  OutputConstraint cons = all_ones(1);
  for (std::size_t T : {1u, 2u, 5u}) {
    auto V = random_vars(rng, T, 2, s27.n);
    auto P = sigmoid_embed(V);
    Trace tr = forward_relaxed(s27, P);
    auto grads = backward_bptt(s27, tr, cons, V);
    auto fd = finite_diff_grads(s27, cons, V, T);
    CHECK(grads_close(grads, fd, 1e-4, 1e-7));
  }
}

TEST_CASE("AND-gate Hessian has eigenvalues +1 and -1") {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> dist(0.2, 0.8);
  for (int trial = 0; trial < 5; ++trial) {
    auto h = finite_diff_hessian2(GateOp::And, dist(rng), dist(rng));
    auto [hi, lo] = h.eigenvalues();
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(lo == doctest::Approx(-1.0).epsilon(1e-4));
  }
}

TEST_CASE("batch-row splitting is bitwise identical") {
  auto c = build_circuit(parse_bench_file(fixture_path("s27.bench")));
  std::mt19937 rng(43);
  auto V = random_vars(rng, 3, 17, c.n);
  auto P = sigmoid_embed(V);
  OutputConstraint cons = all_ones(1);

  Trace seq = forward_relaxed(c, P, 1);
  Trace par = forward_relaxed(c, P, 4);
  CHECK(seq.acts == par.acts);
  CHECK(seq.outputs == par.outputs);
  CHECK(seq.states == par.states);

  auto gseq = backward_bptt(c, seq, cons, V, 3, 1);
  auto gpar = backward_bptt(c, par, cons, V, 3, 4);
  CHECK(gseq == gpar);
}

TEST_CASE("engine shape errors") {
  auto c = load(kCtr2);
  std::vector<Matrix> bad(1, Matrix(2, 3));
  CHECK_THROWS_AS(forward_relaxed(c, bad), DimensionMismatchError);

  std::mt19937 rng(47);
  auto V = random_vars(rng, 2, 2, c.n);
  auto P = sigmoid_embed(V);
  Trace tr = forward_relaxed(c, P);
  OutputConstraint cons = all_ones(1);
  CHECK_THROWS_AS(loss(tr, cons, 0), DimensionMismatchError);
  CHECK_THROWS_AS(loss(tr, cons, 3), DimensionMismatchError);

  BatchedVars shorter = V;
  shorter.pop_back();
  CHECK_THROWS_AS(backward_bptt(c, tr, cons, shorter), TraceMismatchError);

  OutputConstraint empty_mask;
  empty_mask.target = BitMatrix(1, 1, 1);
  empty_mask.mask = {0};
  CHECK_THROWS_AS(loss(tr, empty_mask, 2), DimensionMismatchError);
}
