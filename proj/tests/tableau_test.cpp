// Copyright 2026 The ftgadget Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ftgadget/codes.hpp"
#include "ftgadget/statevector.hpp"
#include "ftgadget/tableau.hpp"
#include "test_support.hpp"

using namespace ftgadget;
namespace ft = ftgadget::testing;

namespace {

std::vector<PauliString> texts(std::initializer_list<const char*> ts) {
  std::vector<PauliString> out;
  for (auto t : ts) out.push_back(PauliString::from_text(t));
  return out;
}

bool group_equals(const Tableau& t, const std::vector<PauliString>& expected) {
  StabilizerGroup g(t.stabilizers());
  for (const auto& e : expected)
    if (!g.contains(e)) return false;
  return expected.size() == t.n_qubits();
}

// <psi|P|psi> computed on dense amplitudes.
double dense_expectation(const DenseState& s, const PauliString& p) {
  return s.inner(apply_pauli(s, p)).real();
}

CliffordGate random_gate(std::size_t n, std::mt19937_64& rng) {
  static const GateKind one[] = {GateKind::H, GateKind::S, GateKind::S_DAG, GateKind::X, GateKind::Y, GateKind::Z};
  static const GateKind two[] = {GateKind::CX, GateKind::CY, GateKind::CZ};
  std::uniform_int_distribution<std::size_t> q(0, n - 1);
  if (rng() % 2) return CliffordGate(one[rng() % 6], q(rng));
  std::size_t a = q(rng), b = q(rng);
  while (b == a) b = q(rng);
  return CliffordGate(two[rng() % 3], a, b);
}

}  // namespace

TEST(Tableau, HadamardOnZero) {
  auto t = tableau_apply(Tableau(1), CliffordGate(GateKind::H, 0));
  ASSERT_EQ(t.stabilizers().size(), 1u);
  EXPECT_EQ(t.stabilizers()[0].to_text(), "X");
}

TEST(Tableau, BellState) {
  Tableau t(2);
  t.apply(CliffordGate(GateKind::H, 0));
  t.apply(CliffordGate(GateKind::CX, 0, 1));
  EXPECT_TRUE(group_equals(t, texts({"XX", "ZZ"})));
  EXPECT_TRUE(t.is_valid());
}

TEST(Tableau, SteaneTransversalZKeepsLogicalZero) {
  const auto code = steane_code();
  auto gens = code.generators;
  gens.push_back(code.logical_z);
  const auto zero = Tableau::from_stabilizers(gens);
  auto t = zero;
  for (std::size_t q = 0; q < 7; ++q) t.apply(CliffordGate(GateKind::Z, q));
  EXPECT_TRUE(t.same_state(zero));
  EXPECT_EQ(t.expectation(code.logical_z), 1);
}

TEST(Tableau, MeasureExamples) {
  auto r = tableau_measure_z(Tableau(1), 0);
  EXPECT_EQ(r.kind, OutcomeKind::deterministic);
  EXPECT_EQ(r.outcome, 0);

  auto plus = tableau_apply(Tableau(1), CliffordGate(GateKind::H, 0));
  auto m = tableau_measure_z(plus, 0, 1);
  EXPECT_EQ(m.kind, OutcomeKind::random);
  EXPECT_EQ(m.outcome, 1);
  EXPECT_EQ(m.state.expectation(PauliString::from_text("Z")), -1);

  EXPECT_THROW(tableau_measure_z(Tableau(1), 0, 1), ContradictionError);
  EXPECT_THROW(tableau_measure_z(Tableau(1), 3), IndexError);
}

TEST(Tableau, SteaneMinusILogicalMeasurementBranches) {
  const auto code = steane_code();
  auto gens = code.generators;
  PauliString y = code.logical_x * code.logical_z;  // -i Y_L
  y.set_phase(y.phase_exp() + 1);
  gens.push_back(y.with_phase(y.phase_exp() + 2));  // -Y_L stabilizes |-i_L>
  const auto t = Tableau::from_stabilizers(gens);
  for (int b = 0; b < 2; ++b) {
    auto copy = t;
    const auto r = copy.measure(code.logical_z, b);
    EXPECT_EQ(r.kind, OutcomeKind::random);
    EXPECT_EQ(copy.expectation(code.logical_z), b ? -1 : 1);
  }
  // Dense oracle: both branches have probability one half.
  const double r2 = 1 / std::sqrt(2.0);
  auto s = encode(code, r2, cplx{0, -r2});
  EXPECT_NEAR(dense_expectation(s, y), -1.0, 1e-12);
  auto p0 = s;
  p0.project_pauli(code.logical_z, 0);
  EXPECT_NEAR(p0.norm_sq(), 0.5, 1e-12);
}

TEST(Tableau, RandomCliffordAgreesWithStatevector) {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 11;
    Tableau t(n);
    DenseState s(n);
    for (int step = 0; step < 40; ++step) {
      if (step % 13 == 12) {
        const std::size_t q = rng() % n;
        const int forced = static_cast<int>(rng() % 2);
        auto branches = measure_z(s, q);
        const auto& chosen = forced ? branches.second : branches.first;
        const double p = chosen.probability;
        auto m = t.measure_z(q, chosen.possible ? forced : 1 - forced);
        if (m.kind == OutcomeKind::deterministic) {
          EXPECT_NEAR(m.outcome ? branches.second.probability : branches.first.probability, 1.0, 1e-9);
          s = m.outcome ? branches.second.post_state : branches.first.post_state;
        } else {
          EXPECT_NEAR(p, 0.5, 1e-9);
          s = chosen.post_state;
        }
        continue;
      }
      const auto g = random_gate(n, rng);
      t.apply(g);
      s.apply_gate(g);
    }
    ASSERT_TRUE(t.is_valid());
    for (int k = 0; k < 30; ++k) {
      auto p = ft::random_pauli(n, rng);
      p.set_phase(0);
      const double dense = dense_expectation(s, p);
      const auto e = t.expectation(p);
      if (e) {
        EXPECT_NEAR(dense, *e, 1e-9) << p.to_text();
      } else {
        EXPECT_NEAR(dense, 0.0, 1e-9) << p.to_text();
      }
    }
  }
}

TEST(Tableau, PrepareBlockOnFreshQubits) {
  Tableau t(4);
  t.apply(CliffordGate(GateKind::H, 0));
  t.prepare_block({1, 2, 3}, texts({"ZZI", "IZZ", "XXX"}));
  EXPECT_EQ(t.expectation(PauliString::from_text("IXXX")), 1);
  EXPECT_EQ(t.expectation(PauliString::from_text("XIII")), 1);
  EXPECT_EQ(t.expectation(PauliString::from_text("IZZI")), 1);
  EXPECT_TRUE(t.is_valid());
}

TEST(Tableau, PauliFlipsAnticommutingSigns) {
  Tableau t(2);
  t.apply_pauli(PauliString::from_text("XI"));
  EXPECT_EQ(t.expectation(PauliString::from_text("ZI")), -1);
  EXPECT_EQ(t.expectation(PauliString::from_text("IZ")), 1);
}
