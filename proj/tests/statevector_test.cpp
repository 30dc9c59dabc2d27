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
#include <sstream>

#include "ftgadget/statevector.hpp"
#include "test_support.hpp"

using namespace ftgadget;
namespace ft = ftgadget::testing;

namespace {

const double kR = 1 / std::sqrt(2.0);
const cplx kI{0, 1};

DenseState random_state(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<cplx> a(std::size_t{1} << n);
  for (auto& v : a) v = {nd(rng), nd(rng)};
  auto s = DenseState::from_amplitudes(a);
  s.normalize();
  return s;
}

std::vector<cplx> apply_matrix(const ft::Mat& m, const DenseState& s) {
  std::vector<cplx> out(s.dim());
  for (std::size_t r = 0; r < s.dim(); ++r)
    for (std::size_t c = 0; c < s.dim(); ++c) out[r] += m(r, c) * s[c];
  return out;
}

double max_diff(const DenseState& s, const std::vector<cplx>& v) {
  double d = 0;
  for (std::size_t i = 0; i < v.size(); ++i) d = std::max(d, std::abs(s[i] - v[i]));
  return d;
}

}  // namespace

TEST(DenseState, GateExamples) {
  auto plus = apply_gate(DenseState(1), CliffordGate(GateKind::H, 0));
  EXPECT_NEAR(plus[0].real(), kR, 1e-12);
  EXPECT_NEAR(plus[1].real(), kR, 1e-12);
  auto s = apply_gate(plus, CliffordGate(GateKind::S, 0));
  EXPECT_LT(std::abs(s[1] - kI * kR), 1e-12);
  DenseState one1(2);
  one1.apply_pauli(PauliString::from_text("XX"));
  one1.apply_gate(CliffordGate(GateKind::CZ, 0, 1));
  EXPECT_LT(std::abs(one1[3] + 1.0), 1e-12);
}

TEST(DenseState, PauliExamples) {
  DenseState s(3);
  s.apply_pauli(PauliString::from_text("XXX"));
  s.apply_pauli(PauliString::from_text("ZZZ"));
  EXPECT_LT(std::abs(s[7] + 1.0), 1e-12);
  DenseState t(2);
  t.apply_pauli(PauliString::from_text("XI"));
  EXPECT_LT(std::abs(t[1] - 1.0), 1e-12);  // qubit 0 is the least significant bit
  EXPECT_THROW(t.apply_pauli(PauliString::from_text("X")), DimensionError);
}

TEST(DenseState, MeasureExamples) {
  DenseState minus_i = DenseState::from_amplitudes({kR, -kI * kR});
  auto [b0, b1] = measure_z(minus_i, 0);
  EXPECT_NEAR(b0.probability, 0.5, 1e-12);
  EXPECT_NEAR(b1.probability, 0.5, 1e-12);
  auto [c0, c1] = measure_z(DenseState(1), 0);
  EXPECT_NEAR(c0.probability, 1.0, 1e-12);
  EXPECT_FALSE(c1.possible);
  const double c = std::cos(M_PI / 8), sn = std::sin(M_PI / 8);
  auto [d0, d1] = measure_z(DenseState::from_amplitudes({c, -kI * sn}), 0);
  EXPECT_NEAR(d0.probability, 0.853553390593, 1e-9);
  EXPECT_NEAR(d1.probability, 0.146446609407, 1e-9);
  EXPECT_NEAR(d0.probability + d1.probability, 1.0, 1e-9);
  EXPECT_NEAR(d1.post_state.norm_sq(), 1.0, 1e-12);
}

TEST(DenseState, FidelityExamples) {
  std::mt19937_64 rng(5);
  auto a = random_state(3, rng);
  EXPECT_NEAR(fidelity(a, a), 1.0, 1e-12);
  DenseState z(2), o(2);
  o.apply_pauli(PauliString::from_text("XI"));
  EXPECT_NEAR(fidelity(z, o), 0.0, 1e-12);
  auto b = a;
  b.scale(std::polar(1.0, 0.83));
  EXPECT_NEAR(fidelity(a, b), 1.0, 1e-12);
  EXPECT_THROW(fidelity(a, z), DimensionError);
}

TEST(DenseState, GatesAgreeWithMatrixOracle) {
  std::mt19937_64 rng(9);
  const std::size_t n = 3;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<CliffordGate> gs;
      if (a == b)
        for (auto k : {GateKind::H, GateKind::S, GateKind::S_DAG, GateKind::X, GateKind::Y, GateKind::Z})
          gs.emplace_back(k, a);
      else
        for (auto k : {GateKind::CX, GateKind::CY, GateKind::CZ}) gs.emplace_back(k, a, b);
      for (const auto& g : gs) {
        auto s = random_state(n, rng);
        auto expect = apply_matrix(ft::gate_matrix(g, n), s);
        ASSERT_LT(max_diff(apply_gate(s, g), expect), 1e-12) << gate_name(g.kind);
      }
    }
}

TEST(DenseState, PauliAgreesWithMatrixOracle) {
  std::mt19937_64 rng(13);
  for (auto p : ft::all_paulis(3))
    for (int ph = 0; ph < 4; ++ph) {
      p.set_phase(ph);
      auto s = random_state(3, rng);
      ASSERT_LT(max_diff(apply_pauli(s, p), apply_matrix(ft::pauli_matrix(p), s)), 1e-12) << p.to_text();
    }
}

TEST(DenseState, GateThenInverseIsIdentity) {
  std::mt19937_64 rng(17);
  auto s = random_state(4, rng);
  auto t = s;
  const std::vector<std::pair<CliffordGate, CliffordGate>> pairs = {
      {CliffordGate(GateKind::H, 1), CliffordGate(GateKind::H, 1)},
      {CliffordGate(GateKind::S, 2), CliffordGate(GateKind::S_DAG, 2)},
      {CliffordGate(GateKind::CX, 0, 3), CliffordGate(GateKind::CX, 0, 3)},
      {CliffordGate(GateKind::CY, 3, 1), CliffordGate(GateKind::CY, 3, 1)},
      {CliffordGate(GateKind::CZ, 2, 0), CliffordGate(GateKind::CZ, 2, 0)},
      {CliffordGate(GateKind::Y, 0), CliffordGate(GateKind::Y, 0)}};
  for (const auto& [g, inv] : pairs) {
    t.apply_gate(g);
    EXPECT_NEAR(t.norm_sq(), 1.0, 1e-9);
    t.apply_gate(inv);
    ASSERT_LT(max_diff(t, std::vector<cplx>(s.amplitudes().begin(), s.amplitudes().end())), 1e-9);
  }
  const double c = std::cos(0.3), sn = std::sin(0.3);
  OneQubitUnitary u({c, -kI * sn, -kI * sn, c}, "rx");
  OneQubitUnitary ud({c, kI * sn, kI * sn, c}, "rx_dag");
  t.apply_unitary(2, u);
  t.apply_unitary(2, ud);
  ASSERT_LT(max_diff(t, std::vector<cplx>(s.amplitudes().begin(), s.amplitudes().end())), 1e-9);
}

TEST(DenseState, RejectsNonUnitaryAndOversizedStates) {
  EXPECT_THROW(OneQubitUnitary({1, 1, 0, 1}), ValidationError);
  EXPECT_THROW(DenseState(27), CapacityError);
  EXPECT_THROW(DenseState(9, 8), CapacityError);
  EXPECT_THROW(DenseState(2).apply_gate(CliffordGate(GateKind::H, 2)), IndexError);
}

TEST(DenseState, BlockMatrixMatchesSingleQubitPath) {
  std::mt19937_64 rng(21);
  auto s = random_state(4, rng);
  // Block matrix of H (x) S on qubits {3, 1}: qubit 3 is block bit 0.
  std::vector<cplx> m(16);
  const cplx h[4] = {kR, kR, kR, -kR}, sg[4] = {1, 0, 0, kI};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) m[r * 4 + c] = h[(r & 1) * 2 + (c & 1)] * sg[(r >> 1) * 2 + (c >> 1)];
  auto a = s;
  a.apply_block_matrix({3, 1}, m);
  auto b = s;
  b.apply_gate(CliffordGate(GateKind::H, 3));
  b.apply_gate(CliffordGate(GateKind::S, 1));
  ASSERT_LT(max_diff(a, std::vector<cplx>(b.amplitudes().begin(), b.amplitudes().end())), 1e-12);
}

TEST(DenseState, BlockFidelityOfProductState) {
  std::mt19937_64 rng(23);
  auto low = random_state(2, rng);
  std::vector<cplx> amps(16);
  for (std::size_t i = 0; i < 4; ++i) amps[i + 4 * 2] = low[i];
  auto s = DenseState::from_amplitudes(amps);
  EXPECT_NEAR(block_fidelity(s, low), 1.0, 1e-12);
  auto other = apply_pauli(low, PauliString::from_text("XI"));
  EXPECT_NEAR(block_fidelity(s, other), fidelity(low, other), 1e-12);
}

TEST(DenseState, DumpFormat) {
  std::ostringstream os;
  DenseState::from_amplitudes({kR, 0, 0, -kI * kR}).dump(os, 1e-15);
  std::istringstream is(os.str());
  std::size_t idx;
  double re, im;
  is >> idx >> re >> im;
  EXPECT_EQ(idx, 0u);
  EXPECT_NEAR(re, kR, 1e-15);
  is >> idx >> re >> im;
  EXPECT_EQ(idx, 3u);
  EXPECT_NEAR(im, -kR, 1e-15);
}
