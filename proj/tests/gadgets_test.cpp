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
#include <set>

#include "ftgadget/gadgets.hpp"
#include "ftgadget/io.hpp"
#include "ftgadget/simulate.hpp"
#include "test_support.hpp"

using namespace ftgadget;
namespace ft = ftgadget::testing;

namespace {

const std::string kData = FTGADGET_DATA_DIR;
const double kPi = std::acos(-1.0);
const ft::cd kI{0, 1};

ft::Mat m2(ft::cd a, ft::cd b, ft::cd c, ft::cd d) {
  ft::Mat m(2);
  m(0, 0) = a, m(0, 1) = b, m(1, 0) = c, m(1, 1) = d;
  return m;
}

ft::Mat scaled(ft::Mat m, ft::cd f) {
  for (auto& x : m.a) x *= f;
  return m;
}

ft::Mat add(ft::Mat x, const ft::Mat& y) {
  for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] += y.a[i];
  return x;
}

const double kR = 1 / std::sqrt(2.0);
const ft::Mat I2 = m2(1, 0, 0, 1), X2 = m2(0, 1, 1, 0), Y2 = m2(0, -kI, kI, 0), Z2 = m2(1, 0, 0, -1);
const ft::Mat S2 = m2(1, 0, 0, kI), Sd2 = m2(1, 0, 0, -kI), H2 = m2(kR, kR, kR, -kR);
const ft::Mat T2 = m2(1, 0, 0, std::exp(kI * (kPi / 4)));

// Smallest phase-insensitive distance between x and a unit-modulus multiple of y.
double phase_diff(const ft::Mat& x, const ft::Mat& y) {
  ft::cd ov = 0;
  double nx = 0, ny = 0;
  for (std::size_t i = 0; i < x.a.size(); ++i) {
    ov += std::conj(y.a[i]) * x.a[i];
    nx += std::norm(x.a[i]);
    ny += std::norm(y.a[i]);
  }
  if (nx == 0 || ny == 0) return 1;
  const ft::cd f = ov / ny;
  double d = 0;
  for (std::size_t i = 0; i < x.a.size(); ++i) d = std::max(d, std::abs(x.a[i] - f * y.a[i]));
  return d / std::sqrt(nx / 2);
}

GadgetConfig fig2_config(bool reduced) {
  GadgetConfig c;
  c.architecture = Architecture::fig2;
  c.data_code = five_qubit_code();
  c.ancilla_outer = steane_code();
  c.reduced_support = reduced;
  return c;
}

// Logical 2x2 map of a fault-free branch of a fig1 gadget (ancilla in a basis state after measurement).
ft::Mat branch_map(const SvPath& p, const CodeContext& data) {
  const auto& [z, o] = data.dense_codewords();
  const std::size_t bd = z.dim();
  std::size_t best = 0;
  double best_norm = -1;
  for (std::size_t base = 0; base < p.v[0].dim(); base += bd) {
    double nrm = 0;
    for (std::size_t j = 0; j < bd; ++j) nrm += std::norm(p.v[0][base + j]) + std::norm(p.v[1][base + j]);
    if (nrm > best_norm) best_norm = nrm, best = base;
  }
  ft::Mat m(2);
  for (std::size_t col = 0; col < 2; ++col)
    for (std::size_t j = 0; j < bd; ++j) {
      m(0, col) += std::conj(z[j]) * p.v[col][best + j];
      m(1, col) += std::conj(o[j]) * p.v[col][best + j];
    }
  return m;
}

}  // namespace

TEST(Algebra, PhaseAndHadamardIdentities) {
  const auto a = scaled(add(I2, scaled(Z2, -kI)), kR);
  EXPECT_LT(ft::max_diff(a, scaled(S2, std::exp(-kI * (kPi / 4)))), 1e-12);
  const auto b = scaled(add(I2, scaled(Z2, kI)), kR);
  EXPECT_LT(ft::max_diff(b, scaled(Sd2, std::exp(kI * (kPi / 4)))), 1e-12);
  EXPECT_LT(ft::max_diff(ft::mul(Z2, Sd2), S2), 1e-12);
  const auto c = scaled(add(I2, scaled(Y2, -kI)), kR);
  EXPECT_LT(phase_diff(c, ft::mul(X2, H2)), 1e-12);
  const auto t = add(scaled(I2, std::cos(kPi / 8)), scaled(Z2, -kI * std::sin(kPi / 8)));
  EXPECT_LT(phase_diff(t, T2), 1e-12);
  // S T^dagger = T, so a T^dagger branch is repaired by S.
  EXPECT_LT(ft::max_diff(ft::mul(S2, ft::dagger(T2)), T2), 1e-12);
}

TEST(Algebra, HadamardBranchCorrections) {
  // Branch b of the Y-coupled gadget applies (I -/+ iY)/sqrt2.
  const auto b0 = scaled(add(I2, scaled(Y2, -kI)), kR);
  const auto b1 = scaled(add(I2, scaled(Y2, kI)), kR);
  EXPECT_LT(phase_diff(ft::mul(X2, b0), H2), 1e-12);
  EXPECT_LT(phase_diff(ft::mul(Z2, b1), H2), 1e-12);
  // Applying X and then Z on outcome 1 does not give H.
  EXPECT_GT(phase_diff(ft::mul(ft::mul(Z2, X2), b1), H2), 0.1);
}

TEST(Algebra, PiOverEightEigenvector) {
  const ft::cd v0 = std::cos(kPi / 8), v1 = -kI * std::sin(kPi / 8);
  auto is_plus_eigvec = [&](const ft::Mat& u) {
    const ft::cd w0 = u(0, 0) * v0 + u(0, 1) * v1, w1 = u(1, 0) * v0 + u(1, 1) * v1;
    return std::abs(w0 - v0) < 1e-12 && std::abs(w1 - v1) < 1e-12;
  };
  const auto shs_dag = ft::mul(ft::mul(S2, H2), Sd2);
  const auto sdag_hs = ft::mul(ft::mul(Sd2, H2), S2);
  EXPECT_TRUE(is_plus_eigvec(sdag_hs));
  EXPECT_FALSE(is_plus_eigvec(shs_dag));
  EXPECT_NEAR(std::abs(prep_amplitudes(PrepLabel::pi_8).first - v0), 0, 1e-15);
  EXPECT_NEAR(std::abs(prep_amplitudes(PrepLabel::pi_8).second - v1), 0, 1e-15);
}

TEST(Build, Fig2CouplingCounts) {
  const auto full = build(fig2_config(false));
  EXPECT_EQ(full.coupling_count(), 35u);
  EXPECT_EQ(full.circuit.count(LocKind::gate, GateKind::CZ), 35u);
  const auto reduced = build(fig2_config(true));
  EXPECT_EQ(reduced.coupling_count(), 15u);
  EXPECT_EQ(reduced.support, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_GE(reduced.support.size(), 3u);
  EXPECT_EQ(full.circuit.width, 12u);
}

TEST(Build, CountIsDataLengthTimesSupport) {
  for (auto code : {repetition_code(3), steane_code(), repetition_code(5)})
    for (bool reduced : {false, true}) {
      GadgetConfig c;
      c.architecture = Architecture::fig2;
      c.data_code = repetition_code(3);
      c.ancilla_outer = code;
      c.reduced_support = reduced;
      const auto g = build(c);
      EXPECT_EQ(g.coupling_count(), 3 * g.support.size());
      EXPECT_GE(g.support.size(), code.distance);
    }
}

TEST(Build, Fig3RepThreeSteaneShape) {
  GadgetConfig c;
  c.architecture = Architecture::fig3;
  c.data_code = repetition_code(3);
  c.ancilla_outer = steane_code();
  const auto g = build(c);
  EXPECT_EQ(g.ancilla_qubits.size(), 21u);
  EXPECT_EQ(g.circuit.width, 24u);
  std::map<std::size_t, std::vector<const Location*>> per_step;
  for (std::size_t i = 0; i < g.coupling_end; ++i) {
    const auto& l = g.circuit.locations[i];
    if (l.kind == LocKind::gate && l.gate->kind == GateKind::CZ) per_step[l.timestep].push_back(&l);
  }
  ASSERT_EQ(per_step.size(), 7u);
  std::size_t j = 0;
  for (const auto& [step, gates] : per_step) {
    ASSERT_EQ(gates.size(), 3u);
    std::set<std::size_t> touched;
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& q = gates[i]->qubits;
      EXPECT_EQ(q, (std::vector<std::size_t>{3 + 3 * j + i, i}));
      EXPECT_TRUE(touched.insert(q[0]).second && touched.insert(q[1]).second);
    }
    ++j;
  }
}

TEST(Build, Fig3InterleavedEcAfterEveryRound) {
  GadgetConfig c;
  c.architecture = Architecture::fig3;
  c.data_code = repetition_code(3);
  c.ancilla_outer = repetition_code(3);
  c.interleave_ec = true;
  const auto g = build(c);
  EXPECT_EQ(g.circuit.count(LocKind::ec_subgadget), 3u);
  EXPECT_EQ(g.round_ends.size(), 3u);
  // rep-3 has no transversal H, so one idealized logical H block stands in.
  EXPECT_FALSE(g.ancilla_h_transversal);
}

TEST(Build, RejectsBadConfigs) {
  GadgetConfig c;
  c.architecture = Architecture::fig2;
  EXPECT_THROW(build(c), ValidationError);  // no ancilla code
  c.architecture = Architecture::fig3;
  c.ancilla_outer = steane_code();
  c.data_code = repetition_code(4);  // Z^4 is not logical Z
  EXPECT_THROW(build(c), ValidationError);
  GadgetConfig d;
  d.interleave_ec = true;
  EXPECT_THROW(build(d), ValidationError);
}

TEST(Build, Fig1Layout) {
  GadgetConfig c;
  c.data_code = repetition_code(3);
  const auto g = build(c);
  EXPECT_EQ(g.circuit.width, 4u);
  EXPECT_EQ(g.circuit.count(LocKind::gate, GateKind::CZ), 3u);
  EXPECT_EQ(g.circuit.count(LocKind::measure_z), 1u);
  EXPECT_EQ(g.circuit.count(LocKind::prepare), 1u);
  EXPECT_TRUE(g.circuit.clifford_only());
  c.kind = GateTarget::T;
  const auto t = build(c);
  EXPECT_FALSE(t.circuit.clifford_only());
  EXPECT_EQ(t.circuit.width, 5u);  // second ancilla for the chained S gadget
  c.t_correction_mode = TCorrectionMode::repeat_until_success;
  EXPECT_EQ(build(c).circuit.width, 4u);
}

TEST(Corrections, RulesPerKind) {
  const auto s = classical_correction_rule(steane_code(), GateTarget::S);
  EXPECT_EQ(s.branch[0].logical, 'I');
  EXPECT_EQ(s.branch[1].logical, 'Z');
  // Y^5 = +Y_L on the five-qubit code; Y^7 = -Y_L on Steane swaps the branches.
  const auto h5 = classical_correction_rule(five_qubit_code(), GateTarget::H);
  EXPECT_EQ(h5.branch[0].logical, 'X');
  EXPECT_EQ(h5.branch[1].logical, 'Z');
  const auto h7 = classical_correction_rule(steane_code(), GateTarget::H);
  EXPECT_EQ(h7.branch[0].logical, 'Z');
  EXPECT_EQ(h7.branch[1].logical, 'X');
  const auto t = classical_correction_rule(repetition_code(3), GateTarget::T);
  EXPECT_EQ(t.branch[0].logical, 'I');
  EXPECT_TRUE(t.branch[1].chain_s);
}

TEST(Corrections, RuleFollowsTheSignOfTheCouplingPauli) {
  const auto h = classical_correction_rule(steane_code(), GateTarget::H);
  const auto act = logical_action(CodeSpec{steane_code()}, transversal(7, 'Y'));
  EXPECT_LT(std::abs(act[1] - cplx(0, 1)), 1e-9);
  const bool minus = std::abs(act[1] - cplx(0, 1)) < 1e-9;  // -Y has +i in the top-right corner
  EXPECT_EQ(h.branch[0].logical, minus ? 'Z' : 'X');
  EXPECT_EQ(h.branch[1].logical, minus ? 'X' : 'Z');
}

TEST(Gadgets, SAndHGenerateTheCliffordGroup) {
  GadgetConfig c;
  c.data_code = repetition_code(3);
  std::vector<ft::Mat> maps;
  for (auto kind : {GateTarget::S, GateTarget::H}) {
    c.kind = kind;
    const auto g = build(c);
    const StatevectorExecutor exec(g.circuit);
    const auto paths = exec.run();
    ASSERT_EQ(paths.size(), 2u);
    const auto& target = kind == GateTarget::S ? S2 : H2;
    for (const auto& p : paths) EXPECT_LT(phase_diff(branch_map(p, g.data()), target), 1e-9);
    maps.push_back(branch_map(paths[1], g.data()));
  }
  // Closure up to phase of the branch maps.
  std::vector<ft::Mat> group{I2};
  for (std::size_t i = 0; i < group.size() && group.size() < 100; ++i)
    for (const auto& g : maps) {
      const auto next = ft::mul(g, group[i]);
      bool seen = false;
      for (const auto& h : group) seen = seen || phase_diff(next, h) < 1e-9;
      if (!seen) group.push_back(next);
    }
  EXPECT_EQ(group.size(), 24u);
  // S H S H S H is a phase.
  ft::Mat w = I2;
  for (int k = 0; k < 3; ++k) w = ft::mul(maps[1], ft::mul(maps[0], w));
  EXPECT_LT(phase_diff(w, I2), 1e-9);
}

TEST(Gadgets, RepeatUntilSuccessKeepsOutcomeZero) {
  GadgetConfig c;
  c.kind = GateTarget::T;
  c.data_code = repetition_code(3);
  c.t_correction_mode = TCorrectionMode::repeat_until_success;
  const auto g = build(c);
  EXPECT_TRUE(g.repeat_until_success);
  const StatevectorExecutor exec(g.circuit);
  for (const auto& p : exec.run()) {
    const auto m = branch_map(p, g.data());
    const auto& want = p.records[static_cast<std::size_t>(g.record)] == 0 ? T2 : ft::dagger(T2);
    EXPECT_LT(phase_diff(m, want), 1e-9);
  }
}

TEST(MeasurementSubgadget, SteaneMinusIHasEvenOutcomes) {
  const CodeContext steane(steane_code());
  const auto frag = measurement_subgadget(steane);
  ASSERT_EQ(frag.locations.size(), 1u);
  EXPECT_EQ(frag.locations[0].kind, LocKind::measure_logical);
  const auto& [z, o] = steane.dense_codewords();
  auto state = z;
  for (std::size_t i = 0; i < state.dim(); ++i) state[i] = (z[i] - cplx(0, 1) * o[i]) / std::sqrt(2.0);
  const auto branches = recovery_branches(steane.decoder(), {state}, 0);
  ASSERT_EQ(branches.size(), 1u);
  for (int b = 0; b < 2; ++b) {
    auto s = branches[0].states[0];
    s.project_pauli(steane.stab().logical_z, b);
    EXPECT_NEAR(s.norm_sq(), 0.5, 1e-12);
  }
}

TEST(MeasurementSubgadget, CorrectsAnXBeforeReadout) {
  const CodeContext steane(steane_code());
  auto s = apply_pauli(steane.dense_codewords().first, PauliString::single(7, 3, 'X'));
  const auto branches = recovery_branches(steane.decoder(), {s}, 0);
  ASSERT_EQ(branches.size(), 1u);
  auto out = branches[0].states[0];
  out.project_pauli(steane.stab().logical_z, 1);
  EXPECT_LT(out.norm_sq(), 1e-12);
}

TEST(MeasurementSubgadget, RepThreePhaseErrorIsInvisibleToReadout) {
  const CodeContext rep(repetition_code(3));
  const auto& [z, o] = rep.dense_codewords();
  auto plus = z;
  for (std::size_t i = 0; i < plus.dim(); ++i) plus[i] = (z[i] + o[i]) / std::sqrt(2.0);
  const auto faulty = apply_pauli(plus, PauliString::single(3, 1, 'Z'));
  for (int b = 0; b < 2; ++b) {
    auto a = plus, f = faulty;
    a.project_pauli(rep.stab().logical_z, b);
    f.project_pauli(rep.stab().logical_z, b);
    EXPECT_NEAR(a.norm_sq(), f.norm_sq(), 1e-12);
    // On each branch the phase error acts as a sign the readout cannot see.
    EXPECT_NEAR(std::abs(a.inner(f)), a.norm_sq(), 1e-12);
  }
}

TEST(CircuitText, RoundTrips) {
  std::vector<GadgetConfig> cfgs{fig2_config(true)};
  GadgetConfig t;
  t.kind = GateTarget::T;
  t.data_code = steane_code();
  cfgs.push_back(t);
  GadgetConfig f3;
  f3.architecture = Architecture::fig3;
  f3.data_code = repetition_code(3);
  f3.ancilla_outer = repetition_code(3);
  f3.interleave_ec = true;
  cfgs.push_back(f3);
  for (const auto& c : cfgs) {
    const auto g = build(c);
    const auto text = circuit_to_text(g.circuit);
    const auto back = circuit_from_text(text);
    EXPECT_EQ(circuit_to_text(back), text);
    EXPECT_EQ(back.locations.size(), g.circuit.locations.size());
    EXPECT_EQ(back.clifford_only(), g.circuit.clifford_only());
  }
}

TEST(CircuitText, ReportsLineOfBadInput) {
  try {
    circuit_from_text("ftgadget-circuit 1\nwidth 2\ndata 1\nrecords 0\n0 0 gate name=CQ q=0,1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos) << e.what();
  }
}
