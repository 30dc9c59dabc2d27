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

#include <random>

#include "ftgadget/faults.hpp"
#include "ftgadget/frame.hpp"
#include "ftgadget/gadgets.hpp"
#include "ftgadget/io.hpp"
#include "ftgadget/simulate.hpp"
#include "test_support.hpp"

using namespace ftgadget;
namespace ft = ftgadget::testing;

namespace {

Gadget fig1_rep3() {
  GadgetConfig c;
  c.data_code = repetition_code(3);
  return build(c);
}

Gadget fig2_five_steane() {
  GadgetConfig c;
  c.architecture = Architecture::fig2;
  c.data_code = five_qubit_code();
  c.ancilla_outer = steane_code();
  return build(c);
}

std::vector<std::string> letters(const std::vector<PauliString>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(p.letters());
  return out;
}

const Location& first_of(const Circuit& c, LocKind k) {
  for (const auto& l : c.locations)
    if (l.kind == k) return l;
  throw std::runtime_error("no such location");
}

}  // namespace

TEST(FaultModel, Sets) {
  const FaultModel deph{NoiseKind::dephasing}, dep{NoiseKind::depolarizing};
  EXPECT_EQ(letters(deph.set(1)), (std::vector<std::string>{"Z"}));
  EXPECT_EQ(letters(deph.set(2)), (std::vector<std::string>{"IZ", "ZI", "ZZ"}));
  EXPECT_EQ(letters(dep.set(1)), (std::vector<std::string>{"X", "Y", "Z"}));
  const auto two = dep.set(2);
  EXPECT_EQ(two.size(), 15u);
  EXPECT_TRUE(std::is_sorted(two.begin(), two.end(), [](const auto& a, const auto& b) { return a.text_less(b); }));
}

TEST(Enumerate, SingleLocations) {
  const auto g = fig1_rep3();
  const auto& cz = first_of(g.circuit, LocKind::gate);
  EXPECT_EQ(location_faults(cz, FaultModel{NoiseKind::depolarizing}).size(), 15u);
  const auto& idle = first_of(g.circuit, LocKind::idle);
  const auto ev = location_faults(idle, FaultModel{NoiseKind::dephasing});
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].pauli.letters(), "Z");
  const auto& m = first_of(g.circuit, LocKind::measure_z);
  const auto mf = location_faults(m, FaultModel{NoiseKind::dephasing});
  ASSERT_EQ(mf.size(), 2u);
  EXPECT_EQ(mf[0].attach, Attach::before);
  EXPECT_TRUE(mf[1].measurement_flip);
  EXPECT_EQ(location_faults(m, FaultModel{NoiseKind::dephasing, false}).size(), 1u);
}

TEST(Enumerate, Fig1RepThreeDephasingRegression) {
  const auto g = fig1_rep3();
  const auto faults = enumerate_single_faults(g.circuit, FaultModel{NoiseKind::dephasing});
  EXPECT_EQ(faults.size(), 31u);
  std::size_t total = 0;
  for (const auto& l : g.circuit.locations) total += location_faults(l, FaultModel{NoiseKind::dephasing}).size();
  EXPECT_EQ(total, faults.size());
}

TEST(Enumerate, ExhaustiveAndOrdered) {
  const auto g = fig2_five_steane();
  const FaultModel dep{NoiseKind::depolarizing};
  const auto a = enumerate_single_faults(g.circuit, dep);
  EXPECT_EQ(a, enumerate_single_faults(g.circuit, dep));
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_LE(a[i - 1].location_id, a[i].location_id);
  for (const auto& l : g.circuit.locations) {
    const auto ev = location_faults(l, dep);
    std::size_t expect = 0;
    const auto k = l.qubits.size();
    switch (l.kind) {
      case LocKind::gate: expect = k == 2 ? 15 : 3; break;
      case LocKind::idle: expect = 3; break;
      case LocKind::prepare: expect = 3 * k; break;
      case LocKind::measure_logical: expect = 3 * k; break;
      case LocKind::classical_pauli: expect = 3 * k; break;
      case LocKind::logical_h: expect = 6 * k; break;
      case LocKind::measure_z: expect = 4; break;
      default: break;
    }
    EXPECT_EQ(ev.size(), expect) << loc_kind_name(l.kind);
  }
}

TEST(Inject, AddsOnePauliLocation) {
  const auto g = fig1_rep3();
  const auto& cz = first_of(g.circuit, LocKind::gate);
  FaultEvent f{cz.id, Attach::after, PauliString::from_text("IZ"), false};
  const auto c = inject(g.circuit, f);
  ASSERT_EQ(c.locations.size(), g.circuit.locations.size() + 1);
  const auto& added = c.locations[cz.id + 1];
  EXPECT_EQ(added.kind, LocKind::fault);
  EXPECT_EQ(added.qubits, cz.qubits);
  for (std::size_t i = 0; i < c.locations.size(); ++i) {
    if (i == cz.id + 1) continue;
    const auto& orig = g.circuit.locations[i <= cz.id ? i : i - 1];
    EXPECT_EQ(c.locations[i].kind, orig.kind);
    EXPECT_EQ(c.locations[i].qubits, orig.qubits);
  }
}

TEST(Inject, MeasurementFlipInvertsRecord) {
  const auto g = fig1_rep3();
  const auto& m = first_of(g.circuit, LocKind::measure_z);
  FaultEvent f{m.id, Attach::after, PauliString(1), true};
  const auto c = inject(g.circuit, f);
  EXPECT_EQ(c.locations.size(), g.circuit.locations.size());
  EXPECT_TRUE(c.locations[m.id].flip);
  const auto pf = propagate_frame(c, std::vector<FaultEvent>{});
  EXPECT_TRUE(pf.flipped(m.record));
  // The flipped record toggles the Z correction onto the data.
  EXPECT_EQ(pf.frame.gather({0, 1, 2}).letters(), "ZZZ");
  const auto direct = propagate_frame(g.circuit, f);
  EXPECT_EQ(direct.frame.letters(), pf.frame.letters());
}

TEST(Inject, IdentityFaultReproducesIdealRun) {
  const auto g = fig1_rep3();
  const auto& cz = first_of(g.circuit, LocKind::gate);
  const auto c = inject(g.circuit, FaultEvent{cz.id, Attach::after, PauliString(2), false});
  const auto a = StatevectorExecutor(g.circuit).run(), b = StatevectorExecutor(c).run();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int k = 0; k < 2; ++k)
      for (std::size_t j = 0; j < a[i].v[k].dim(); ++j) EXPECT_EQ(a[i].v[k][j], b[i].v[k][j]);
}

TEST(Inject, InjectedStateMatchesExecutorFault) {
  const auto g = fig2_five_steane();
  const auto faults = enumerate_single_faults(g.circuit, FaultModel{NoiseKind::depolarizing});
  const StatevectorExecutor exec(g.circuit);
  for (std::size_t i = 0; i < faults.size(); i += 97) {
    const auto a = exec.run(&faults[i]);
    const auto b = StatevectorExecutor(inject(g.circuit, faults[i])).run();
    ASSERT_EQ(a.size(), b.size()) << faults[i].to_text();
    for (std::size_t p = 0; p < a.size(); ++p)
      for (int k = 0; k < 2; ++k)
        for (std::size_t j = 0; j < a[p].v[k].dim(); ++j) EXPECT_NEAR(std::abs(a[p].v[k][j] - b[p].v[k][j]), 0, 1e-12);
  }
}

TEST(Frame, MatchesDenseConjugationThroughClifford) {
  std::mt19937_64 rng(11);
  const std::size_t n = 4;
  for (int trial = 0; trial < 20; ++trial) {
    CircuitBuilder b(n, n);
    std::vector<CliffordGate> gates;
    for (int k = 0; k < 12; ++k) {
      b.tick();
      const auto q0 = rng() % n, q1 = (q0 + 1 + rng() % (n - 1)) % n;
      const GateKind kinds[] = {GateKind::H, GateKind::S, GateKind::CX, GateKind::CZ, GateKind::CY, GateKind::S_DAG};
      const auto kind = kinds[rng() % 6];
      const CliffordGate g = is_two_qubit(kind) ? CliffordGate(kind, q0, q1) : CliffordGate(kind, q0);
      b.gate(g);
      gates.push_back(g);
    }
    const auto c = b.finish();
    const auto& first = first_of(c, LocKind::gate);
    const auto local = ft::random_pauli(first.qubits.size(), rng);
    if (local.is_identity()) continue;
    const FaultEvent f{first.id, Attach::after, local, false};
    const auto pf = propagate_frame(c, f);
    // Oracle: U_suffix P U_suffix^dagger on dense matrices.
    ft::Mat u = ft::identity(std::size_t{1} << n);
    for (std::size_t k = 1; k < gates.size(); ++k) u = ft::mul(ft::gate_matrix(gates[k], n), u);
    const auto p = local.scatter(n, first.qubits);
    const auto want = ft::mul(ft::mul(u, ft::pauli_matrix(p)), ft::dagger(u));
    EXPECT_LT(ft::max_diff(ft::pauli_matrix(pf.frame), want), 1e-12) << local.to_text();
  }
}

TEST(Frame, InjectThenPropagateAgrees) {
  const auto g = fig2_five_steane();
  const auto& cz = first_of(g.circuit, LocKind::gate);
  const FaultEvent f{cz.id, Attach::after, PauliString::from_text("XZ"), false};
  const auto direct = propagate_frame(g.circuit, f);
  const auto injected = propagate_frame(inject(g.circuit, f), std::vector<FaultEvent>{});
  EXPECT_EQ(direct.frame, injected.frame);
  EXPECT_EQ(direct.record_flips, injected.record_flips);
}

TEST(Frame, AncillaXBeforeSecondRound) {
  const auto g = fig1_rep3();
  std::vector<const Location*> czs;
  for (const auto& l : g.circuit.locations)
    if (l.kind == LocKind::gate && l.gate->kind == GateKind::CZ) czs.push_back(&l);
  ASSERT_EQ(czs.size(), 3u);
  const auto f = parse_fault(std::to_string(czs[0]->id) + ",XI", g.circuit);
  const auto pf = propagate_frame(g.circuit, f);
  EXPECT_EQ(pf.frame.gather({0, 1, 2}).letters(), "IZZ");
  EXPECT_FALSE(pf.flipped(g.record));
}

TEST(Frame, DataPhaseErrorsPassThroughFig2) {
  const auto g = fig2_five_steane();
  for (const auto& f : enumerate_single_faults(g.circuit, FaultModel{NoiseKind::dephasing})) {
    if (f.measurement_flip) continue;
    const auto& l = g.circuit.at(f.location_id);
    const auto p = f.pauli.scatter(g.circuit.width, l.qubits);
    bool data_only = true;
    for (auto q : p.support()) data_only = data_only && q < g.n_data();
    if (!data_only) continue;
    const auto pf = propagate_frame(g.circuit, f);
    EXPECT_EQ(pf.frame.with_phase(0), p.with_phase(0)) << f.to_text();
    EXPECT_FALSE(pf.flipped(g.record));
  }
}

TEST(Frame, IdentityFaultIsEmpty) {
  const auto g = fig2_five_steane();
  const auto pf = propagate_frame(g.circuit, std::vector<FaultEvent>{});
  EXPECT_TRUE(pf.frame.is_identity());
  EXPECT_FALSE(pf.flipped(g.record));
}

TEST(Frame, RejectsNonClifford) {
  GadgetConfig c;
  c.data_code = repetition_code(3);
  c.kind = GateTarget::T;
  CircuitBuilder b(1, 1);
  b.tick();
  Location l;
  l.kind = LocKind::unitary;
  l.qubits = {0};
  l.unitary = OneQubitUnitary({1, 0, 0, std::exp(cplx(0, 0.7))}, "U");
  b.push(l);
  const auto circ = b.finish();
  EXPECT_THROW(propagate_frame(circ, std::vector<FaultEvent>{}), UnsupportedError);
}

TEST(ParseFault, RoundTripsAndValidates) {
  const auto g = fig1_rep3();
  const auto faults = enumerate_single_faults(g.circuit, FaultModel{NoiseKind::depolarizing});
  for (const auto& f : faults) EXPECT_EQ(parse_fault(f.to_text(), g.circuit), f);
  EXPECT_THROW(parse_fault("4,XYZ", g.circuit), DimensionError);
  EXPECT_THROW(parse_fault("400,X", g.circuit), IndexError);
  EXPECT_THROW(parse_fault("1,FLIP", g.circuit), ValidationError);
  EXPECT_THROW(parse_fault("x,Z", g.circuit), ParseError);
}

TEST(Sample, SeededAndBounded) {
  const auto g = fig2_five_steane();
  const FaultModel dep{NoiseKind::depolarizing};
  EXPECT_TRUE(sample_faults(g.circuit, dep, 0.0, 1).empty());
  const auto all = sample_faults(g.circuit, dep, 1.0, 1);
  std::size_t faultable = 0;
  for (const auto& l : g.circuit.locations) faultable += location_faults(l, dep).empty() ? 0 : 1;
  EXPECT_EQ(all.size(), faultable);
  EXPECT_EQ(sample_faults(g.circuit, dep, 0.1, 7), sample_faults(g.circuit, dep, 0.1, 7));
}
