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

#pragma once

/// @file
/// Stabilizer tableau (stabilizer + destabilizer rows) with exact row phases.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ftgadget/error.hpp"
#include "ftgadget/gf2.hpp"
#include "ftgadget/pauli.hpp"

namespace ftgadget {

enum class OutcomeKind { deterministic, random };

struct TableauMeasurement {
  OutcomeKind kind;
  int outcome;
};

class Tableau {
 public:
  Tableau() = default;

  /// |0...0>.
  explicit Tableau(std::size_t n) : n_(n) {
    for (std::size_t q = 0; q < n; ++q) {
      stab_.push_back(PauliString::single(n, q, 'Z'));
      destab_.push_back(PauliString::single(n, q, 'X'));
    }
  }

  /// The unique state stabilized by n independent commuting Hermitian generators.
  static Tableau from_stabilizers(const std::vector<PauliString>& gens) {
    if (gens.empty()) throw DimensionError("no generators");
    const std::size_t n = gens[0].n_qubits();
    if (gens.size() != n) throw ValidationError("a stabilizer state needs exactly n generators");
    for (std::size_t i = 0; i < n; ++i) {
      if (gens[i].phase_exp() & 1) throw ValidationError("generator is not Hermitian");
      for (std::size_t j = 0; j < i; ++j)
        if (!gens[i].commutes(gens[j])) throw ValidationError("generators do not commute");
    }
    Tableau t;
    t.n_ = n;
    t.stab_ = gens;
    t.destab_ = destabilizers_for(gens);
    return t;
  }

  std::size_t n_qubits() const { return n_; }
  const std::vector<PauliString>& stabilizers() const { return stab_; }
  const std::vector<PauliString>& destabilizers() const { return destab_; }

  void apply(const CliffordGate& g) {
    if (g.max_qubit() >= n_) throw IndexError("gate outside tableau");
    for (auto& r : stab_) r = conjugate(g, r);
    for (auto& r : destab_) r = conjugate(g, r);
  }

  /// Conjugation by the Pauli p: rows anticommuting with p change sign.
  void apply_pauli(const PauliString& p) {
    for (auto& r : stab_)
      if (!r.commutes(p)) r.set_phase(r.phase_exp() + 2);
  }

  /// Conjugates every row by an arbitrary Clifford given as a Pauli map.
  void transform(const std::function<PauliString(const PauliString&)>& map) {
    for (auto& r : stab_) r = map(r);
    for (auto& r : destab_) r = map(r);
  }

  /// +1/-1 when p (Hermitian) has a definite value, nullopt when random.
  std::optional<int> expectation(const PauliString& p) const {
    for (const auto& s : stab_)
      if (!s.commutes(p)) return std::nullopt;
    PauliString q(n_);
    for (std::size_t i = 0; i < n_; ++i)
      if (!destab_[i].commutes(p)) q *= stab_[i];
    if (!q.same_bits(p)) throw ValidationError("tableau rows are not a full basis");
    return q == p ? 1 : -1;
  }

  /// Measures the Hermitian Pauli p. Random outcomes take `forced` (default 0).
  TableauMeasurement measure(const PauliString& p, std::optional<int> forced = std::nullopt) {
    if (p.n_qubits() != n_) throw DimensionError("observable width mismatch");
    if (p.phase_exp() & 1) throw ValidationError("observable is not Hermitian");
    std::size_t pivot = n_;
    for (std::size_t i = 0; i < n_; ++i)
      if (!stab_[i].commutes(p)) {
        pivot = i;
        break;
      }
    if (pivot == n_) {
      const int outcome = *expectation(p) == 1 ? 0 : 1;
      if (forced && *forced != outcome)
        throw ContradictionError("forced outcome " + std::to_string(*forced) +
                                 " contradicts deterministic outcome " + std::to_string(outcome));
      return {OutcomeKind::deterministic, outcome};
    }
    const int outcome = forced.value_or(0);
    const PauliString sp = stab_[pivot];
    for (std::size_t i = 0; i < n_; ++i) {
      if (i != pivot && !stab_[i].commutes(p)) stab_[i] *= sp;
      if (i != pivot && !destab_[i].commutes(p)) destab_[i] *= sp;
    }
    destab_[pivot] = sp;
    stab_[pivot] = p.with_phase(p.phase_exp() + (outcome ? 2 : 0));
    return {OutcomeKind::random, outcome};
  }

  TableauMeasurement measure_z(std::size_t q, std::optional<int> forced = std::nullopt) {
    if (q >= n_) throw IndexError("qubit out of range");
    return measure(PauliString::single(n_, q, 'Z'), forced);
  }

  /**
   * Replaces fresh qubits (still in |0>, untouched) with the state stabilized by
   * `gens`, which act on the listed qubits in order.
   */
  void prepare_block(const std::vector<std::size_t>& qubits, const std::vector<PauliString>& gens) {
    Tableau local = from_stabilizers(gens);
    for (std::size_t j = 0; j < qubits.size(); ++j) {
      const std::size_t q = qubits[j];
      if (!stab_[q].same_bits(PauliString::single(n_, q, 'Z')) ||
          !destab_[q].same_bits(PauliString::single(n_, q, 'X')))
        throw UnsupportedError("prepare_block on a qubit that is not fresh");
    }
    for (std::size_t j = 0; j < qubits.size(); ++j) {
      stab_[qubits[j]] = local.stab_[j].scatter(n_, qubits);
      destab_[qubits[j]] = local.destab_[j].scatter(n_, qubits);
    }
  }

  /// Commutation structure check used by tests.
  bool is_valid() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        if (!stab_[i].commutes(stab_[j])) return false;
        if (i != j && !destab_[i].commutes(destab_[j])) return false;
        if (destab_[i].commutes(stab_[j]) != (i != j)) return false;
      }
    return true;
  }

  /// Exact group equality of the stabilizer rows, phases included.
  bool same_state(const Tableau& other) const {
    StabilizerGroup g(stab_);
    for (const auto& s : other.stab_)
      if (!g.contains(s)) return false;
    return other.n_ == n_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<PauliString> stab_;
  std::vector<PauliString> destab_;
};

inline Tableau tableau_apply(Tableau t, const CliffordGate& g) {
  t.apply(g);
  return t;
}

struct TableauMeasureResult {
  OutcomeKind kind;
  int outcome;
  Tableau state;
};

inline TableauMeasureResult tableau_measure_z(Tableau t, std::size_t q, std::optional<int> forced = std::nullopt) {
  auto m = t.measure_z(q, forced);
  return {m.kind, m.outcome, std::move(t)};
}

}  // namespace ftgadget
