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
/// Small dense GF(2) linear algebra and stabilizer-group utilities.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ftgadget/error.hpp"
#include "ftgadget/pauli.hpp"

namespace ftgadget {

class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v = true) {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    w_[i >> 6] = v ? (w_[i >> 6] | m) : (w_[i >> 6] & ~m);
  }
  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  BitVec& operator^=(const BitVec& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
  }
  bool dot(const BitVec& o) const {
    std::size_t c = 0;
    for (std::size_t k = 0; k < w_.size(); ++k) c += std::popcount(w_[k] & o.w_[k]);
    return c & 1u;
  }
  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }
  bool operator==(const BitVec&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

/// Symplectic vector (x | z) of a Pauli, length 2n.
inline BitVec symplectic(const PauliString& p) {
  const std::size_t n = p.n_qubits();
  BitVec v(2 * n);
  for (std::size_t q = 0; q < n; ++q) {
    if (p.x(q)) v.set(q);
    if (p.z(q)) v.set(n + q);
  }
  return v;
}

inline PauliString from_symplectic(const BitVec& v, std::size_t n) {
  PauliString p(n);
  for (std::size_t q = 0; q < n; ++q) p.set(q, v.get(q), v.get(n + q));
  return p;
}

/// Coefficients c with sum_i c_i rows[i] = target, or nullopt when target is outside the span.
inline std::optional<std::vector<bool>> express(const std::vector<BitVec>& rows, const BitVec& target) {
  const std::size_t k = rows.size();
  std::vector<BitVec> r = rows;
  std::vector<BitVec> combo(k, BitVec(k));
  for (std::size_t i = 0; i < k; ++i) combo[i].set(i);
  std::vector<std::size_t> pivot_col;
  std::vector<std::size_t> pivot_row;
  const std::size_t L = target.size();
  std::size_t next = 0;
  for (std::size_t col = 0; col < L && next < k; ++col) {
    std::size_t sel = k;
    for (std::size_t i = next; i < k; ++i)
      if (r[i].get(col)) {
        sel = i;
        break;
      }
    if (sel == k) continue;
    std::swap(r[sel], r[next]);
    std::swap(combo[sel], combo[next]);
    for (std::size_t i = 0; i < k; ++i)
      if (i != next && r[i].get(col)) {
        r[i] ^= r[next];
        combo[i] ^= combo[next];
      }
    pivot_col.push_back(col);
    pivot_row.push_back(next);
    ++next;
  }
  BitVec t = target;
  BitVec c(k);
  for (std::size_t j = 0; j < pivot_col.size(); ++j)
    if (t.get(pivot_col[j])) {
      t ^= r[pivot_row[j]];
      c ^= combo[pivot_row[j]];
    }
  if (t.any()) return std::nullopt;
  std::vector<bool> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = c.get(i);
  return out;
}

/// Rank over GF(2).
inline std::size_t gf2_rank(std::vector<BitVec> rows) {
  if (rows.empty()) return 0;
  const std::size_t L = rows[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < L && rank < rows.size(); ++col) {
    std::size_t sel = rows.size();
    for (std::size_t i = rank; i < rows.size(); ++i)
      if (rows[i].get(col)) {
        sel = i;
        break;
      }
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[rank]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != rank && rows[i].get(col)) rows[i] ^= rows[rank];
    ++rank;
  }
  return rank;
}

/// Some x with eqs[i].dot(x) == rhs[i] for every i, or nullopt.
inline std::optional<BitVec> solve(std::vector<BitVec> eqs, std::vector<bool> rhs) {
  if (eqs.empty()) return std::nullopt;
  const std::size_t L = eqs[0].size();
  const std::size_t m = eqs.size();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < L && row < m; ++col) {
    std::size_t sel = m;
    for (std::size_t i = row; i < m; ++i)
      if (eqs[i].get(col)) {
        sel = i;
        break;
      }
    if (sel == m) continue;
    std::swap(eqs[sel], eqs[row]);
    std::swap(rhs[sel], rhs[row]);
    for (std::size_t i = 0; i < m; ++i)
      if (i != row && eqs[i].get(col)) {
        eqs[i] ^= eqs[row];
        rhs[i] = rhs[i] != rhs[row];
      }
    pivots.push_back(col);
    ++row;
  }
  for (std::size_t i = row; i < m; ++i)
    if (rhs[i]) return std::nullopt;
  BitVec x(L);
  for (std::size_t i = 0; i < pivots.size(); ++i)
    if (rhs[i]) x.set(pivots[i]);
  return x;
}

/// Product of the selected Paulis in index order, exact phase.
inline PauliString product_of(const std::vector<PauliString>& ps, const std::vector<bool>& pick,
                              std::size_t n) {
  PauliString acc(n);
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (pick[i]) acc *= ps[i];
  return acc;
}

/// Abelian Pauli group given by generators; supports exact membership tests.
class StabilizerGroup {
 public:
  StabilizerGroup() = default;
  explicit StabilizerGroup(std::vector<PauliString> gens) : gens_(std::move(gens)) {
    if (gens_.empty()) return;
    n_ = gens_[0].n_qubits();
    for (const auto& g : gens_) {
      if (g.n_qubits() != n_) throw DimensionError("generator length mismatch");
      rows_.push_back(symplectic(g));
    }
  }

  const std::vector<PauliString>& generators() const { return gens_; }
  std::size_t n_qubits() const { return n_; }

  /// Generator subset whose product matches p up to phase, if any.
  std::optional<std::vector<bool>> decompose(const PauliString& p) const {
    if (gens_.empty()) {
      if (p.is_identity()) return std::vector<bool>{};
      return std::nullopt;
    }
    return express(rows_, symplectic(p));
  }

  /// Element of the group equal to p up to phase (with the group's own phase), if any.
  std::optional<PauliString> element_matching(const PauliString& p) const {
    auto c = decompose(p);
    if (!c) return std::nullopt;
    if (gens_.empty()) return PauliString(p.n_qubits());
    return product_of(gens_, *c, n_);
  }

  /// Exact membership including phase.
  bool contains(const PauliString& p) const {
    auto e = element_matching(p);
    return e && *e == p;
  }

  bool contains_up_to_phase(const PauliString& p) const { return decompose(p).has_value(); }

  /// Syndrome bits: bit i set iff p anticommutes with generator i.
  std::vector<bool> syndrome(const PauliString& p) const {
    std::vector<bool> s(gens_.size());
    for (std::size_t i = 0; i < gens_.size(); ++i) s[i] = !gens_[i].commutes(p);
    return s;
  }

 private:
  std::size_t n_ = 0;
  std::vector<PauliString> gens_;
  std::vector<BitVec> rows_;
};

/**
 * Hermitian Paulis d_i with d_i anticommuting with stabs[i] only, commuting with
 * every entry of `also_commute`, and with each other.
 */
inline std::vector<PauliString> destabilizers_for(const std::vector<PauliString>& stabs,
                                                  const std::vector<PauliString>& also_commute = {}) {
  if (stabs.empty()) return {};
  const std::size_t n = stabs[0].n_qubits();
  // <v, g> = v_x . g_z + v_z . g_x, so the equation row is g with planes swapped.
  auto eq_row = [n](const PauliString& g) {
    BitVec r(2 * n);
    for (std::size_t q = 0; q < n; ++q) {
      if (g.z(q)) r.set(q);
      if (g.x(q)) r.set(n + q);
    }
    return r;
  };
  std::vector<BitVec> eqs;
  for (const auto& g : stabs) eqs.push_back(eq_row(g));
  for (const auto& g : also_commute) eqs.push_back(eq_row(g));
  std::vector<PauliString> out;
  for (std::size_t i = 0; i < stabs.size(); ++i) {
    std::vector<bool> rhs(eqs.size(), false);
    rhs[i] = true;
    auto v = solve(eqs, rhs);
    if (!v) throw ValidationError("stabilizer generators are not independent");
    out.push_back(from_symplectic(*v, n));
  }
  // Make the destabilizers mutually commute by folding in stabilizers.
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!out[i].commutes(out[j])) out[i].xor_bits(stabs[j]);
  for (auto& d : out) d.set_phase(0);
  return out;
}

}  // namespace ftgadget
