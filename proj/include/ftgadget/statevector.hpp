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
/// Dense amplitude simulator. Amplitude index b holds qubit q in bit q of b.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ftgadget/error.hpp"
#include "ftgadget/pauli.hpp"

namespace ftgadget {

using cplx = std::complex<double>;

inline constexpr std::size_t kDefaultMaxQubits = 26;
inline constexpr double kImpossibleBranch = 1e-12;

/// 2x2 unitary acting on one qubit, row-major {m00, m01, m10, m11}.
struct OneQubitUnitary {
  std::array<cplx, 4> m{};
  std::string label;

  OneQubitUnitary() = default;
  OneQubitUnitary(std::array<cplx, 4> mat, std::string name = "U") : m(mat), label(std::move(name)) {
    const cplx a = std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2];
    const cplx b = std::conj(m[1]) * m[1] + std::conj(m[3]) * m[3];
    const cplx c = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
    if (std::abs(a - 1.0) > 1e-9 || std::abs(b - 1.0) > 1e-9 || std::abs(c) > 1e-9)
      throw ValidationError("matrix '" + label + "' is not unitary");
  }
};

class DenseState {
 public:
  DenseState() = default;

  /// |0...0> on n qubits.
  explicit DenseState(std::size_t n_qubits, std::size_t max_qubits = kDefaultMaxQubits) : n_(n_qubits) {
    check_capacity(n_qubits, max_qubits);
    amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
  }

  static DenseState from_amplitudes(std::vector<cplx> amps) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < amps.size()) ++n;
    if ((std::size_t{1} << n) != amps.size() || amps.empty())
      throw DimensionError("amplitude count must be a power of two");
    DenseState s;
    s.n_ = n;
    s.amps_ = std::move(amps);
    return s;
  }

  static void check_capacity(std::size_t n_qubits, std::size_t max_qubits = kDefaultMaxQubits) {
    if (n_qubits > max_qubits)
      throw CapacityError("statevector of " + std::to_string(n_qubits) +
                          " qubits exceeds the limit of " + std::to_string(max_qubits) +
                          "; use the tableau backend for Clifford circuits or smaller codes");
  }

  std::size_t n_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const cplx> amplitudes() const { return amps_; }
  std::span<cplx> amplitudes() { return amps_; }
  cplx& operator[](std::size_t i) { return amps_[i]; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }

  double norm_sq() const {
    double s = 0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }
  void normalize() {
    const double nrm = std::sqrt(norm_sq());
    if (nrm == 0) throw ValidationError("cannot normalize the zero vector");
    for (auto& a : amps_) a /= nrm;
  }
  void scale(cplx f) {
    for (auto& a : amps_) a *= f;
  }

  void apply_gate(const CliffordGate& g) {
    check_qubit(g.max_qubit());
    const std::size_t a = std::size_t{1} << g.qubits[0];
    const std::size_t b = std::size_t{1} << g.qubits[1];
    const cplx I{0.0, 1.0};
    const double r = 1.0 / std::sqrt(2.0);
    switch (g.kind) {
      case GateKind::H:
        for (std::size_t i = 0; i < dim(); ++i)
          if (!(i & a)) {
            const cplx u = amps_[i], v = amps_[i | a];
            amps_[i] = r * (u + v);
            amps_[i | a] = r * (u - v);
          }
        break;
      case GateKind::S:
      case GateKind::S_DAG: {
        const cplx f = g.kind == GateKind::S ? I : -I;
        for (std::size_t i = 0; i < dim(); ++i)
          if (i & a) amps_[i] *= f;
        break;
      }
      case GateKind::X:
      case GateKind::Y:
      case GateKind::Z:
        apply_pauli(PauliString::single(n_, g.qubits[0], gate_name(g.kind)[0]));
        break;
      case GateKind::CZ:
        for (std::size_t i = 0; i < dim(); ++i)
          if ((i & a) && (i & b)) amps_[i] = -amps_[i];
        break;
      case GateKind::CX:
        for (std::size_t i = 0; i < dim(); ++i)
          if ((i & a) && !(i & b)) std::swap(amps_[i], amps_[i | b]);
        break;
      case GateKind::CY:
        // Y|0> = i|1>, Y|1> = -i|0>
        for (std::size_t i = 0; i < dim(); ++i)
          if ((i & a) && !(i & b)) {
            const cplx u = amps_[i], v = amps_[i | b];
            amps_[i] = -I * v;
            amps_[i | b] = I * u;
          }
        break;
    }
  }

  void apply_unitary(std::size_t q, const OneQubitUnitary& u) {
    check_qubit(q);
    const std::size_t a = std::size_t{1} << q;
    for (std::size_t i = 0; i < dim(); ++i)
      if (!(i & a)) {
        const cplx v0 = amps_[i], v1 = amps_[i | a];
        amps_[i] = u.m[0] * v0 + u.m[1] * v1;
        amps_[i | a] = u.m[2] * v0 + u.m[3] * v1;
      }
  }

  /// Applies a 2^k x 2^k row-major matrix to the listed qubits (qubits[j] is bit j of the block index).
  void apply_block_matrix(const std::vector<std::size_t>& qubits, std::span<const cplx> matrix) {
    const std::size_t k = qubits.size();
    const std::size_t bd = std::size_t{1} << k;
    if (matrix.size() != bd * bd) throw DimensionError("block matrix size mismatch");
    std::size_t block_mask = 0;
    for (auto q : qubits) {
      check_qubit(q);
      block_mask |= std::size_t{1} << q;
    }
    std::vector<std::size_t> offset(bd, 0);
    for (std::size_t j = 0; j < bd; ++j)
      for (std::size_t t = 0; t < k; ++t)
        if ((j >> t) & 1u) offset[j] |= std::size_t{1} << qubits[t];
    std::vector<cplx> in(bd), out(bd);
    for (std::size_t base = 0; base < dim(); ++base) {
      if (base & block_mask) continue;
      bool any = false;
      for (std::size_t j = 0; j < bd; ++j) {
        in[j] = amps_[base | offset[j]];
        any = any || in[j] != cplx{};
      }
      if (!any) continue;
      for (std::size_t r = 0; r < bd; ++r) {
        cplx acc{};
        const cplx* row = matrix.data() + r * bd;
        for (std::size_t c = 0; c < bd; ++c) acc += row[c] * in[c];
        out[r] = acc;
      }
      for (std::size_t j = 0; j < bd; ++j) amps_[base | offset[j]] = out[j];
    }
  }

  /// Multiplies the state by the operator p, phase included.
  void apply_pauli(const PauliString& p) {
    if (p.n_qubits() != n_) throw DimensionError("Pauli width does not match state");
    const std::uint64_t xm = p.x_words()[0], zm = p.z_words()[0];
    const int ys = std::popcount(xm & zm);
    static const std::array<cplx, 4> ipow{cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};
    const cplx base = ipow[(p.phase_exp() + ys) & 3];
    if (xm == 0) {
      if (zm == 0 && base == cplx{1, 0}) return;
      for (std::size_t i = 0; i < dim(); ++i)
        amps_[i] *= (std::popcount(i & zm) & 1) ? -base : base;
      return;
    }
    for (std::size_t i = 0; i < dim(); ++i) {
      const std::size_t j = i ^ xm;
      if (j < i) continue;
      // P|i> = base * (-1)^{|i & z|} |j>
      const cplx ai = amps_[i], aj = amps_[j];
      amps_[j] = ((std::popcount(i & zm) & 1) ? -base : base) * ai;
      amps_[i] = ((std::popcount(j & zm) & 1) ? -base : base) * aj;
    }
  }

  /// (I + (-1)^outcome P)/2 applied in place; no renormalization. P must be Hermitian.
  void project_pauli(const PauliString& p, int outcome) {
    DenseState moved = *this;
    moved.apply_pauli(p);
    const double sgn = outcome ? -0.5 : 0.5;
    for (std::size_t i = 0; i < dim(); ++i) amps_[i] = 0.5 * amps_[i] + sgn * moved.amps_[i];
  }

  void project_z(std::size_t q, int outcome) {
    check_qubit(q);
    const std::size_t a = std::size_t{1} << q;
    for (std::size_t i = 0; i < dim(); ++i)
      if (((i & a) != 0) != (outcome != 0)) amps_[i] = 0;
  }

  cplx inner(const DenseState& other) const {
    if (other.dim() != dim()) throw DimensionError("state dimension mismatch");
    cplx s{};
    for (std::size_t i = 0; i < dim(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
    return s;
  }

  /// Writes "index real imaginary" lines for nonzero amplitudes.
  void dump(std::ostream& os, double threshold = 0.0) const {
    os.precision(17);
    for (std::size_t i = 0; i < dim(); ++i)
      if (std::abs(amps_[i]) > threshold)
        os << i << ' ' << amps_[i].real() << ' ' << amps_[i].imag() << '\n';
  }

  void check_qubit(std::size_t q) const {
    if (q >= n_) throw IndexError("qubit " + std::to_string(q) + " out of range for " +
                                  std::to_string(n_) + "-qubit state");
  }

 private:
  std::size_t n_ = 0;
  std::vector<cplx> amps_;
};

struct MeasurementBranch {
  int outcome = 0;
  double probability = 0;
  bool possible = false;
  DenseState post_state;  // renormalized when possible
};

inline DenseState apply_gate(DenseState s, const CliffordGate& g) {
  s.apply_gate(g);
  return s;
}
inline DenseState apply_gate(DenseState s, std::size_t q, const OneQubitUnitary& u) {
  s.apply_unitary(q, u);
  return s;
}
inline DenseState apply_pauli(DenseState s, const PauliString& p) {
  s.apply_pauli(p);
  return s;
}

/// Both outcome branches of a computational-basis measurement, each renormalized.
inline std::pair<MeasurementBranch, MeasurementBranch> measure_z(const DenseState& s, std::size_t q) {
  std::array<MeasurementBranch, 2> br;
  const double total = s.norm_sq();
  for (int b = 0; b < 2; ++b) {
    br[b].outcome = b;
    br[b].post_state = s;
    br[b].post_state.project_z(q, b);
    br[b].probability = br[b].post_state.norm_sq() / total;
    br[b].possible = br[b].probability >= kImpossibleBranch;
    if (br[b].possible) br[b].post_state.normalize();
  }
  return {br[0], br[1]};
}

/// |<a|b>|^2 / (|a|^2 |b|^2); insensitive to global phase.
inline double fidelity(const DenseState& a, const DenseState& b) {
  const double na = a.norm_sq(), nb = b.norm_sq();
  if (na == 0 || nb == 0) return 0;
  return std::norm(a.inner(b)) / (na * nb);
}

/// <target| rho_low |target> where rho_low is the reduced state of the lowest
/// target.n_qubits() qubits of `s` (normalized by |s|^2).
inline double block_fidelity(const DenseState& s, const DenseState& target) {
  const std::size_t bd = target.dim();
  if (bd > s.dim()) throw DimensionError("target block wider than state");
  const double ns = s.norm_sq(), nt = target.norm_sq();
  if (ns == 0 || nt == 0) return 0;
  double acc = 0;
  for (std::size_t base = 0; base < s.dim(); base += bd) {
    cplx ov{};
    for (std::size_t j = 0; j < bd; ++j) ov += std::conj(target[j]) * s[base + j];
    acc += std::norm(ov);
  }
  return acc / (ns * nt);
}

}  // namespace ftgadget
