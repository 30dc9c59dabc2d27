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

// Test-only dense-matrix oracle. Deliberately independent of DenseState kernels.

#include <complex>
#include <random>
#include <vector>

#include "ftgadget/pauli.hpp"

namespace ftgadget::testing {

using cd = std::complex<double>;

struct Mat {
  std::size_t dim = 0;
  std::vector<cd> a;
  explicit Mat(std::size_t d = 0) : dim(d), a(d * d) {}
  cd& operator()(std::size_t r, std::size_t c) { return a[r * dim + c]; }
  cd operator()(std::size_t r, std::size_t c) const { return a[r * dim + c]; }
};

inline Mat identity(std::size_t d) {
  Mat m(d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = 1;
  return m;
}

inline Mat mul(const Mat& x, const Mat& y) {
  Mat m(x.dim);
  for (std::size_t i = 0; i < x.dim; ++i)
    for (std::size_t k = 0; k < x.dim; ++k)
      for (std::size_t j = 0; j < x.dim; ++j) m(i, j) += x(i, k) * y(k, j);
  return m;
}

inline Mat dagger(const Mat& x) {
  Mat m(x.dim);
  for (std::size_t i = 0; i < x.dim; ++i)
    for (std::size_t j = 0; j < x.dim; ++j) m(i, j) = std::conj(x(j, i));
  return m;
}

inline double max_diff(const Mat& x, const Mat& y) {
  double d = 0;
  for (std::size_t i = 0; i < x.a.size(); ++i) d = std::max(d, std::abs(x.a[i] - y.a[i]));
  return d;
}

/// Column b of the matrix is op|b>, built per qubit from 2x2 factors; qubit q = bit q.
inline Mat pauli_matrix(const PauliString& p) {
  const std::size_t n = p.n_qubits(), d = std::size_t{1} << n;
  const cd I{0, 1};
  cd phase = 1;
  for (int k = 0; k < p.phase_exp(); ++k) phase *= I;
  Mat m(d);
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t row = col;
    cd amp = phase;
    for (std::size_t q = 0; q < n; ++q) {
      const bool bit = (col >> q) & 1u;
      switch (p.at(q)) {
        case 'X': row ^= std::size_t{1} << q; break;
        case 'Y': row ^= std::size_t{1} << q; amp *= bit ? -I : I; break;
        case 'Z': if (bit) amp = -amp; break;
        default: break;
      }
    }
    m(row, col) += amp;
  }
  return m;
}

/// Matrix of a 2x2 gate on qubit q of n.
inline Mat one_qubit(std::size_t n, std::size_t q, cd m00, cd m01, cd m10, cd m11) {
  const std::size_t d = std::size_t{1} << n, b = std::size_t{1} << q;
  Mat m(d);
  for (std::size_t col = 0; col < d; ++col) {
    const bool bit = col & b;
    const std::size_t c0 = col & ~b, c1 = col | b;
    m(c0, col) += bit ? m01 : m00;
    m(c1, col) += bit ? m11 : m10;
  }
  return m;
}

/// Controlled version of a 2x2 gate.
inline Mat controlled(std::size_t n, std::size_t c, std::size_t t, cd m00, cd m01, cd m10, cd m11) {
  const std::size_t d = std::size_t{1} << n, cb = std::size_t{1} << c;
  Mat u = one_qubit(n, t, m00, m01, m10, m11);
  Mat m(d);
  for (std::size_t col = 0; col < d; ++col)
    for (std::size_t row = 0; row < d; ++row)
      m(row, col) = (col & cb) ? u(row, col) : (row == col ? cd{1} : cd{0});
  return m;
}

inline Mat gate_matrix(const CliffordGate& g, std::size_t n) {
  const double r = 1 / std::sqrt(2.0);
  const cd I{0, 1};
  const auto q = g.qubits[0], t = g.qubits[1];
  switch (g.kind) {
    case GateKind::H: return one_qubit(n, q, r, r, r, -r);
    case GateKind::S: return one_qubit(n, q, 1, 0, 0, I);
    case GateKind::S_DAG: return one_qubit(n, q, 1, 0, 0, -I);
    case GateKind::X: return one_qubit(n, q, 0, 1, 1, 0);
    case GateKind::Y: return one_qubit(n, q, 0, -I, I, 0);
    case GateKind::Z: return one_qubit(n, q, 1, 0, 0, -1);
    case GateKind::CX: return controlled(n, q, t, 0, 1, 1, 0);
    case GateKind::CY: return controlled(n, q, t, 0, -I, I, 0);
    case GateKind::CZ: return controlled(n, q, t, 1, 0, 0, -1);
  }
  return identity(std::size_t{1} << n);
}

inline std::vector<PauliString> all_paulis(std::size_t n) {
  std::vector<PauliString> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 4;
  for (std::size_t v = 0; v < total; ++v) {
    PauliString p(n);
    std::size_t r = v;
    for (std::size_t q = 0; q < n; ++q, r /= 4) p.set(q, (r % 4) & 1u, (r % 4) & 2u);
    out.push_back(p);
  }
  return out;
}

inline PauliString random_pauli(std::size_t n, std::mt19937_64& rng) {
  PauliString p(n);
  for (std::size_t q = 0; q < n; ++q) p.set(q, rng() & 1u, rng() & 1u);
  p.set_phase(static_cast<int>(rng() % 4));
  return p;
}

}  // namespace ftgadget::testing
