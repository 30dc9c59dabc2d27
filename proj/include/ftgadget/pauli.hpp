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
/// Pauli-group arithmetic on bit-packed strings and Clifford conjugation.

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "ftgadget/error.hpp"

namespace ftgadget {

/**
 * An n-qubit Pauli operator  i^phase_exp * P_0 (x) P_1 (x) ... (x) P_{n-1}
 * where each P_q is one of the Hermitian matrices I, X, Y, Z.
 *
 * Qubit q is stored in bit (q % 64) of word (q / 64) of the x and z planes.
 * A qubit with both bits set is the literal Y (not X*Z).
 */
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t n_qubits)
      : n_(n_qubits), x_(words_for(n_qubits), 0), z_(words_for(n_qubits), 0) {
    if (n_qubits == 0) throw DimensionError("PauliString needs at least one qubit");
  }

  /// Parses "[+|-|+i|-i|i]<IXYZ...>"; character k acts on qubit k. '_' is accepted for I.
  static PauliString from_text(std::string_view text) {
    int phase = 0;
    if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
      phase = text[0] == '-' ? 2 : 0;
      text.remove_prefix(1);
      if (!text.empty() && text[0] == 'i') {
        phase += 1;
        text.remove_prefix(1);
      }
    } else if (!text.empty() && text[0] == 'i') {
      phase = 1;
      text.remove_prefix(1);
    }
    if (text.empty()) throw ParseError("empty Pauli string");
    PauliString p(text.size());
    for (std::size_t q = 0; q < text.size(); ++q) {
      switch (text[q]) {
        case 'I': case '_': break;
        case 'X': p.set(q, true, false); break;
        case 'Y': p.set(q, true, true); break;
        case 'Z': p.set(q, false, true); break;
        default:
          throw ParseError("bad Pauli character '" + std::string(1, text[q]) + "' in \"" +
                           std::string(text) + "\"");
      }
    }
    p.phase_ = phase & 3;
    return p;
  }

  /// Single-qubit Pauli ('X', 'Y' or 'Z') on qubit q of an n-qubit register.
  static PauliString single(std::size_t n, std::size_t q, char kind) {
    PauliString p(n);
    if (q >= n) throw IndexError("qubit " + std::to_string(q) + " out of range");
    switch (kind) {
      case 'X': p.set(q, true, false); break;
      case 'Y': p.set(q, true, true); break;
      case 'Z': p.set(q, false, true); break;
      case 'I': break;
      default: throw ParseError("bad Pauli kind");
    }
    return p;
  }

  /// Tensor power of one Pauli kind on the listed qubits (e.g. Z on a support set).
  static PauliString on(std::size_t n, const std::vector<std::size_t>& qubits, char kind) {
    PauliString p(n);
    for (auto q : qubits) p = p * single(n, q, kind);
    return p.with_phase(0);
  }

  std::size_t n_qubits() const { return n_; }
  int phase_exp() const { return phase_; }
  bool x(std::size_t q) const { return (x_[q >> 6] >> (q & 63)) & 1u; }
  bool z(std::size_t q) const { return (z_[q >> 6] >> (q & 63)) & 1u; }
  char at(std::size_t q) const { return "IZXY"[(x(q) << 1) | z(q)]; }

  void set(std::size_t q, bool xb, bool zb) {
    if (q >= n_) throw IndexError("qubit " + std::to_string(q) + " out of range");
    const std::uint64_t m = std::uint64_t{1} << (q & 63);
    x_[q >> 6] = xb ? (x_[q >> 6] | m) : (x_[q >> 6] & ~m);
    z_[q >> 6] = zb ? (z_[q >> 6] | m) : (z_[q >> 6] & ~m);
  }
  void set_phase(int phase_exp) { phase_ = ((phase_exp % 4) + 4) % 4; }
  PauliString with_phase(int phase_exp) const {
    PauliString p = *this;
    p.set_phase(phase_exp);
    return p;
  }

  const std::vector<std::uint64_t>& x_words() const { return x_; }
  const std::vector<std::uint64_t>& z_words() const { return z_; }

  bool is_identity() const {
    for (std::size_t w = 0; w < x_.size(); ++w)
      if (x_[w] | z_[w]) return false;
    return true;
  }

  std::size_t weight() const {
    std::size_t w = 0;
    for (std::size_t k = 0; k < x_.size(); ++k) w += std::popcount(x_[k] | z_[k]);
    return w;
  }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t q = 0; q < n_; ++q)
      if (x(q) || z(q)) s.push_back(q);
    return s;
  }

  bool is_z_type() const {
    for (auto w : x_)
      if (w) return false;
    return true;
  }
  bool is_x_type() const {
    for (auto w : z_)
      if (w) return false;
    return true;
  }

  /// Symplectic test; throws on length mismatch.
  bool commutes(const PauliString& other) const {
    check_same(other);
    std::size_t c = 0;
    for (std::size_t k = 0; k < x_.size(); ++k)
      c += std::popcount((x_[k] & other.z_[k]) ^ (z_[k] & other.x_[k]));
    return (c & 1u) == 0;
  }

  /// Group product with exact phase.
  PauliString operator*(const PauliString& rhs) const {
    PauliString out = *this;
    out *= rhs;
    return out;
  }

  PauliString& operator*=(const PauliString& rhs) {
    check_same(rhs);
    // sigma_a sigma_b = i^{+1} sigma_c for (X,Y), (Y,Z), (Z,X); i^{-1} for the reverse order.
    long long plus = 0, minus = 0;
    for (std::size_t k = 0; k < x_.size(); ++k) {
      const std::uint64_t x1 = x_[k], z1 = z_[k], x2 = rhs.x_[k], z2 = rhs.z_[k];
      const std::uint64_t p = (x1 & ~z1 & x2 & z2) | (x1 & z1 & ~x2 & z2) | (~x1 & z1 & x2 & ~z2);
      const std::uint64_t m = (x1 & z1 & x2 & ~z2) | (~x1 & z1 & x2 & z2) | (x1 & ~z1 & ~x2 & z2);
      plus += std::popcount(p);
      minus += std::popcount(m);
      x_[k] = x1 ^ x2;
      z_[k] = z1 ^ z2;
    }
    set_phase(static_cast<int>((phase_ + rhs.phase_ + plus - minus) % 4));
    return *this;
  }

  /// Multiplies only the bit planes, ignoring phases. Used by Pauli frames.
  void xor_bits(const PauliString& rhs) {
    check_same(rhs);
    for (std::size_t k = 0; k < x_.size(); ++k) {
      x_[k] ^= rhs.x_[k];
      z_[k] ^= rhs.z_[k];
    }
  }

  bool same_bits(const PauliString& rhs) const { return n_ == rhs.n_ && x_ == rhs.x_ && z_ == rhs.z_; }
  bool operator==(const PauliString& rhs) const { return same_bits(rhs) && phase_ == rhs.phase_; }
  bool operator!=(const PauliString& rhs) const { return !(*this == rhs); }

  /// Lexicographic order of the letter form; used for deterministic tie-breaking.
  bool text_less(const PauliString& rhs) const { return letters() < rhs.letters(); }

  std::string letters() const {
    std::string s(n_, 'I');
    for (std::size_t q = 0; q < n_; ++q) s[q] = at(q);
    return s;
  }

  std::string to_text() const {
    static constexpr std::array<const char*, 4> prefix{"", "+i", "-", "-i"};
    return prefix[phase_] + letters();
  }

  /// The Pauli restricted to qubits [first, first + count), phase dropped.
  PauliString slice(std::size_t first, std::size_t count) const {
    if (first + count > n_) throw IndexError("slice out of range");
    PauliString p(count);
    for (std::size_t q = 0; q < count; ++q) p.set(q, x(first + q), z(first + q));
    return p;
  }

  /// Places this Pauli on qubits [offset, offset + n) of a width-qubit register.
  PauliString embed(std::size_t width, std::size_t offset) const {
    if (offset + n_ > width) throw IndexError("embed out of range");
    PauliString p(width);
    for (std::size_t q = 0; q < n_; ++q) p.set(offset + q, x(q), z(q));
    p.phase_ = phase_;
    return p;
  }

  /// Places this Pauli on an arbitrary list of target qubits.
  PauliString scatter(std::size_t width, const std::vector<std::size_t>& targets) const {
    if (targets.size() != n_) throw DimensionError("scatter target count mismatch");
    PauliString p(width);
    for (std::size_t q = 0; q < n_; ++q) p.set(targets[q], x(q), z(q));
    p.phase_ = phase_;
    return p;
  }

  /// Copies the bits of qubits `from` of this Pauli (phase dropped).
  PauliString gather(const std::vector<std::size_t>& from) const {
    PauliString p(from.size());
    for (std::size_t q = 0; q < from.size(); ++q) p.set(q, x(from[q]), z(from[q]));
    return p;
  }

  /// Overwrites the bits of the listed qubits with those of `local` (phase untouched).
  void assign(const std::vector<std::size_t>& targets, const PauliString& local) {
    for (std::size_t q = 0; q < targets.size(); ++q) set(targets[q], local.x(q), local.z(q));
  }

  void clear_qubits(const std::vector<std::size_t>& targets) {
    for (auto q : targets) set(q, false, false);
  }

 private:
  static std::size_t words_for(std::size_t n) { return (n + 63) / 64; }
  void check_same(const PauliString& o) const {
    if (o.n_ != n_)
      throw DimensionError("Pauli length mismatch: " + std::to_string(n_) + " vs " +
                           std::to_string(o.n_));
  }

  std::size_t n_ = 0;
  int phase_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
};

inline PauliString pauli_mul(const PauliString& a, const PauliString& b) { return a * b; }
inline std::size_t weight(const PauliString& p) { return p.weight(); }
inline bool commutes(const PauliString& a, const PauliString& b) { return a.commutes(b); }

enum class GateKind { H, S, S_DAG, X, Y, Z, CX, CY, CZ };

inline bool is_two_qubit(GateKind k) {
  return k == GateKind::CX || k == GateKind::CY || k == GateKind::CZ;
}

inline const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::S_DAG: return "S_DAG";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::CX: return "CX";
    case GateKind::CY: return "CY";
    case GateKind::CZ: return "CZ";
  }
  return "?";
}

inline GateKind gate_from_name(std::string_view s) {
  for (auto k : {GateKind::H, GateKind::S, GateKind::S_DAG, GateKind::X, GateKind::Y, GateKind::Z,
                 GateKind::CX, GateKind::CY, GateKind::CZ})
    if (s == gate_name(k)) return k;
  throw ParseError("unknown gate '" + std::string(s) + "'");
}

/// A gate from the fixed Clifford set. For controlled gates qubits[0] is the control.
struct CliffordGate {
  GateKind kind;
  std::array<std::size_t, 2> qubits{};

  CliffordGate(GateKind k, std::size_t q) : kind(k), qubits{q, q} {
    if (is_two_qubit(k)) throw ValidationError(std::string(gate_name(k)) + " needs two qubits");
  }
  CliffordGate(GateKind k, std::size_t control, std::size_t target) : kind(k), qubits{control, target} {
    if (!is_two_qubit(k)) throw ValidationError(std::string(gate_name(k)) + " takes one qubit");
    if (control == target) throw ValidationError("two-qubit gate needs distinct qubits");
  }

  std::size_t arity() const { return is_two_qubit(kind) ? 2 : 1; }
  std::size_t max_qubit() const { return arity() == 2 ? std::max(qubits[0], qubits[1]) : qubits[0]; }
  bool operator==(const CliffordGate&) const = default;
};

namespace detail {

// Images of X_q and Z_q (q = each gate qubit) under U . U^dagger, in Hermitian form.
// Returned as {image_of_X, image_of_Z} for qubit index `which` (0 = first operand).
inline std::array<PauliString, 2> generator_images(const CliffordGate& g, std::size_t n,
                                                   std::size_t which) {
  const std::size_t a = g.qubits[0], b = g.qubits[1];
  auto s = [n](std::size_t q, char k) { return PauliString::single(n, q, k); };
  auto neg = [](PauliString p) { return p.with_phase(p.phase_exp() + 2); };
  switch (g.kind) {
    case GateKind::H: return {s(a, 'Z'), s(a, 'X')};
    case GateKind::S: return {s(a, 'Y'), s(a, 'Z')};
    case GateKind::S_DAG: return {neg(s(a, 'Y')), s(a, 'Z')};
    case GateKind::X: return {s(a, 'X'), neg(s(a, 'Z'))};
    case GateKind::Y: return {neg(s(a, 'X')), neg(s(a, 'Z'))};
    case GateKind::Z: return {neg(s(a, 'X')), s(a, 'Z')};
    case GateKind::CX:
      if (which == 0) return {s(a, 'X') * s(b, 'X'), s(a, 'Z')};
      return {s(b, 'X'), s(a, 'Z') * s(b, 'Z')};
    case GateKind::CY:
      if (which == 0) return {s(a, 'X') * s(b, 'Y'), s(a, 'Z')};
      return {s(a, 'Z') * s(b, 'X'), s(a, 'Z') * s(b, 'Z')};
    case GateKind::CZ:
      if (which == 0) return {s(a, 'X') * s(b, 'Z'), s(a, 'Z')};
      return {s(a, 'Z') * s(b, 'X'), s(b, 'Z')};
  }
  throw ValidationError("unknown gate");
}

}  // namespace detail

/// Returns g p g^dagger with exact phase.
inline PauliString conjugate(const CliffordGate& g, const PauliString& p) {
  const std::size_t n = p.n_qubits();
  if (g.max_qubit() >= n)
    throw IndexError(std::string(gate_name(g.kind)) + " acts outside a " + std::to_string(n) +
                     "-qubit Pauli");
  // Write the local factor as i^k prod X^x Z^z (Y = i X Z), then map generators.
  PauliString result = p;
  int phase = p.phase_exp();
  PauliString image(n);
  for (std::size_t w = 0; w < g.arity(); ++w) {
    const std::size_t q = g.qubits[w];
    const bool xb = p.x(q), zb = p.z(q);
    result.set(q, false, false);
    if (xb && zb) phase += 1;
    if (!xb && !zb) continue;
    auto imgs = detail::generator_images(g, n, w);
    if (xb) image *= imgs[0];
    if (zb) image *= imgs[1];
  }
  // `result` holds the untouched factor on other qubits; it commutes with `image`.
  result.set_phase(0);
  image *= result;
  image.set_phase(image.phase_exp() + phase);
  return image;
}

}  // namespace ftgadget
