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
/// Data and ancilla codes: stabilizer and generic (explicit codeword) forms,
/// repetition-code concatenation, and the structural analyses the gadgets rely on.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ftgadget/error.hpp"
#include "ftgadget/gf2.hpp"
#include "ftgadget/pauli.hpp"
#include "ftgadget/statevector.hpp"
#include "ftgadget/tableau.hpp"

namespace ftgadget {

/// k = 1 stabilizer code. Generators and logicals are Hermitian Pauli strings.
struct StabilizerCodeSpec {
  std::string name;
  std::size_t n = 0;
  std::vector<PauliString> generators;
  PauliString logical_x;
  PauliString logical_z;
  std::size_t distance = 1;
  bool transversal_z = false;  // declared; validated, never trusted
};

/// Code given by explicit logical codewords on 2^n amplitudes.
struct GenericCodeSpec {
  std::string name;
  std::size_t n = 0;
  std::vector<cplx> codeword_zero;
  std::vector<cplx> codeword_one;
  std::size_t distance = 1;
  bool transversal_z = false;
};

using CodeSpec = std::variant<StabilizerCodeSpec, GenericCodeSpec>;

inline std::size_t code_length(const CodeSpec& c) {
  return std::visit([](const auto& s) { return s.n; }, c);
}
inline std::size_t code_distance(const CodeSpec& c) {
  return std::visit([](const auto& s) { return s.distance; }, c);
}
inline const std::string& code_name(const CodeSpec& c) {
  return std::visit([](const auto& s) -> const std::string& { return s.name; }, c);
}
inline bool is_stabilizer(const CodeSpec& c) { return std::holds_alternative<StabilizerCodeSpec>(c); }
inline std::size_t correctable_weight(const CodeSpec& c) { return (code_distance(c) - 1) / 2; }

// ---------------------------------------------------------------------------
// Built-in registry

inline StabilizerCodeSpec make_stabilizer_code(std::string name, const std::vector<std::string>& gens,
                                               const std::string& lx, const std::string& lz,
                                               std::size_t distance, bool transversal_z) {
  StabilizerCodeSpec c;
  c.name = std::move(name);
  for (const auto& g : gens) c.generators.push_back(PauliString::from_text(g));
  c.logical_x = PauliString::from_text(lx);
  c.logical_z = PauliString::from_text(lz);
  c.n = c.logical_x.n_qubits();
  c.distance = distance;
  c.transversal_z = transversal_z;
  return c;
}

inline StabilizerCodeSpec steane_code() {
  return make_stabilizer_code("steane",
                              {"IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"},
                              "XXXXXXX", "ZZZZZZZ", 3, true);
}

inline StabilizerCodeSpec five_qubit_code() {
  return make_stabilizer_code("five_qubit", {"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"}, "XXXXX", "ZZZZZ", 3,
                              true);
}

/// Bit-flip repetition code: generators Z_i Z_{i+1}. Z^n is logical only for odd n.
inline StabilizerCodeSpec repetition_code(std::size_t n) {
  if (n == 0) throw ValidationError("repetition length must be positive");
  StabilizerCodeSpec c;
  c.name = "rep" + std::to_string(n);
  c.n = n;
  for (std::size_t i = 0; i + 1 < n; ++i)
    c.generators.push_back(PauliString::single(n, i, 'Z') * PauliString::single(n, i + 1, 'Z'));
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  c.logical_x = PauliString::on(n, all, 'X');
  c.logical_z = (n % 2 == 1) ? PauliString::on(n, all, 'Z') : PauliString::single(n, 0, 'Z');
  c.distance = 1;
  c.transversal_z = n % 2 == 1;
  return c;
}

inline std::optional<StabilizerCodeSpec> builtin_code(const std::string& name) {
  if (name == "steane") return steane_code();
  if (name == "five_qubit") return five_qubit_code();
  if (name.rfind("rep", 0) == 0 && name.size() > 3) {
    try {
      return repetition_code(std::stoul(name.substr(3)));
    } catch (const std::logic_error&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  void fail(std::string msg) {
    valid = false;
    violations.push_back(std::move(msg));
  }
};

inline bool has_transversal_z_symbolic(const StabilizerCodeSpec& c) {
  std::vector<std::size_t> all(c.n);
  for (std::size_t i = 0; i < c.n; ++i) all[i] = i;
  const PauliString zn = PauliString::on(c.n, all, 'Z');
  StabilizerGroup g(c.generators);
  return g.contains(zn * c.logical_z);
}

inline ValidationReport validate(const StabilizerCodeSpec& c) {
  ValidationReport r;
  const auto check_len = [&](const PauliString& p, const std::string& what) {
    if (p.n_qubits() != c.n)
      throw DimensionError(what + " has length " + std::to_string(p.n_qubits()) + ", expected " +
                           std::to_string(c.n));
  };
  check_len(c.logical_x, "logical_x");
  check_len(c.logical_z, "logical_z");
  for (const auto& g : c.generators) check_len(g, "generator " + g.to_text());
  if (c.generators.size() + 1 != c.n)
    r.fail("expected " + std::to_string(c.n - 1) + " generators for a k=1 code, got " +
           std::to_string(c.generators.size()));
  for (std::size_t i = 0; i < c.generators.size(); ++i) {
    if (c.generators[i].phase_exp() & 1) r.fail("generator " + c.generators[i].to_text() + " is not Hermitian");
    for (std::size_t j = 0; j < i; ++j)
      if (!c.generators[i].commutes(c.generators[j]))
        r.fail("generators " + c.generators[j].to_text() + " and " + c.generators[i].to_text() +
               " anticommute");
  }
  std::vector<BitVec> rows;
  for (const auto& g : c.generators) rows.push_back(symplectic(g));
  if (gf2_rank(rows) != c.generators.size()) r.fail("generators are not independent");
  for (const auto* l : {&c.logical_x, &c.logical_z}) {
    if (l->phase_exp() & 1) r.fail("logical " + l->to_text() + " is not Hermitian");
    for (const auto& g : c.generators)
      if (!l->commutes(g)) r.fail("logical " + l->to_text() + " anticommutes with generator " + g.to_text());
  }
  if (c.logical_x.commutes(c.logical_z)) r.fail("logical_x and logical_z commute");
  if (r.valid) {
    StabilizerGroup grp(c.generators);
    if (grp.contains_up_to_phase(c.logical_x) || grp.contains_up_to_phase(c.logical_z))
      r.fail("a logical operator lies in the stabilizer group");
  }
  if (c.transversal_z && r.valid && !has_transversal_z_symbolic(c))
    r.fail("flagged transversal_z but Z^n is not logical_z times a stabilizer");
  return r;
}

inline ValidationReport validate(const GenericCodeSpec& c) {
  ValidationReport r;
  const std::size_t dim = std::size_t{1} << c.n;
  if (c.codeword_zero.size() != dim || c.codeword_one.size() != dim)
    throw DimensionError("codewords must have 2^n amplitudes");
  auto zero = DenseState::from_amplitudes(c.codeword_zero);
  auto one = DenseState::from_amplitudes(c.codeword_one);
  if (std::abs(zero.norm_sq() - 1) > 1e-9) r.fail("codeword_zero is not normalized");
  if (std::abs(one.norm_sq() - 1) > 1e-9) r.fail("codeword_one is not normalized");
  const cplx ov = zero.inner(one);
  if (std::abs(ov) > 1e-9)
    r.fail("codewords are not orthogonal: <0|1> = " + std::to_string(ov.real()) + (ov.imag() < 0 ? "" : "+") +
           std::to_string(ov.imag()) + "i");
  if (c.transversal_z) {
    std::vector<std::size_t> all(c.n);
    for (std::size_t i = 0; i < c.n; ++i) all[i] = i;
    const auto zn = PauliString::on(c.n, all, 'Z');
    auto z0 = apply_pauli(zero, zn), z1 = apply_pauli(one, zn);
    double e0 = 0, e1 = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      e0 = std::max(e0, std::abs(z0[i] - zero[i]));
      e1 = std::max(e1, std::abs(z1[i] + one[i]));
    }
    if (e0 > 1e-9) r.fail("flagged transversal_z but Z^n|0> != |0>");
    if (e1 > 1e-9) r.fail("flagged transversal_z but Z^n|1> != -|1>");
  }
  return r;
}

inline ValidationReport validate(const CodeSpec& c) {
  return std::visit([](const auto& s) { return validate(s); }, c);
}

// ---------------------------------------------------------------------------
// Codewords and encoding

inline constexpr std::size_t kMaxExpandQubits = 22;

/// Some computational basis string in the support of the stabilizer state `gens`.
inline std::vector<bool> support_point(const std::vector<PauliString>& gens) {
  Tableau t = Tableau::from_stabilizers(gens);
  std::vector<bool> x(t.n_qubits());
  for (std::size_t q = 0; q < t.n_qubits(); ++q) x[q] = t.measure_z(q, 0).outcome != 0;
  return x;
}

/// Stabilizer generators of logical |0> (code generators plus logical Z).
inline std::vector<PauliString> zero_state_generators(const StabilizerCodeSpec& c) {
  auto g = c.generators;
  g.push_back(c.logical_z);
  return g;
}

/// |0L> by projector product, normalized so its first nonzero amplitude is real
/// positive; |1L> = logical_x |0L>.
inline std::pair<DenseState, DenseState> codewords(const StabilizerCodeSpec& c) {
  DenseState::check_capacity(c.n, kMaxExpandQubits);
  const auto gens = zero_state_generators(c);
  const auto x0 = support_point(gens);
  std::size_t idx = 0;
  for (std::size_t q = 0; q < c.n; ++q)
    if (x0[q]) idx |= std::size_t{1} << q;
  std::vector<cplx> amps(std::size_t{1} << c.n);
  amps[idx] = 1;
  auto zero = DenseState::from_amplitudes(std::move(amps));
  for (const auto& g : gens) zero.project_pauli(g, 0);
  std::size_t first = 0;
  while (std::abs(zero[first]) < 1e-12) ++first;
  zero.scale(std::abs(zero[first]) / zero[first]);
  zero.normalize();
  auto one = apply_pauli(zero, c.logical_x);
  return {zero, one};
}

inline std::pair<DenseState, DenseState> codewords(const GenericCodeSpec& c) {
  return {DenseState::from_amplitudes(c.codeword_zero), DenseState::from_amplitudes(c.codeword_one)};
}

inline std::pair<DenseState, DenseState> codewords(const CodeSpec& c) {
  return std::visit([](const auto& s) { return codewords(s); }, c);
}

/// alpha |0L> + beta |1L>.
inline DenseState encode(const CodeSpec& c, cplx alpha, cplx beta) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1) > 1e-9)
    throw ValidationError("encode: |alpha|^2 + |beta|^2 must be 1");
  auto [zero, one] = codewords(c);
  for (std::size_t i = 0; i < zero.dim(); ++i) zero[i] = alpha * zero[i] + beta * one[i];
  return zero;
}

// ---------------------------------------------------------------------------
// Parity property

struct ParityResult {
  bool holds = false;
  std::string method;  // "symbolic" or "enumerated"
  double zero_support_size = 0;
  double one_support_size = 0;
  std::vector<std::string> witnesses;  // "<which>:<bitstring>", qubit 0 first
};

inline std::string bitstring(const std::vector<bool>& bits) {
  std::string s;
  for (bool b : bits) s += b ? '1' : '0';
  return s;
}

inline std::string bitstring(std::size_t index, std::size_t n) {
  std::string s(n, '0');
  for (std::size_t q = 0; q < n; ++q)
    if ((index >> q) & 1u) s[q] = '1';
  return s;
}

/// Support enumeration over explicit amplitudes (threshold 1e-10).
inline ParityResult check_parity_dense(const DenseState& zero, const DenseState& one, std::size_t n) {
  ParityResult r;
  r.method = "enumerated";
  r.holds = true;
  const auto scan = [&](const DenseState& s, bool want_odd, double& size, const char* tag) {
    for (std::size_t i = 0; i < s.dim(); ++i) {
      if (std::abs(s[i]) <= 1e-10) continue;
      size += 1;
      if ((std::popcount(i) & 1) != want_odd) {
        r.holds = false;
        r.witnesses.push_back(std::string(tag) + ":" + bitstring(i, n));
      }
    }
  };
  scan(zero, false, r.zero_support_size, "zero");
  scan(one, true, r.one_support_size, "one");
  return r;
}

/**
 * The Z-basis support of a stabilizer state is x0 + span(x-parts of its generators),
 * so parity is decided by x0 and the generator x-parts alone. Works at any size.
 */
inline ParityResult check_parity_property(const StabilizerCodeSpec& c) {
  ParityResult r;
  r.method = "symbolic";
  const auto gens = zero_state_generators(c);
  const auto x0 = support_point(gens);
  std::vector<BitVec> xs;
  for (const auto& g : gens) {
    BitVec v(c.n);
    for (std::size_t q = 0; q < c.n; ++q) v.set(q, g.x(q));
    xs.push_back(v);
  }
  const auto rank = gf2_rank(xs);
  r.zero_support_size = r.one_support_size = std::ldexp(1.0, static_cast<int>(rank));
  std::vector<bool> x1 = x0;
  for (std::size_t q = 0; q < c.n; ++q) x1[q] = x1[q] != c.logical_x.x(q);
  const auto parity = [](const std::vector<bool>& v) { return std::count(v.begin(), v.end(), true) & 1; };
  r.holds = true;
  if (parity(x0)) {
    r.holds = false;
    r.witnesses.push_back("zero:" + bitstring(x0));
  }
  if (!parity(x1)) {
    r.holds = false;
    r.witnesses.push_back("one:" + bitstring(x1));
  }
  for (const auto& g : gens) {
    std::size_t w = 0;
    for (std::size_t q = 0; q < c.n; ++q) w += g.x(q);
    if (w & 1) {
      r.holds = false;
      std::vector<bool> shifted = x0;
      for (std::size_t q = 0; q < c.n; ++q) shifted[q] = shifted[q] != g.x(q);
      r.witnesses.push_back("zero:" + bitstring(shifted));
    }
  }
  return r;
}

inline ParityResult check_parity_property(const GenericCodeSpec& c) {
  auto [zero, one] = codewords(c);
  return check_parity_dense(zero, one, c.n);
}

inline ParityResult check_parity_property(const CodeSpec& c) {
  return std::visit([](const auto& s) { return check_parity_property(s); }, c);
}

// ---------------------------------------------------------------------------
// Minimum-weight Z-type logical

inline constexpr std::size_t kMaxZLogicalSearch = 16;

struct ZLogical {
  PauliString op;
  std::vector<std::size_t> support;
  bool parity_verified = false;  // checked against expanded codewords
};

/**
 * Lowest-weight Z-type operator equal to +logical_z times a stabilizer, searched
 * exhaustively up to max_weight (ties: lexicographically smallest support). Returns nullopt when none exists.
 */
inline std::optional<ZLogical> restricted_parity_support(const StabilizerCodeSpec& c, std::size_t max_weight) {
  if (c.n > kMaxZLogicalSearch)
    throw CapacityError("Z-logical search limited to " + std::to_string(kMaxZLogicalSearch) + " qubits");
  StabilizerGroup g(c.generators);
  std::optional<PauliString> best;
  for (std::size_t w = 1; w <= std::min(max_weight, c.n) && !best; ++w) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << c.n); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != w) continue;
      PauliString z(c.n);
      for (std::size_t q = 0; q < c.n; ++q)
        if ((mask >> q) & 1u) z.set(q, false, true);
      if (!g.contains(z * c.logical_z)) continue;
      if (!best || z.support() < best->support()) best = z;
    }
  }
  if (!best) return std::nullopt;
  ZLogical out{*best, best->support(), false};
  if (c.n <= 14) {
    auto [zero, one] = codewords(c);
    std::size_t smask = 0;
    for (auto q : out.support) smask |= std::size_t{1} << q;
    bool ok = true;
    for (std::size_t i = 0; i < zero.dim(); ++i) {
      const bool odd = std::popcount(i & smask) & 1;
      if (std::abs(zero[i]) > 1e-10 && odd) ok = false;
      if (std::abs(one[i]) > 1e-10 && !odd) ok = false;
    }
    if (!ok) throw ValidationError("restricted parity property failed on the expanded codewords");
    out.parity_verified = true;
  }
  return out;
}

/// Brute-force minimum weight of a nontrivial logical operator (n <= 10).
inline std::size_t brute_force_distance(const StabilizerCodeSpec& c) {
  if (c.n > 10) throw CapacityError("distance search limited to 10 qubits");
  StabilizerGroup g(c.generators);
  std::size_t best = c.n + 1;
  const std::uint64_t total = std::uint64_t{1} << (2 * c.n);
  for (std::uint64_t v = 1; v < total; ++v) {
    PauliString p(c.n);
    for (std::size_t q = 0; q < c.n; ++q) p.set(q, (v >> q) & 1u, (v >> (c.n + q)) & 1u);
    const auto w = p.weight();
    if (w >= best) continue;
    bool in_normalizer = true;
    for (const auto& s : c.generators)
      if (!s.commutes(p)) {
        in_normalizer = false;
        break;
      }
    if (in_normalizer && !g.contains_up_to_phase(p)) best = w;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Transversal gates and logical actions

/// True when H^n maps the stabilizer group to itself and swaps logical X and Z.
inline bool has_transversal_h(const StabilizerCodeSpec& c) {
  auto hn = [&](PauliString p) {
    for (std::size_t q = 0; q < c.n; ++q) p = conjugate(CliffordGate(GateKind::H, q), p);
    return p;
  };
  StabilizerGroup g(c.generators);
  for (const auto& s : c.generators)
    if (!g.contains(hn(s))) return false;
  return g.contains(hn(c.logical_x) * c.logical_z) && g.contains(hn(c.logical_z) * c.logical_x);
}

using Mat2 = std::array<cplx, 4>;

inline Mat2 mat_mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

inline Mat2 pauli_matrix(char k) {
  const cplx I{0, 1};
  switch (k) {
    case 'X': return {0, 1, 1, 0};
    case 'Y': return {0, -I, I, 0};
    case 'Z': return {1, 0, 0, -1};
    default: return {1, 0, 0, 1};
  }
}

/// Returns c with |a - c b| small if a is proportional to b (|c| = 1).
inline std::optional<cplx> proportional(const Mat2& a, const Mat2& b, double tol = 1e-9) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < 4; ++i)
    if (std::abs(b[i]) > std::abs(b[k])) k = i;
  if (std::abs(b[k]) < tol) return std::nullopt;
  const cplx c = a[k] / b[k];
  for (std::size_t i = 0; i < 4; ++i)
    if (std::abs(a[i] - c * b[i]) > tol) return std::nullopt;
  if (std::abs(std::abs(c) - 1) > 1e-6) return std::nullopt;
  return c;
}

/// 2x2 matrix <jL| p |iL> of a Pauli that preserves the code space. Throws otherwise.
inline Mat2 logical_action(const StabilizerCodeSpec& c, const PauliString& p) {
  for (const auto& s : c.generators)
    if (!s.commutes(p)) throw ValidationError(p.to_text() + " does not preserve the code space");
  const bool xa = !p.commutes(c.logical_z);
  const bool za = !p.commutes(c.logical_x);
  PauliString m(c.n);
  Mat2 lm = pauli_matrix('I');
  if (xa) {
    m *= c.logical_x;
    lm = mat_mul(lm, pauli_matrix('X'));
  }
  if (za) {
    m *= c.logical_z;
    lm = mat_mul(lm, pauli_matrix('Z'));
  }
  // p = omega * s * m with s in the stabilizer group
  PauliString mdag = m.with_phase(-m.phase_exp());
  PauliString r = p * mdag;
  StabilizerGroup g(c.generators);
  auto e = g.element_matching(r);
  if (!e) throw ValidationError(p.to_text() + " is not a logical operator");
  static const std::array<cplx, 4> ipow{cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};
  const cplx omega = ipow[((r.phase_exp() - e->phase_exp()) % 4 + 4) % 4];
  for (auto& v : lm) v *= omega;
  return lm;
}

inline Mat2 logical_action(const GenericCodeSpec& c, const PauliString& p) {
  auto [zero, one] = codewords(c);
  auto p0 = apply_pauli(zero, p), p1 = apply_pauli(one, p);
  Mat2 m{zero.inner(p0), zero.inner(p1), one.inner(p0), one.inner(p1)};
  // The code space must be invariant: |p|i>|^2 fully captured.
  const double leak = 2.0 - (std::norm(m[0]) + std::norm(m[2]) + std::norm(m[1]) + std::norm(m[3]));
  if (leak > 1e-9) throw ValidationError(p.to_text() + " does not preserve the code space");
  return m;
}

inline Mat2 logical_action(const CodeSpec& c, const PauliString& p) {
  return std::visit([&](const auto& s) { return logical_action(s, p); }, c);
}

inline PauliString transversal(std::size_t n, char kind) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return PauliString::on(n, all, kind);
}

// ---------------------------------------------------------------------------
// Concatenation with inner repetition codes

/// Outer code A1 of length m, each physical qubit encoded in the bit-flip code of
/// length inner_length. Block j occupies qubits [j*inner_length, (j+1)*inner_length).
struct ConcatenatedCodeSpec {
  StabilizerCodeSpec outer;
  std::size_t inner_length = 1;

  std::size_t length() const { return outer.n * inner_length; }
  std::vector<std::size_t> block(std::size_t j) const {
    std::vector<std::size_t> q(inner_length);
    for (std::size_t i = 0; i < inner_length; ++i) q[i] = j * inner_length + i;
    return q;
  }

  /// Outer Pauli lifted through the inner code: X_j -> X on all of block j, Z_j -> Z on its first qubit.
  PauliString lift(const PauliString& p) const {
    const std::size_t N = length();
    PauliString out(N);
    int phase = p.phase_exp();
    for (std::size_t j = 0; j < outer.n; ++j) {
      const bool xb = p.x(j), zb = p.z(j);
      if (xb && zb) phase += 1;
      if (xb) out *= PauliString::on(N, block(j), 'X');
      if (zb) out *= PauliString::single(N, j * inner_length, 'Z');
    }
    out.set_phase(out.phase_exp() + phase);
    return out;
  }

  /// Flattened stabilizer description of the concatenated code.
  StabilizerCodeSpec flatten() const {
    StabilizerCodeSpec c;
    c.name = outer.name + "+rep" + std::to_string(inner_length);
    c.n = length();
    for (std::size_t j = 0; j < outer.n; ++j)
      for (std::size_t i = 0; i + 1 < inner_length; ++i)
        c.generators.push_back(PauliString::single(c.n, j * inner_length + i, 'Z') *
                               PauliString::single(c.n, j * inner_length + i + 1, 'Z'));
    for (const auto& g : outer.generators) c.generators.push_back(lift(g));
    c.logical_x = lift(outer.logical_x);
    c.logical_z = lift(outer.logical_z);
    c.distance = outer.distance;
    c.transversal_z = outer.transversal_z && inner_length % 2 == 1;
    return c;
  }
};

inline ConcatenatedCodeSpec concatenate(const StabilizerCodeSpec& outer, std::size_t inner_length) {
  if (inner_length == 0) throw ValidationError("inner repetition length must be positive");
  if (!has_transversal_z_symbolic(outer))
    throw ValidationError("outer code " + outer.name + " lacks transversal Z");
  return {outer, inner_length};
}

/// Alternative construction: expand the outer codeword and substitute |0>->|0^r>, |1>->|1^r>.
inline std::pair<DenseState, DenseState> concatenated_codewords_by_substitution(const ConcatenatedCodeSpec& c) {
  DenseState::check_capacity(c.length(), kMaxExpandQubits);
  auto [z, o] = codewords(c.outer);
  auto subst = [&](const DenseState& s) {
    std::vector<cplx> amps(std::size_t{1} << c.length());
    for (std::size_t i = 0; i < s.dim(); ++i) {
      if (s[i] == cplx{}) continue;
      std::size_t idx = 0;
      for (std::size_t j = 0; j < c.outer.n; ++j)
        if ((i >> j) & 1u)
          for (auto q : c.block(j)) idx |= std::size_t{1} << q;
      amps[idx] = s[i];
    }
    return DenseState::from_amplitudes(std::move(amps));
  };
  return {subst(z), subst(o)};
}

// ---------------------------------------------------------------------------
// Decoding

/**
 * Minimum-weight syndrome decoder. Plain codes use a lookup table built by
 * enumerating Paulis in order of (weight, letters); concatenated codes decode
 * each inner block by table and then the outer code on the block syndrome.
 */
class Decoder {
 public:
  Decoder() = default;

  explicit Decoder(const StabilizerCodeSpec& code, std::size_t max_weight = 4) : code_(code), group_(code.generators) {
    build_table(max_weight);
  }

  explicit Decoder(const ConcatenatedCodeSpec& concat) : code_(concat.flatten()), group_(code_.generators) {
    concat_ = std::make_shared<ConcatenatedCodeSpec>(concat);
    inner_ = std::make_shared<Decoder>(repetition_code(concat.inner_length));
    outer_ = std::make_shared<Decoder>(concat.outer);
  }

  const StabilizerCodeSpec& code() const { return code_; }
  const StabilizerGroup& group() const { return group_; }

  std::vector<bool> syndrome(const PauliString& error) const { return group_.syndrome(error); }

  /// Correction for a syndrome (one bit per generator), or nullopt if none known.
  std::optional<PauliString> decode(const std::vector<bool>& syn) const {
    if (syn.size() != code_.generators.size()) throw DimensionError("syndrome length mismatch");
    if (concat_) return decode_concatenated(syn);
    auto it = table_.find(key(syn));
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }

 private:
  static std::string key(const std::vector<bool>& s) {
    std::string k(s.size(), '0');
    for (std::size_t i = 0; i < s.size(); ++i) k[i] = s[i] ? '1' : '0';
    return k;
  }

  void build_table(std::size_t max_weight) {
    const std::size_t n = code_.n;
    const std::size_t want = std::size_t{1} << std::min<std::size_t>(code_.generators.size(), 62);
    table_[key(std::vector<bool>(code_.generators.size()))] = PauliString(n);
    std::vector<std::size_t> pos;
    for (std::size_t w = 1; w <= std::min(max_weight, n) && table_.size() < want; ++w) {
      std::map<std::string, PauliString> found;  // ordered by syndrome key; value is letter-min
      pos.assign(w, 0);
      for (std::size_t i = 0; i < w; ++i) pos[i] = i;
      while (true) {
        std::vector<int> letter(w, 0);
        while (true) {
          PauliString p(n);
          for (std::size_t i = 0; i < w; ++i) p.set(pos[i], letter[i] != 2, letter[i] != 0);
          auto k = key(group_.syndrome(p));
          if (!table_.count(k)) {
            auto f = found.find(k);
            if (f == found.end()) found.emplace(k, p);
            else if (p.text_less(f->second)) f->second = p;
          }
          std::size_t i = 0;
          while (i < w && letter[i] == 2) letter[i++] = 0;
          if (i == w) break;
          ++letter[i];
        }
        std::size_t i = w;
        while (i > 0 && pos[i - 1] == n - w + i - 1) --i;
        if (i == 0) break;
        ++pos[i - 1];
        for (std::size_t j = i; j < w; ++j) pos[j] = pos[j - 1] + 1;
      }
      for (auto& [k, p] : found) table_.emplace(k, p);
    }
  }

  std::optional<PauliString> decode_concatenated(const std::vector<bool>& syn) const {
    const auto& c = *concat_;
    const std::size_t r = c.inner_length, m = c.outer.n, N = c.length();
    PauliString correction(N);
    std::size_t idx = 0;
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<bool> local(syn.begin() + static_cast<long>(idx), syn.begin() + static_cast<long>(idx + r - 1));
      idx += r - 1;
      auto fix = inner_->decode(local);
      if (!fix) return std::nullopt;
      correction *= fix->embed(N, j * r);
    }
    std::vector<bool> outer_syn(syn.begin() + static_cast<long>(idx), syn.end());
    const auto shift = group_.syndrome(correction);
    for (std::size_t i = 0; i < outer_syn.size(); ++i) outer_syn[i] = outer_syn[i] != shift[idx + i];
    auto ofix = outer_->decode(outer_syn);
    if (!ofix) return std::nullopt;
    correction *= c.lift(*ofix);
    correction.set_phase(0);
    return correction;
  }

  StabilizerCodeSpec code_;
  StabilizerGroup group_;
  std::unordered_map<std::string, PauliString> table_;
  std::shared_ptr<ConcatenatedCodeSpec> concat_;
  std::shared_ptr<Decoder> inner_, outer_;
};

/// Minimum weight over the stabilizer coset of p (logical class preserved); n - 1 <= 20 generators.
inline std::size_t reduced_weight(const PauliString& p, const StabilizerGroup& g) {
  const auto& gens = g.generators();
  if (gens.size() > 20) return p.weight();
  std::size_t best = p.weight();
  const std::uint64_t total = std::uint64_t{1} << gens.size();
  // Gray-code walk over all stabilizer elements.
  PauliString cur = p;
  for (std::uint64_t i = 1; i < total; ++i) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(i));
    cur.xor_bits(gens[bit]);
    best = std::min(best, cur.weight());
  }
  return best;
}

// ---------------------------------------------------------------------------
// Generic-code recovery

/**
 * Recovery subspaces for a generic code: for each correctable error E (weight <= t,
 * ordered by weight then letters) the component of E*code orthogonal to earlier
 * subspaces, as an orthonormal pair (w0, w1) mapped back to (|0L>, |1L>).
 */
struct GenericRecovery {
  std::size_t n = 0;
  DenseState zero, one;
  std::vector<std::pair<DenseState, DenseState>> subspaces;
  std::vector<PauliString> errors;
};

inline GenericRecovery build_generic_recovery(const GenericCodeSpec& c) {
  GenericRecovery rec;
  rec.n = c.n;
  std::tie(rec.zero, rec.one) = codewords(c);
  const std::size_t t = (c.distance - 1) / 2;
  std::vector<PauliString> errs{PauliString(c.n)};
  std::vector<PauliString> layer;
  for (std::size_t w = 1; w <= t; ++w) {
    layer.clear();
    for (const auto& e : errs)
      if (e.weight() == w - 1) {
        const auto sup = e.support();
        const std::size_t start = sup.empty() ? 0 : sup.back() + 1;
        for (std::size_t q = start; q < c.n; ++q)
          for (char k : {'X', 'Y', 'Z'}) layer.push_back(e * PauliString::single(c.n, q, k));
      }
    std::sort(layer.begin(), layer.end(), [](const auto& a, const auto& b) { return a.text_less(b); });
    for (auto& e : layer) errs.push_back(e.with_phase(0));
  }
  for (const auto& e : errs) {
    auto v0 = apply_pauli(rec.zero, e), v1 = apply_pauli(rec.one, e);
    for (const auto& [a, b] : rec.subspaces) {
      for (auto* v : {&v0, &v1}) {
        const cplx ca = a.inner(*v), cb = b.inner(*v);
        for (std::size_t i = 0; i < v->dim(); ++i) (*v)[i] -= ca * a[i] + cb * b[i];
      }
    }
    const double n0 = v0.norm_sq(), n1 = v1.norm_sq();
    if (n0 < 1e-10 && n1 < 1e-10) continue;
    if (std::abs(n0 - n1) > 1e-8 || std::abs(v0.inner(v1)) > 1e-8)
      throw ValidationError("code " + c.name + " violates the error-correction conditions for " + e.to_text());
    v0.normalize();
    v1.normalize();
    rec.subspaces.emplace_back(std::move(v0), std::move(v1));
    rec.errors.push_back(e);
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Idealized logical Hadamard on a stabilizer block

/**
 * The Clifford that acts as logical H on the code space and fixes every stabilizer
 * and every pure error (destabilizer) exactly. On Paulis it multiplies in (XL ZL)
 * whenever the Pauli has exactly one of the two logical components.
 */
class LogicalHadamardBlock {
 public:
  explicit LogicalHadamardBlock(StabilizerCodeSpec code) : code_(std::move(code)) {}

  const StabilizerCodeSpec& code() const { return code_; }

  /// Exact conjugation of a block-local Pauli.
  PauliString conjugate_local(const PauliString& p) const {
    const bool a = !p.commutes(code_.logical_z);
    const bool b = !p.commutes(code_.logical_x);
    if (!a && !b) return p;
    PauliString m(code_.n), img(code_.n);
    if (a) m *= code_.logical_x;
    if (b) m *= code_.logical_z;
    if (a) img *= code_.logical_z;
    if (b) img *= code_.logical_x;
    return p * m.with_phase(-m.phase_exp()) * img;
  }

  /// Dense 2^n x 2^n matrix, built once.
  const std::vector<cplx>& matrix() const {
    std::call_once(cache_->once, [this] { cache_->matrix = build_matrix(); });
    return cache_->matrix;
  }

 private:
  std::vector<cplx> build_matrix() const {
    const std::size_t n = code_.n;
    DenseState::check_capacity(n, 12);
    auto [zero, one] = codewords(code_);
    const auto dest = destabilizers_for(code_.generators, {code_.logical_x, code_.logical_z});
    const std::size_t dim = std::size_t{1} << n;
    std::vector<cplx> mat(dim * dim);
    const double r = 1.0 / std::sqrt(2.0);
    const std::size_t k = dest.size();
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << k); ++s) {
      PauliString d(n);
      for (std::size_t i = 0; i < k; ++i)
        if ((s >> i) & 1u) d *= dest[i];
      auto a = apply_pauli(zero, d), b = apply_pauli(one, d);
      for (std::size_t row = 0; row < dim; ++row) {
        const cplx plus = r * (a[row] + b[row]), minus = r * (a[row] - b[row]);
        if (plus == cplx{} && minus == cplx{}) continue;
        for (std::size_t col = 0; col < dim; ++col)
          mat[row * dim + col] += plus * std::conj(a[col]) + minus * std::conj(b[col]);
      }
    }
    return mat;
  }

  StabilizerCodeSpec code_;
  struct Cache {
    std::once_flag once;
    std::vector<cplx> matrix;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// ---------------------------------------------------------------------------
// Ideal recovery on dense states

/// One syndrome outcome of an ideal recovery applied in lockstep to several vectors.
struct RecoveryBranch {
  std::vector<bool> syndrome;       // stabilizer codes
  std::optional<PauliString> correction;  // block-local; nullopt when no correction is known
  long subspace = -1;               // generic codes: index into GenericRecovery::subspaces, -1 = leftover
  bool recovered = true;
  std::vector<DenseState> states;   // unnormalized images of the inputs
};

namespace detail {
inline bool negligible(const std::vector<DenseState>& v) {
  for (const auto& s : v)
    if (s.norm_sq() > 1e-14) return false;
  return true;
}
}  // namespace detail

/// Syndrome-projects each generator in turn and applies the decoder's correction.
inline std::vector<RecoveryBranch> recovery_branches(const Decoder& dec, std::vector<DenseState> states,
                                                     std::size_t offset) {
  const auto& gens = dec.code().generators;
  const std::size_t n = dec.code().n;
  if (states.empty()) return {};
  const std::size_t width = states[0].n_qubits();
  if (offset + n > width) throw DimensionError("code block exceeds state width");
  std::vector<RecoveryBranch> cur(1);
  cur[0].states = std::move(states);
  for (const auto& g : gens) {
    const PauliString ge = g.embed(width, offset);
    std::vector<RecoveryBranch> next;
    for (auto& br : cur) {
      for (int o = 0; o < 2; ++o) {
        RecoveryBranch b;
        b.syndrome = br.syndrome;
        b.syndrome.push_back(o == 1);
        b.states = br.states;
        for (auto& s : b.states) s.project_pauli(ge, o);
        if (!detail::negligible(b.states)) next.push_back(std::move(b));
      }
    }
    cur = std::move(next);
  }
  for (auto& br : cur) {
    br.correction = dec.decode(br.syndrome);
    if (!br.correction) {
      br.recovered = false;
      continue;
    }
    const PauliString c = br.correction->embed(width, offset);
    for (auto& s : br.states) s.apply_pauli(c);
  }
  return cur;
}

/// Maps each correctable subspace back onto the code; whatever is left forms an unrecovered branch.
inline std::vector<RecoveryBranch> recovery_branches(const GenericRecovery& rec, std::vector<DenseState> states,
                                                     std::size_t offset) {
  if (states.empty()) return {};
  const std::size_t n = rec.n, width = states[0].n_qubits();
  if (offset + n > width) throw DimensionError("code block exceeds state width");
  const std::size_t bdim = std::size_t{1} << n, low = std::size_t{1} << offset;
  const std::size_t blocks = states[0].dim() / (bdim * low);
  auto index = [&](std::size_t hi, std::size_t b, std::size_t lo) { return (hi * bdim + b) * low + lo; };
  std::vector<RecoveryBranch> out;
  std::vector<DenseState> left = states;
  for (std::size_t k = 0; k < rec.subspaces.size(); ++k) {
    const auto& [w0, w1] = rec.subspaces[k];
    RecoveryBranch br;
    br.subspace = static_cast<long>(k);
    br.correction = rec.errors[k];
    for (std::size_t si = 0; si < states.size(); ++si) {
      const auto& s = states[si];
      DenseState img(width);
      img[0] = 0;
      for (std::size_t hi = 0; hi < blocks; ++hi)
        for (std::size_t lo = 0; lo < low; ++lo) {
          cplx c0{}, c1{};
          for (std::size_t b = 0; b < bdim; ++b) {
            const cplx a = s[index(hi, b, lo)];
            if (a == cplx{}) continue;
            c0 += std::conj(w0[b]) * a;
            c1 += std::conj(w1[b]) * a;
          }
          if (c0 == cplx{} && c1 == cplx{}) continue;
          for (std::size_t b = 0; b < bdim; ++b) {
            img[index(hi, b, lo)] = c0 * rec.zero[b] + c1 * rec.one[b];
            left[si][index(hi, b, lo)] -= c0 * w0[b] + c1 * w1[b];
          }
        }
      br.states.push_back(std::move(img));
    }
    if (!detail::negligible(br.states)) out.push_back(std::move(br));
  }
  if (!detail::negligible(left)) {
    RecoveryBranch br;
    br.recovered = false;
    br.states = std::move(left);
    out.push_back(std::move(br));
  }
  return out;
}

struct RecoveredState {
  double probability = 0;
  bool recovered = true;
  std::optional<PauliString> correction;
  DenseState state;  // normalized
};

/// Ideal recovery channel on the block [offset, offset + n): one entry per reachable syndrome.
inline std::vector<RecoveredState> ideal_recover(const CodeSpec& code, const DenseState& state, std::size_t offset = 0) {
  std::vector<RecoveryBranch> branches;
  if (auto* s = std::get_if<StabilizerCodeSpec>(&code)) {
    branches = recovery_branches(Decoder(*s), {state}, offset);
  } else {
    branches = recovery_branches(build_generic_recovery(std::get<GenericCodeSpec>(code)), {state}, offset);
  }
  const double total = state.norm_sq();
  std::vector<RecoveredState> out;
  for (auto& b : branches) {
    RecoveredState r;
    r.probability = b.states[0].norm_sq() / total;
    if (r.probability < kImpossibleBranch) continue;
    r.recovered = b.recovered;
    r.correction = b.correction;
    r.state = std::move(b.states[0]);
    r.state.normalize();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ftgadget
