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
/// Builders for the three phase-gadget architectures and their classical correction rules.
///
/// Qubit layout: data block on [0, n), then the ancilla block(s). A T gadget in chain
/// mode appends a second, record-conditioned S gadget on fresh ancilla qubits.

#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ftgadget/circuit.hpp"
#include "ftgadget/codes.hpp"
#include "ftgadget/error.hpp"

namespace ftgadget {

enum class GateTarget { S, H, T };
enum class Architecture { fig1, fig2, fig3 };
enum class TCorrectionMode { chain_s_gadget, repeat_until_success };

inline const char* target_name(GateTarget g) {
  switch (g) {
    case GateTarget::S: return "S";
    case GateTarget::H: return "H";
    case GateTarget::T: return "T";
  }
  return "?";
}
inline GateTarget target_from(const std::string& s) {
  if (s == "S") return GateTarget::S;
  if (s == "H") return GateTarget::H;
  if (s == "T") return GateTarget::T;
  throw ParseError("unknown gadget kind '" + s + "'");
}
inline const char* architecture_name(Architecture a) {
  switch (a) {
    case Architecture::fig1: return "fig1";
    case Architecture::fig2: return "fig2";
    case Architecture::fig3: return "fig3";
  }
  return "?";
}
inline Architecture architecture_from(const std::string& s) {
  if (s == "fig1") return Architecture::fig1;
  if (s == "fig2") return Architecture::fig2;
  if (s == "fig3") return Architecture::fig3;
  throw ParseError("unknown architecture '" + s + "'");
}
inline const char* t_mode_name(TCorrectionMode m) {
  return m == TCorrectionMode::chain_s_gadget ? "chain_s_gadget" : "repeat_until_success";
}
inline TCorrectionMode t_mode_from(const std::string& s) {
  if (s == "chain_s_gadget") return TCorrectionMode::chain_s_gadget;
  if (s == "repeat_until_success") return TCorrectionMode::repeat_until_success;
  throw ParseError("unknown T correction mode '" + s + "'");
}

struct GadgetConfig {
  GateTarget kind = GateTarget::S;
  Architecture architecture = Architecture::fig1;
  CodeSpec data_code = repetition_code(3);
  std::optional<StabilizerCodeSpec> ancilla_outer;
  bool reduced_support = false;
  bool interleave_ec = false;
  TCorrectionMode t_correction_mode = TCorrectionMode::chain_s_gadget;
};

// ---------------------------------------------------------------------------
// 2x2 logical algebra

inline Mat2 target_matrix(GateTarget g) {
  const double r = 1 / std::sqrt(2.0);
  switch (g) {
    case GateTarget::S: return {1, 0, 0, cplx{0, 1}};
    case GateTarget::H: return {r, r, r, -r};
    case GateTarget::T: return {1, 0, 0, std::polar(1.0, M_PI / 4)};
  }
  return pauli_matrix('I');
}

/// True if a = c b for some nonzero c.
inline bool proportional_any(const Mat2& a, const Mat2& b, double tol = 1e-9) {
  auto unit = [](Mat2 m) {
    double f = 0;
    for (auto v : m) f += std::norm(v);
    f = std::sqrt(f / 2);
    if (f > 0)
      for (auto& v : m) v /= f;
    return m;
  };
  return proportional(unit(a), unit(b), tol).has_value();
}

inline char coupling_letter(GateTarget g) { return g == GateTarget::H ? 'Y' : 'Z'; }

inline GateKind coupling_gate(GateTarget g) { return g == GateTarget::H ? GateKind::CY : GateKind::CZ; }

inline PrepLabel ancilla_label(GateTarget g) { return g == GateTarget::T ? PrepLabel::pi_8 : PrepLabel::minus_i; }

struct BranchCorrection {
  char logical = 'I';                // transversal Pauli applied to the data, by letter
  std::optional<PauliString> pauli;  // data-local; nullopt for identity
  bool chain_s = false;              // outcome needs a further S gadget
  Mat2 branch_action{};              // logical operator the branch applies before correction
};

struct CorrectionRule {
  Mat2 coupling_action{};  // logical action of the transversal coupling Pauli on the data
  std::array<BranchCorrection, 2> branch;
};

/**
 * Derives the per-outcome correction from the data code's logical actions: branch b applies
 * a*I + (-1)^b * c*L (ancilla a|0>+c|1>, L the transversal coupling Pauli), and the correction is the
 * transversal Pauli M in {I, X^n, Y^n, Z^n} with M times that proportional to the target.
 */
inline CorrectionRule classical_correction_rule(const CodeSpec& data, GateTarget kind) {
  const std::size_t n = code_length(data);
  CorrectionRule rule;
  rule.coupling_action = logical_action(data, transversal(n, coupling_letter(kind)));
  const auto [a, c] = prep_amplitudes(ancilla_label(kind));
  const Mat2 target = target_matrix(kind);
  for (int b = 0; b < 2; ++b) {
    Mat2 m{};
    const double sign = b ? -1.0 : 1.0;
    for (std::size_t i = 0; i < 4; ++i) m[i] = (i == 0 || i == 3 ? a : cplx{}) + sign * c * rule.coupling_action[i];
    auto& br = rule.branch[static_cast<std::size_t>(b)];
    br.branch_action = m;
    bool found = false;
    for (char letter : {'I', 'Z', 'X', 'Y'}) {
      Mat2 act = pauli_matrix('I');
      if (letter != 'I') {
        try {
          act = logical_action(data, transversal(n, letter));
        } catch (const ValidationError&) {
          continue;
        }
      }
      if (proportional_any(mat_mul(act, m), target)) {
        br.logical = letter;
        if (letter != 'I') br.pauli = transversal(n, letter);
        found = true;
        break;
      }
    }
    if (!found && kind == GateTarget::T && proportional_any(mat_mul(target_matrix(GateTarget::S), m), target)) {
      br.chain_s = true;
      found = true;
    }
    if (!found)
      throw UnsupportedError(std::string("no transversal Pauli correction for the ") + target_name(kind) +
                             " gadget outcome " + std::to_string(b) + " on code " + code_name(data));
  }
  return rule;
}

// ---------------------------------------------------------------------------
// Built gadget

struct Gadget {
  GadgetConfig config;
  Circuit circuit;
  CorrectionRule rule;
  int record = -1;                         // main outcome record
  std::vector<std::size_t> support;        // ancilla (outer) positions hooked to the data
  std::vector<std::size_t> ancilla_qubits;
  std::size_t coupling_end = 0;            // first location after the coupling rounds
  std::vector<std::size_t> round_ends;     // first location after each coupling round
  bool ancilla_h_transversal = true;       // false when an idealized logical-H block stands in
  bool repeat_until_success = false;       // outcome-1 branch is discarded, not corrected
  std::optional<PauliString> conjugate;    // data-local C0*C1, the logical effect of a flipped outcome

  std::size_t n_data() const { return circuit.n_data; }
  const CodeContext& data() const { return *circuit.codes[0]; }
  std::size_t coupling_count() const {
    std::size_t k = 0;
    for (std::size_t i = 0; i < coupling_end; ++i) {
      const auto& l = circuit.locations[i];
      if (l.kind == LocKind::gate && l.gate->kind == coupling_gate(config.kind)) ++k;
    }
    return k;
  }
};

namespace detail {

struct Segment {
  int record = -1;
  std::vector<std::size_t> support;
  std::vector<std::size_t> ancilla;
  std::size_t coupling_end = 0;
  std::vector<std::size_t> round_ends;
  bool transversal_h = true;
};

inline std::vector<std::size_t> range(std::size_t from, std::size_t count) {
  std::vector<std::size_t> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = from + i;
  return v;
}

inline std::vector<std::size_t> hook_support(const StabilizerCodeSpec& outer, bool reduced) {
  if (reduced) {
    auto z = restricted_parity_support(outer, outer.n);
    if (!z) throw ValidationError("ancilla code " + outer.name + " has no Z-type logical operator");
    return z->support;
  }
  if (!has_transversal_z_symbolic(outer))
    throw ValidationError("ancilla code " + outer.name + " lacks transversal Z; use reduced support");
  return range(0, outer.n);
}

inline void add_corrections(CircuitBuilder& b, const CorrectionRule& rule, std::size_t width, std::size_t n,
                            int record) {
  PauliString c0 = rule.branch[0].pauli.value_or(PauliString(n));
  PauliString c1 = rule.branch[1].pauli.value_or(PauliString(n));
  if (!c0.is_identity()) {
    b.tick();
    b.classical(-1, c0.embed(width, 0).with_phase(0));
  }
  PauliString flip = c0 * c1;
  if (!flip.is_identity()) {
    b.tick();
    b.classical(record, flip.with_phase(0).embed(width, 0));
  }
}

/// Appends one phase gadget of the configured architecture; ancilla qubits start at `base`.
inline Segment append_gadget(CircuitBuilder& b, const GadgetConfig& cfg, GateTarget kind, std::size_t base,
                             std::size_t width, int data_code, const CorrectionRule& rule) {
  const std::size_t n = code_length(cfg.data_code);
  const auto gate = coupling_gate(kind);
  const auto label = ancilla_label(kind);
  Segment seg;
  auto mark = [&](const std::vector<std::size_t>& qs, bool live) {
    for (auto q : qs) b.set_live(q, live);
  };

  switch (cfg.architecture) {
    case Architecture::fig1: {
      const std::size_t anc = base;
      seg.ancilla = {anc};
      seg.support = {0};
      b.tick();
      mark(seg.ancilla, true);
      b.prepare({anc}, label, -1);
      for (std::size_t i = 0; i < n; ++i) {
        b.tick();
        b.gate(CliffordGate(gate, anc, i));
        seg.round_ends.push_back(b.boundary());
      }
      seg.coupling_end = b.boundary();
      b.tick();
      b.gate(CliffordGate(GateKind::H, anc));
      b.tick();
      seg.record = b.measure(anc);
      mark(seg.ancilla, false);
      break;
    }
    case Architecture::fig2: {
      const auto& outer = *cfg.ancilla_outer;
      const std::size_t m = outer.n;
      seg.ancilla = range(base, m);
      seg.support = hook_support(outer, cfg.reduced_support);
      const int acode = b.add_code(std::make_shared<CodeContext>(outer));
      b.tick();
      mark(seg.ancilla, true);
      b.prepare(seg.ancilla, label, acode);
      for (std::size_t i = 0; i < n; ++i) {
        for (auto a : seg.support) {
          b.tick();
          b.gate(CliffordGate(gate, base + a, i));
        }
        seg.round_ends.push_back(b.boundary());
      }
      seg.coupling_end = b.boundary();
      b.tick();
      seg.transversal_h = has_transversal_h(outer);
      if (seg.transversal_h) {
        for (auto q : seg.ancilla) b.gate(CliffordGate(GateKind::H, q));
      } else {
        b.block(LocKind::logical_h, seg.ancilla, acode);
      }
      b.tick();
      seg.record = b.measure_logical(seg.ancilla, acode);
      mark(seg.ancilla, false);
      break;
    }
    case Architecture::fig3: {
      const auto& outer = *cfg.ancilla_outer;
      const auto concat = concatenate(outer, n);
      const std::size_t m = outer.n;
      seg.ancilla = range(base, m * n);
      seg.support = hook_support(outer, cfg.reduced_support);
      const int acode = b.add_code(std::make_shared<CodeContext>(concat));
      b.tick();
      mark(seg.ancilla, true);
      b.prepare(seg.ancilla, label, acode);
      for (auto j : seg.support) {
        b.tick();
        for (std::size_t i = 0; i < n; ++i) b.gate(CliffordGate(gate, base + j * n + i, i));
        if (cfg.interleave_ec) {
          b.tick();
          b.block(LocKind::ec_subgadget, range(0, n), data_code);
        }
        seg.round_ends.push_back(b.boundary());
      }
      seg.coupling_end = b.boundary();
      b.tick();
      seg.transversal_h = has_transversal_h(outer);
      if (seg.transversal_h) {
        const int rcode = b.add_code(std::make_shared<CodeContext>(CodeSpec(repetition_code(n))));
        for (std::size_t j = 0; j < m; ++j) b.block(LocKind::logical_h, range(base + j * n, n), rcode);
      } else {
        b.block(LocKind::logical_h, seg.ancilla, acode);
      }
      b.tick();
      seg.record = b.measure_logical(seg.ancilla, acode);
      mark(seg.ancilla, false);
      break;
    }
  }
  add_corrections(b, rule, width, n, seg.record);
  return seg;
}

inline std::size_t ancilla_width(const GadgetConfig& cfg) {
  switch (cfg.architecture) {
    case Architecture::fig1: return 1;
    case Architecture::fig2: return cfg.ancilla_outer->n;
    case Architecture::fig3: return cfg.ancilla_outer->n * code_length(cfg.data_code);
  }
  return 0;
}

}  // namespace detail

inline void check_config(const GadgetConfig& cfg) {
  const auto v = validate(cfg.data_code);
  if (!v.valid) throw ValidationError("data code " + code_name(cfg.data_code) + ": " + v.violations.front());
  if (cfg.architecture != Architecture::fig1) {
    if (!cfg.ancilla_outer) throw ValidationError("fig2/fig3 need an ancilla code");
    const auto va = validate(*cfg.ancilla_outer);
    if (!va.valid) throw ValidationError("ancilla code " + cfg.ancilla_outer->name + ": " + va.violations.front());
  }
  if (cfg.architecture == Architecture::fig3) {
    const std::size_t n = code_length(cfg.data_code);
    bool tz = false;
    try {
      tz = proportional_any(logical_action(cfg.data_code, transversal(n, 'Z')), pauli_matrix('Z'));
    } catch (const ValidationError&) {
    }
    if (!tz) throw ValidationError("fig3 requires a data code with transversal Z");
    if (!has_transversal_z_symbolic(*cfg.ancilla_outer))
      throw ValidationError("fig3 requires an outer ancilla code with transversal Z");
  }
  if (cfg.interleave_ec && cfg.architecture != Architecture::fig3)
    throw ValidationError("interleaved EC is only defined for fig3");
}

inline Gadget build(const GadgetConfig& cfg) {
  check_config(cfg);
  const std::size_t n = code_length(cfg.data_code);
  const auto rule = classical_correction_rule(cfg.data_code, cfg.kind);
  const bool chain = cfg.kind == GateTarget::T && cfg.t_correction_mode == TCorrectionMode::chain_s_gadget;
  const std::size_t aw = detail::ancilla_width(cfg);
  const std::size_t width = n + aw * (chain ? 2 : 1);

  Gadget g;
  g.config = cfg;
  g.rule = rule;
  CircuitBuilder b(width, n);
  std::vector<bool> live(width, false);
  for (std::size_t q = 0; q < n; ++q) live[q] = true;
  b.set_live(live);
  const int dcode = b.add_code(std::make_shared<CodeContext>(cfg.data_code));

  // The T gadget's outcome-1 branch is left for the chained S gadget (or discarded).
  CorrectionRule main_rule = rule;
  for (auto& br : main_rule.branch)
    if (br.chain_s) br = BranchCorrection{};
  auto seg = detail::append_gadget(b, cfg, cfg.kind, n, width, dcode, main_rule);
  g.record = seg.record;
  g.support = seg.support;
  g.ancilla_qubits = seg.ancilla;
  g.coupling_end = seg.coupling_end;
  g.round_ends = seg.round_ends;
  g.ancilla_h_transversal = seg.transversal_h;

  if (cfg.kind == GateTarget::T) {
    if (chain) {
      const auto srule = classical_correction_rule(cfg.data_code, GateTarget::S);
      b.set_condition(seg.record);
      auto s2 = detail::append_gadget(b, cfg, GateTarget::S, n + aw, width, dcode, srule);
      g.ancilla_h_transversal = g.ancilla_h_transversal && s2.transversal_h;
      b.boundary();
      b.set_condition(-1);
    } else {
      g.repeat_until_success = true;
    }
  } else {
    PauliString c0 = rule.branch[0].pauli.value_or(PauliString(n));
    PauliString c1 = rule.branch[1].pauli.value_or(PauliString(n));
    g.conjugate = (c0 * c1).with_phase(0);
  }
  g.circuit = b.finish();
  return g;
}

/// Idealized correct-then-measure block, as a circuit fragment on a fresh register of the code's length.
inline Circuit measurement_subgadget(const CodeContext& ancilla) {
  if (!ancilla.stabilizer()) throw UnsupportedError("measurement sub-gadget needs a stabilizer ancilla code");
  const std::size_t m = ancilla.n();
  CircuitBuilder b(m, 0);
  const int code = b.add_code(std::make_shared<CodeContext>(ancilla));
  b.tick();
  b.measure_logical(detail::range(0, m), code);
  return b.finish();
}

}  // namespace ftgadget
