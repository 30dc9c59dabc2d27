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
/// Location-tagged circuit representation shared by gadget builders, simulators,
/// fault enumeration and the text exporter.

#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ftgadget/codes.hpp"
#include "ftgadget/error.hpp"
#include "ftgadget/pauli.hpp"
#include "ftgadget/statevector.hpp"

namespace ftgadget {

enum class PrepLabel { zero, minus_i, pi_8 };

inline const char* prep_label_name(PrepLabel l) {
  switch (l) {
    case PrepLabel::zero: return "zero";
    case PrepLabel::minus_i: return "minus_i";
    case PrepLabel::pi_8: return "pi_8";
  }
  return "?";
}

inline PrepLabel prep_label_from(const std::string& s) {
  if (s == "zero") return PrepLabel::zero;
  if (s == "minus_i") return PrepLabel::minus_i;
  if (s == "pi_8") return PrepLabel::pi_8;
  throw ParseError("unknown prepare label '" + s + "'");
}

/// Logical amplitudes (alpha, beta) of a prepared label.
inline std::pair<cplx, cplx> prep_amplitudes(PrepLabel l) {
  const double r = 1 / std::sqrt(2.0);
  switch (l) {
    case PrepLabel::zero: return {1.0, 0.0};
    case PrepLabel::minus_i: return {r, cplx{0, -r}};
    case PrepLabel::pi_8: return {std::cos(M_PI / 8), cplx{0, -std::sin(M_PI / 8)}};
  }
  return {1.0, 0.0};
}

/**
 * A code placed on some block of a circuit, with the derived machinery every
 * backend needs. Immutable after construction; expensive parts are built once.
 */
class CodeContext {
 public:
  explicit CodeContext(CodeSpec spec) : spec_(std::move(spec)) {
    if (auto* s = std::get_if<StabilizerCodeSpec>(&spec_)) {
      decoder_ = std::make_shared<Decoder>(*s);
      hadamard_ = std::make_shared<LogicalHadamardBlock>(*s);
    }
  }
  explicit CodeContext(const ConcatenatedCodeSpec& c) : spec_(c.flatten()), concat_(c) {
    decoder_ = std::make_shared<Decoder>(c);
    hadamard_ = std::make_shared<LogicalHadamardBlock>(std::get<StabilizerCodeSpec>(spec_));
  }

  const CodeSpec& spec() const { return spec_; }
  bool stabilizer() const { return is_stabilizer(spec_); }
  const StabilizerCodeSpec& stab() const {
    if (!stabilizer()) throw UnsupportedError("code " + code_name(spec_) + " is not a stabilizer code");
    return std::get<StabilizerCodeSpec>(spec_);
  }
  const std::optional<ConcatenatedCodeSpec>& concatenated() const { return concat_; }
  std::size_t n() const { return code_length(spec_); }
  const Decoder& decoder() const {
    if (!decoder_) throw UnsupportedError("no syndrome decoder for generic code " + code_name(spec_));
    return *decoder_;
  }
  const LogicalHadamardBlock& hadamard() const {
    if (!hadamard_) throw UnsupportedError("no logical Hadamard for generic code " + code_name(spec_));
    return *hadamard_;
  }
  const GenericRecovery& generic_recovery() const {
    std::call_once(cache_->once, [this] {
      cache_->recovery = build_generic_recovery(std::get<GenericCodeSpec>(spec_));
    });
    return cache_->recovery;
  }
  const std::pair<DenseState, DenseState>& dense_codewords() const {
    std::call_once(cache_->cw_once, [this] { cache_->codewords = codewords(spec_); });
    return cache_->codewords;
  }

 private:
  struct Cache {
    std::once_flag once, cw_once;
    GenericRecovery recovery;
    std::pair<DenseState, DenseState> codewords;
  };
  CodeSpec spec_;
  std::optional<ConcatenatedCodeSpec> concat_;
  std::shared_ptr<Decoder> decoder_;
  std::shared_ptr<LogicalHadamardBlock> hadamard_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

enum class LocKind {
  prepare,          // ideal preparation of `label` in `code` (or one bare qubit)
  gate,             // Clifford gate
  unitary,          // arbitrary one-qubit unitary (non-Clifford)
  idle,             // one qubit waiting one timestep
  measure_z,        // computational-basis measurement into `record`
  classical_pauli,  // apply `pauli` when record `record` reads 1 (always when record < 0)
  ec_subgadget,     // idealized error correction on a block
  measure_logical,  // idealized correct-then-measure logical Z of a stabilizer block
  logical_h,        // idealized logical Hadamard block unitary
  fault             // injected Pauli (only in circuits returned by inject)
};

inline const char* loc_kind_name(LocKind k) {
  switch (k) {
    case LocKind::prepare: return "prepare";
    case LocKind::gate: return "gate";
    case LocKind::unitary: return "unitary";
    case LocKind::idle: return "idle";
    case LocKind::measure_z: return "measure";
    case LocKind::classical_pauli: return "classical";
    case LocKind::ec_subgadget: return "ec";
    case LocKind::measure_logical: return "measure_logical";
    case LocKind::logical_h: return "logical_h";
    case LocKind::fault: return "fault";
  }
  return "?";
}

struct Location {
  std::size_t id = 0;
  std::size_t timestep = 0;
  LocKind kind = LocKind::idle;
  std::vector<std::size_t> qubits;
  std::optional<CliffordGate> gate;
  std::optional<OneQubitUnitary> unitary;
  PrepLabel label = PrepLabel::zero;
  int record = -1;     // measure: record written; classical: record read
  int condition = -1;  // when >= 0, the location runs only if that record reads 1
  int code = -1;       // index into Circuit::codes
  std::optional<PauliString> pauli;  // classical: full-width Pauli; fault: local Pauli
  bool flip = false;   // measurement with an injected record flip
};

struct Circuit {
  std::size_t width = 0;
  std::size_t n_data = 0;  // data block occupies qubits [0, n_data)
  std::vector<std::shared_ptr<const CodeContext>> codes;
  std::vector<Location> locations;
  std::size_t n_records = 0;

  const Location& at(std::size_t id) const {
    if (id >= locations.size() || locations[id].id != id)
      throw IndexError("unknown location id " + std::to_string(id));
    return locations[id];
  }
  const CodeContext& code(const Location& l) const {
    if (l.code < 0 || static_cast<std::size_t>(l.code) >= codes.size())
      throw IndexError("location " + std::to_string(l.id) + " has no code");
    return *codes[static_cast<std::size_t>(l.code)];
  }
  std::size_t count(LocKind k, std::optional<GateKind> g = std::nullopt) const {
    std::size_t c = 0;
    for (const auto& l : locations)
      if (l.kind == k && (!g || (l.gate && l.gate->kind == *g))) ++c;
    return c;
  }
  std::size_t n_timesteps() const { return locations.empty() ? 0 : locations.back().timestep + 1; }
  bool clifford_only() const {
    for (const auto& l : locations) {
      if (l.kind == LocKind::unitary) return false;
      if (l.kind == LocKind::prepare && l.label == PrepLabel::pi_8) return false;
      if (l.condition >= 0) return false;
    }
    return true;
  }

  /// Checks ordering, ranges, and that every read record is written earlier.
  void check() const {
    std::vector<bool> written(n_records, false);
    std::size_t prev_t = 0;
    for (std::size_t i = 0; i < locations.size(); ++i) {
      const auto& l = locations[i];
      if (l.id != i) throw ValidationError("location ids must be 0..N-1 in order");
      if (l.timestep < prev_t) throw ValidationError("timesteps must not decrease");
      prev_t = l.timestep;
      for (auto q : l.qubits)
        if (q >= width) throw IndexError("location " + std::to_string(i) + " touches qubit " + std::to_string(q));
      if (l.gate && l.gate->max_qubit() >= width) throw IndexError("gate out of range");
      auto read = [&](int r) {
        if (r < 0 || static_cast<std::size_t>(r) >= n_records || !written[static_cast<std::size_t>(r)])
          throw ValidationError("location " + std::to_string(i) + " reads record " + std::to_string(r) +
                                " before it is measured");
      };
      if (l.condition >= 0) read(l.condition);
      if (l.kind == LocKind::classical_pauli && l.record >= 0) read(l.record);
      if (l.kind == LocKind::measure_z || l.kind == LocKind::measure_logical) {
        if (l.record < 0 || static_cast<std::size_t>(l.record) >= n_records)
          throw ValidationError("measurement without a record slot");
        written[static_cast<std::size_t>(l.record)] = true;
      }
    }
  }
};

/// Incremental builder that assigns ids and timesteps.
class CircuitBuilder {
 public:
  CircuitBuilder(std::size_t width, std::size_t n_data) {
    c_.width = width;
    c_.n_data = n_data;
  }

  int add_code(std::shared_ptr<const CodeContext> code) {
    c_.codes.push_back(std::move(code));
    return static_cast<int>(c_.codes.size() - 1);
  }

  void set_condition(int record) { condition_ = record; }

  /// Closes the current timestep and returns the id the next location will get.
  std::size_t boundary() {
    close_step();
    return c_.locations.size();
  }

  /// Starts a new timestep; qubits not touched in it receive idle locations when it closes.
  void tick() {
    close_step();
    open_ = true;
    busy_.assign(c_.width, false);
  }

  Location& push(Location l) {
    if (!open_) tick();
    for (auto q : l.qubits) {
      if (busy_[q]) throw ValidationError("qubit " + std::to_string(q) + " used twice in one timestep");
      busy_[q] = true;
    }
    l.timestep = step_;
    l.id = c_.locations.size();
    if (l.condition < 0) l.condition = condition_;
    c_.locations.push_back(std::move(l));
    return c_.locations.back();
  }

  void gate(const CliffordGate& g) {
    Location l;
    l.kind = LocKind::gate;
    l.gate = g;
    l.qubits = {g.qubits[0]};
    if (g.arity() == 2) l.qubits.push_back(g.qubits[1]);
    push(std::move(l));
  }

  void prepare(std::vector<std::size_t> qubits, PrepLabel label, int code) {
    Location l;
    l.kind = LocKind::prepare;
    l.qubits = std::move(qubits);
    l.label = label;
    l.code = code;
    push(std::move(l));
  }

  int measure(std::size_t q) {
    Location l;
    l.kind = LocKind::measure_z;
    l.qubits = {q};
    l.record = static_cast<int>(c_.n_records++);
    return push(std::move(l)).record;
  }

  int measure_logical(std::vector<std::size_t> qubits, int code) {
    Location l;
    l.kind = LocKind::measure_logical;
    l.qubits = std::move(qubits);
    l.code = code;
    l.record = static_cast<int>(c_.n_records++);
    return push(std::move(l)).record;
  }

  void block(LocKind kind, std::vector<std::size_t> qubits, int code) {
    Location l;
    l.kind = kind;
    l.qubits = std::move(qubits);
    l.code = code;
    push(std::move(l));
  }

  void classical(int record, const PauliString& p) {
    Location l;
    l.kind = LocKind::classical_pauli;
    l.record = record;
    l.qubits = p.support();
    l.pauli = p;
    push(std::move(l));
  }

  /// Idle markers are only generated for qubits in `live`.
  void set_live(std::vector<bool> live) { live_ = std::move(live); }
  void set_live(std::size_t q, bool v) {
    if (live_.empty()) live_.assign(c_.width, false);
    live_[q] = v;
  }

  Circuit finish() {
    close_step();
    c_.check();
    return std::move(c_);
  }

 private:
  void close_step() {
    if (!open_) return;
    open_ = false;
    for (std::size_t q = 0; q < c_.width; ++q)
      if (!busy_[q] && (live_.empty() || live_[q])) {
        Location l;
        l.kind = LocKind::idle;
        l.qubits = {q};
        l.timestep = step_;
        l.id = c_.locations.size();
        l.condition = condition_;
        c_.locations.push_back(std::move(l));
      }
    ++step_;
  }

  Circuit c_;
  std::size_t step_ = 0;
  bool open_ = false;
  std::vector<bool> busy_;
  std::vector<bool> live_;
  int condition_ = -1;
};

}  // namespace ftgadget
