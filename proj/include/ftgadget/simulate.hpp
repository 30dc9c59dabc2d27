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
/// Circuit executors. The dense executor carries the images of both logical basis
/// states through every branch, so a run serves all input states at once; the
/// tableau executor runs stabilizer inputs at sizes beyond dense capacity.

#include <algorithm>
#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ftgadget/circuit.hpp"
#include "ftgadget/codes.hpp"
#include "ftgadget/error.hpp"
#include "ftgadget/faults.hpp"
#include "ftgadget/statevector.hpp"
#include "ftgadget/tableau.hpp"

namespace ftgadget {

/// One branch of a dense run: the unnormalized images of |0L> and |1L> of the data block.
struct SvPath {
  std::vector<int> records;
  std::array<DenseState, 2> v;
  bool unrecoverable = false;
  std::size_t ec_weight = 0;  // weight of the trailing recovery's correction
  std::string tag;  // branch description, e.g. "r0=1 s3=0101"

  DenseState combine(cplx alpha, cplx beta) const {
    DenseState out = v[0];
    for (std::size_t i = 0; i < out.dim(); ++i) out[i] = alpha * v[0][i] + beta * v[1][i];
    return out;
  }
  bool negligible() const { return v[0].norm_sq() < 1e-14 && v[1].norm_sq() < 1e-14; }
};

namespace detail {

inline std::string bits(const std::vector<bool>& b) {
  std::string s;
  for (bool x : b) s += x ? '1' : '0';
  return s;
}

inline std::size_t contiguous_offset(const std::vector<std::size_t>& qs) {
  for (std::size_t i = 0; i < qs.size(); ++i)
    if (qs[i] != qs[0] + i) throw UnsupportedError("dense sub-gadgets need a contiguous block");
  return qs.empty() ? 0 : qs[0];
}

}  // namespace detail

class StatevectorExecutor {
 public:
  static constexpr std::size_t kMaxCachedQubits = 16;

  explicit StatevectorExecutor(const Circuit& c, std::size_t max_qubits = kDefaultMaxQubits) : c_(c) {
    DenseState::check_capacity(c.width, max_qubits);
    const auto& data = *c.codes.at(0);
    if (data.n() != c.n_data) throw ValidationError("code 0 must be the data code");
    build_prep_tables();
    first_branch_ = c_.locations.size();
    for (const auto& l : c_.locations)
      if (branching(l)) {
        first_branch_ = l.id;
        break;
      }
    SvPath start;
    start.records.assign(c_.n_records, -1);
    const auto& [zero, one] = data.dense_codewords();
    for (int k = 0; k < 2; ++k) {
      const auto& cw = k ? one : zero;
      std::vector<cplx> amps(std::size_t{1} << c_.width);
      for (std::size_t i = 0; i < cw.dim(); ++i) amps[i] = cw[i];
      start.v[static_cast<std::size_t>(k)] = DenseState::from_amplitudes(std::move(amps));
    }
    // Fault-free prefix snapshots up to the first branching location.
    const std::size_t bytes_per = std::size_t{32} << c_.width;
    std::size_t budget = c_.width <= kMaxCachedQubits ? std::size_t{512} << 20 : 0;
    prefix_.resize(first_branch_ + 1);
    std::vector<SvPath> cur{start};
    for (std::size_t k = 0; k <= first_branch_ && k < c_.locations.size() + 1; ++k) {
      if (k == c_.locations.size() || c_.locations[k].kind != LocKind::idle || k == first_branch_) {
        if (budget < bytes_per) break;
        budget -= bytes_per;
        prefix_[k] = cur;
      }
      if (k < first_branch_) cur = step(std::move(cur), c_.locations[k]);
    }
    start_ = std::move(start);
  }

  const Circuit& circuit() const { return c_; }

  /// Runs the whole circuit with an optional single fault (nullptr for the fault-free run).
  std::vector<SvPath> run(const FaultEvent* fault = nullptr) const { return run_until(c_.locations.size(), fault); }

  /// Runs locations [0, end) with an optional fault.
  std::vector<SvPath> run_until(std::size_t end, const FaultEvent* fault = nullptr) const {
    std::size_t from = fault ? std::min(fault->location_id, first_branch_) : first_branch_;
    from = std::min(from, end);
    std::vector<SvPath> paths;
    std::size_t k = from;
    while (k < prefix_.size() && !prefix_[k]) ++k;
    if (k < prefix_.size() && prefix_[k] && (k == from || only_idles(from, k))) {
      paths = *prefix_[k];
    } else {
      paths = {start_};
      from = 0;
    }
    for (std::size_t i = from; i < end; ++i) {
      const auto& l = c_.locations[i];
      const bool here = fault && fault->location_id == i;
      if (here && !fault->measurement_flip && fault->attach == Attach::before) apply_fault(paths, l, *fault);
      paths = step(std::move(paths), l, here && fault->measurement_flip);
      if (here && !fault->measurement_flip && fault->attach == Attach::after) apply_fault(paths, l, *fault);
    }
    return paths;
  }

  static bool branching(const Location& l) {
    return l.kind == LocKind::measure_z || l.kind == LocKind::ec_subgadget || l.kind == LocKind::measure_logical ||
           l.condition >= 0;
  }

 private:
  bool only_idles(std::size_t from, std::size_t to) const {
    for (std::size_t i = from; i < to; ++i)
      if (c_.locations[i].kind != LocKind::idle) return false;
    return true;
  }

  void apply_fault(std::vector<SvPath>& paths, const Location& l, const FaultEvent& f) const {
    const auto p = f.pauli.scatter(c_.width, l.qubits);
    for (auto& path : paths)
      for (auto& s : path.v) s.apply_pauli(p);
  }

  void build_prep_tables() {
    prep_.resize(c_.locations.size());
    for (const auto& l : c_.locations) {
      if (l.kind != LocKind::prepare) continue;
      auto [a, b] = prep_amplitudes(l.label);
      std::vector<std::pair<std::size_t, cplx>> table;
      auto deposit = [&](std::size_t local) {
        std::size_t idx = 0;
        for (std::size_t t = 0; t < l.qubits.size(); ++t)
          if ((local >> t) & 1u) idx |= std::size_t{1} << l.qubits[t];
        return idx;
      };
      if (l.code < 0) {
        if (l.qubits.size() != 1) throw ValidationError("bare preparation acts on one qubit");
        table = {{0, a}, {deposit(1), b}};
      } else {
        const auto& [zero, one] = c_.code(l).dense_codewords();
        for (std::size_t i = 0; i < zero.dim(); ++i) {
          const cplx v = a * zero[i] + b * one[i];
          if (std::abs(v) > 1e-15) table.emplace_back(deposit(i), v);
        }
      }
      prep_[l.id] = std::move(table);
    }
  }

  void prepare(DenseState& s, const Location& l) const {
    std::size_t mask = 0;
    for (auto q : l.qubits) mask |= std::size_t{1} << q;
    DenseState out = s;
    for (std::size_t i = 0; i < out.dim(); ++i) out[i] = 0;
    for (std::size_t i = 0; i < s.dim(); ++i) {
      if (s[i] == cplx{}) continue;
      if (i & mask) {
        if (std::abs(s[i]) > 1e-12)
          throw UnsupportedError("preparation at location " + std::to_string(l.id) + " on qubits that are not fresh");
        continue;
      }
      for (const auto& [off, amp] : prep_[l.id]) out[i | off] += s[i] * amp;
    }
    s = std::move(out);
  }

  std::vector<SvPath> step(std::vector<SvPath> paths, const Location& l, bool flip_record = false) const {
    std::vector<SvPath> out;
    out.reserve(paths.size());
    for (auto& path : paths) {
      if (l.condition >= 0 && path.records[static_cast<std::size_t>(l.condition)] != 1) {
        out.push_back(std::move(path));
        continue;
      }
      switch (l.kind) {
        case LocKind::prepare:
          for (auto& s : path.v) prepare(s, l);
          out.push_back(std::move(path));
          break;
        case LocKind::gate:
          for (auto& s : path.v) s.apply_gate(*l.gate);
          out.push_back(std::move(path));
          break;
        case LocKind::unitary:
          for (auto& s : path.v) s.apply_unitary(l.qubits[0], *l.unitary);
          out.push_back(std::move(path));
          break;
        case LocKind::idle:
          out.push_back(std::move(path));
          break;
        case LocKind::measure_z:
          for (int b = 0; b < 2; ++b) {
            SvPath br = path;
            for (auto& s : br.v) s.project_z(l.qubits[0], b);
            if (br.negligible()) continue;
            const int rec = b ^ static_cast<int>(l.flip != flip_record);
            br.records[static_cast<std::size_t>(l.record)] = rec;
            br.tag += (br.tag.empty() ? "" : " ") + std::string("m") + std::to_string(l.id) + "=" + std::to_string(rec);
            out.push_back(std::move(br));
          }
          break;
        case LocKind::classical_pauli:
          if (l.record < 0 || path.records[static_cast<std::size_t>(l.record)] == 1)
            for (auto& s : path.v) s.apply_pauli(*l.pauli);
          out.push_back(std::move(path));
          break;
        case LocKind::ec_subgadget:
          for (auto& br : recover(path, l)) out.push_back(std::move(br));
          break;
        case LocKind::measure_logical: {
          const auto& code = c_.code(l);
          const PauliString lz = code.stab().logical_z.embed(c_.width, detail::contiguous_offset(l.qubits));
          for (auto& rb : recover(path, l)) {
            for (int b = 0; b < 2; ++b) {
              SvPath br = rb;
              for (auto& s : br.v) s.project_pauli(lz, b);
              if (br.negligible()) continue;
              br.records[static_cast<std::size_t>(l.record)] = b;
              br.tag += " r" + std::to_string(l.record) + "=" + std::to_string(b);
              out.push_back(std::move(br));
            }
          }
          break;
        }
        case LocKind::logical_h: {
          const auto& m = c_.code(l).hadamard().matrix();
          for (auto& s : path.v) s.apply_block_matrix(l.qubits, m);
          out.push_back(std::move(path));
          break;
        }
        case LocKind::fault: {
          const auto p = l.pauli->scatter(c_.width, l.qubits);
          for (auto& s : path.v) s.apply_pauli(p);
          out.push_back(std::move(path));
          break;
        }
      }
    }
    return out;
  }

  std::vector<SvPath> recover(const SvPath& path, const Location& l) const {
    const auto& code = c_.code(l);
    const std::size_t off = detail::contiguous_offset(l.qubits);
    std::vector<DenseState> states{path.v[0], path.v[1]};
    auto branches = code.stabilizer() ? recovery_branches(code.decoder(), std::move(states), off)
                                      : recovery_branches(code.generic_recovery(), std::move(states), off);
    std::vector<SvPath> out;
    for (auto& b : branches) {
      SvPath p;
      p.records = path.records;
      p.v = {std::move(b.states[0]), std::move(b.states[1])};
      p.unrecoverable = path.unrecoverable || !b.recovered;
      p.tag = path.tag;
      if (!b.syndrome.empty() && std::count(b.syndrome.begin(), b.syndrome.end(), true) > 0)
        p.tag += (p.tag.empty() ? "" : " ") + std::string("s") + std::to_string(l.id) + "=" + detail::bits(b.syndrome);
      if (b.subspace > 0) p.tag += (p.tag.empty() ? "" : " ") + std::string("k") + std::to_string(l.id) + "=" + std::to_string(b.subspace);
      if (!b.recovered) p.tag += (p.tag.empty() ? "" : " ") + std::string("u") + std::to_string(l.id);
      out.push_back(std::move(p));
    }
    return out;
  }

  const Circuit& c_;
  std::vector<std::vector<std::pair<std::size_t, cplx>>> prep_;
  std::size_t first_branch_ = 0;
  std::vector<std::optional<std::vector<SvPath>>> prefix_;
  SvPath start_;
};

/// Trailing ideal recovery of the data block, applied to every path.
inline std::vector<SvPath> recover_data(const Circuit& c, std::vector<SvPath> paths) {
  const auto& data = *c.codes.at(0);
  std::vector<SvPath> out;
  for (auto& path : paths) {
    std::vector<DenseState> states{std::move(path.v[0]), std::move(path.v[1])};
    auto branches = data.stabilizer() ? recovery_branches(data.decoder(), std::move(states), 0)
                                      : recovery_branches(data.generic_recovery(), std::move(states), 0);
    for (auto& b : branches) {
      SvPath p;
      p.records = path.records;
      p.v = {std::move(b.states[0]), std::move(b.states[1])};
      p.unrecoverable = path.unrecoverable || !b.recovered;
      p.tag = path.tag;
      if (b.correction) p.ec_weight = b.correction->weight();
      else if (b.subspace >= 0) p.ec_weight = data.generic_recovery().errors[static_cast<std::size_t>(b.subspace)].weight();
      if (b.correction && !b.correction->is_identity())
        p.tag += (p.tag.empty() ? "" : " ") + std::string("ec:") + b.correction->letters();
      if (!b.recovered) p.tag += (p.tag.empty() ? "" : " ") + std::string("ec:unrecoverable");
      out.push_back(std::move(p));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tableau executor

struct TableauPath {
  std::vector<int> records;
  Tableau state;
  double probability = 1;
  std::string tag;
};

/// Hermitian logical Y = i XL ZL of a stabilizer code.
inline PauliString logical_y(const StabilizerCodeSpec& c) {
  PauliString y = c.logical_x * c.logical_z;
  y.set_phase(y.phase_exp() + 1);
  return y;
}

/// Stabilizer generators of a labelled logical state, or nullopt for non-stabilizer labels.
inline std::optional<std::vector<PauliString>> label_stabilizers(const StabilizerCodeSpec& c, PrepLabel label) {
  auto gens = c.generators;
  switch (label) {
    case PrepLabel::zero: gens.push_back(c.logical_z); break;
    case PrepLabel::minus_i: {
      auto y = logical_y(c);
      gens.push_back(y.with_phase(y.phase_exp() + 2));
      break;
    }
    case PrepLabel::pi_8: return std::nullopt;
  }
  return gens;
}

/**
 * Ideal (fault-free) stabilizer run. The data block starts in the state stabilized by
 * the data code's generators plus `data_logical`, a signed logical Pauli on the block.
 */
inline std::vector<TableauPath> run_tableau(const Circuit& c, const PauliString& data_logical) {
  const auto& data = c.codes.at(0)->stab();
  TableauPath start;
  start.records.assign(c.n_records, -1);
  start.state = Tableau(c.width);
  auto gens = data.generators;
  gens.push_back(data_logical);
  std::vector<std::size_t> dq(c.n_data);
  for (std::size_t i = 0; i < c.n_data; ++i) dq[i] = i;
  start.state.prepare_block(dq, gens);
  std::vector<TableauPath> paths{start};

  auto measure_both = [](std::vector<TableauPath> in, const PauliString& obs,
                         const std::function<void(TableauPath&, int)>& after) {
    std::vector<TableauPath> out;
    for (auto& p : in) {
      for (int b = 0; b < 2; ++b) {
        TableauPath br = p;
        try {
          if (br.state.measure(obs, b).kind == OutcomeKind::random) br.probability *= 0.5;
        } catch (const ContradictionError&) {
          continue;
        }
        after(br, b);
        out.push_back(std::move(br));
      }
    }
    return out;
  };

  auto syndrome_correct = [&](std::vector<TableauPath> in, const Location& l) {
    const auto& code = c.code(l);
    const auto& dec = code.decoder();
    std::vector<TableauPath> cur = std::move(in);
    std::vector<std::vector<bool>> cur_syn(cur.size());
    for (const auto& g : dec.code().generators) {
      const auto obs = g.scatter(c.width, l.qubits);
      std::vector<TableauPath> next;
      std::vector<std::vector<bool>> next_syn;
      for (std::size_t i = 0; i < cur.size(); ++i)
        for (int b = 0; b < 2; ++b) {
          TableauPath br = cur[i];
          try {
            if (br.state.measure(obs, b).kind == OutcomeKind::random) br.probability *= 0.5;
          } catch (const ContradictionError&) {
            continue;
          }
          auto s = cur_syn[i];
          s.push_back(b == 1);
          next.push_back(std::move(br));
          next_syn.push_back(std::move(s));
        }
      cur = std::move(next);
      cur_syn = std::move(next_syn);
    }
    for (std::size_t i = 0; i < cur.size(); ++i) {
      auto fix = dec.decode(cur_syn[i]);
      if (!fix) throw UnsupportedError("syndrome without correction in an ideal run");
      cur[i].state.apply_pauli(fix->scatter(c.width, l.qubits));
    }
    return cur;
  };

  for (const auto& l : c.locations) {
    std::vector<TableauPath> skip, act;
    for (auto& p : paths) {
      if (l.condition >= 0 && p.records[static_cast<std::size_t>(l.condition)] != 1) skip.push_back(std::move(p));
      else act.push_back(std::move(p));
    }
    switch (l.kind) {
      case LocKind::prepare: {
        std::optional<std::vector<PauliString>> g;
        if (l.code < 0) {
          if (l.label == PrepLabel::zero) g = std::vector<PauliString>{PauliString::from_text("Z")};
          if (l.label == PrepLabel::minus_i) g = std::vector<PauliString>{PauliString::from_text("-Y")};
        } else {
          g = label_stabilizers(c.code(l).stab(), l.label);
        }
        if (!g) throw UnsupportedError("the tableau backend cannot prepare a pi/8 state; use the statevector backend");
        for (auto& p : act) p.state.prepare_block(l.qubits, *g);
        break;
      }
      case LocKind::gate:
        for (auto& p : act) p.state.apply(*l.gate);
        break;
      case LocKind::unitary:
        throw UnsupportedError("non-Clifford gate in the tableau backend; use the statevector backend");
      case LocKind::idle:
        break;
      case LocKind::measure_z:
        act = measure_both(std::move(act), PauliString::single(c.width, l.qubits[0], 'Z'), [&](TableauPath& p, int b) {
          const int rec = b ^ static_cast<int>(l.flip);
          p.records[static_cast<std::size_t>(l.record)] = rec;
          p.tag += (p.tag.empty() ? "" : " ") + std::string("m") + std::to_string(l.id) + "=" + std::to_string(rec);
        });
        break;
      case LocKind::classical_pauli:
        for (auto& p : act)
          if (l.record < 0 || p.records[static_cast<std::size_t>(l.record)] == 1) p.state.apply_pauli(*l.pauli);
        break;
      case LocKind::ec_subgadget:
        act = syndrome_correct(std::move(act), l);
        break;
      case LocKind::measure_logical: {
        act = syndrome_correct(std::move(act), l);
        const auto lz = c.code(l).stab().logical_z.scatter(c.width, l.qubits);
        act = measure_both(std::move(act), lz, [&](TableauPath& p, int b) {
          p.records[static_cast<std::size_t>(l.record)] = b;
          p.tag += (p.tag.empty() ? "" : " ") + std::string("r") + std::to_string(l.record) + "=" + std::to_string(b);
        });
        break;
      }
      case LocKind::logical_h: {
        const auto& h = c.code(l).hadamard();
        for (auto& p : act)
          p.state.transform([&](const PauliString& row) {
            auto local = row.gather(l.qubits);
            auto img = h.conjugate_local(local);
            PauliString out = row;
            out.assign(l.qubits, img);
            out.set_phase(row.phase_exp() + img.phase_exp());
            return out;
          });
        break;
      }
      case LocKind::fault:
        for (auto& p : act) p.state.apply_pauli(l.pauli->scatter(c.width, l.qubits));
        break;
    }
    paths = std::move(act);
    for (auto& p : skip) paths.push_back(std::move(p));
  }
  return paths;
}

}  // namespace ftgadget
