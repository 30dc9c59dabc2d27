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
/// Pauli-frame propagation of faults through Clifford circuits with idealized sub-gadgets.

#include <optional>
#include <string>
#include <vector>

#include "ftgadget/circuit.hpp"
#include "ftgadget/error.hpp"
#include "ftgadget/faults.hpp"
#include "ftgadget/pauli.hpp"

namespace ftgadget {

struct PauliFrame {
  PauliString frame;                          // accumulated error relative to the ideal run
  std::vector<bool> record_flips;             // indexed by record id
  std::vector<std::size_t> classical_flips;   // ids of measurement locations whose record is inverted
  PauliString correction_flips;               // product of classical Paulis toggled by flipped records
  bool unrecoverable = false;                 // a sub-gadget saw a syndrome without a correction

  bool flipped(int record) const {
    return record >= 0 && static_cast<std::size_t>(record) < record_flips.size() &&
           record_flips[static_cast<std::size_t>(record)];
  }
};

namespace detail {

inline void left_multiply(PauliString& frame, const PauliString& local, const std::vector<std::size_t>& qubits) {
  frame = local.scatter(frame.n_qubits(), qubits) * frame;
}

}  // namespace detail

/**
 * Pushes the given faults through the circuit. `records` gives the ideal run's
 * outcomes and is needed only when a conditioned location meets a nontrivial frame.
 */
inline PauliFrame propagate_frame(const Circuit& c, const std::vector<FaultEvent>& faults,
                                  const std::optional<std::vector<int>>& records = std::nullopt) {
  PauliFrame pf;
  pf.frame = PauliString(c.width);
  pf.correction_flips = PauliString(c.width);
  pf.record_flips.assign(c.n_records, false);
  std::vector<std::vector<const FaultEvent*>> at(c.locations.size());
  for (const auto& f : faults) {
    const auto& l = c.at(f.location_id);
    if (!f.measurement_flip && f.pauli.n_qubits() != l.qubits.size())
      throw DimensionError("fault Pauli does not match location " + std::to_string(l.id));
    at[f.location_id].push_back(&f);
  }
  auto inject_at = [&](const Location& l, Attach a) {
    for (const auto* f : at[l.id])
      if (!f->measurement_flip && f->attach == a) detail::left_multiply(pf.frame, f->pauli, l.qubits);
  };
  auto touches = [&](const Location& l) {
    for (auto q : l.qubits)
      if (pf.frame.x(q) || pf.frame.z(q)) return true;
    return false;
  };

  for (const auto& l : c.locations) {
    inject_at(l, Attach::before);
    bool run = true;
    if (l.condition >= 0) {
      if (pf.flipped(l.condition))
        throw UnsupportedError("fault flips record " + std::to_string(l.condition) +
                               " that gates a conditional block; use the statevector backend");
      if (records) {
        run = (*records)[static_cast<std::size_t>(l.condition)] == 1;
      } else if (touches(l) && l.kind != LocKind::classical_pauli && l.kind != LocKind::idle) {
        throw UnsupportedError("frame reaches conditional location " + std::to_string(l.id) +
                               " without branch records");
      } else {
        run = false;
      }
    }
    if (run) {
      switch (l.kind) {
        case LocKind::prepare:
          pf.frame.clear_qubits(l.qubits);
          break;
        case LocKind::gate:
          pf.frame = conjugate(*l.gate, pf.frame);
          break;
        case LocKind::unitary:
          throw UnsupportedError("non-Clifford gate '" + l.unitary->label + "' at location " + std::to_string(l.id) +
                                 "; use the statevector backend");
        case LocKind::idle:
          break;
        case LocKind::measure_z: {
          bool flip = pf.frame.x(l.qubits[0]) != l.flip;
          for (const auto* f : at[l.id])
            if (f->measurement_flip) flip = !flip;
          pf.record_flips[static_cast<std::size_t>(l.record)] = flip;
          if (flip) pf.classical_flips.push_back(l.id);
          break;
        }
        case LocKind::classical_pauli:
          if (pf.flipped(l.record)) {
            pf.frame = *l.pauli * pf.frame;
            pf.correction_flips = *l.pauli * pf.correction_flips;
          }
          break;
        case LocKind::ec_subgadget: {
          const auto& code = c.code(l);
          auto local = pf.frame.gather(l.qubits);
          auto fix = code.decoder().decode(code.decoder().syndrome(local));
          if (!fix) {
            pf.unrecoverable = true;
          } else {
            detail::left_multiply(pf.frame, *fix, l.qubits);
          }
          break;
        }
        case LocKind::measure_logical: {
          const auto& code = c.code(l);
          auto local = pf.frame.gather(l.qubits);
          auto fix = code.decoder().decode(code.decoder().syndrome(local));
          if (!fix) pf.unrecoverable = true;
          else local = *fix * local;
          const bool flip = !local.commutes(code.stab().logical_z);
          pf.record_flips[static_cast<std::size_t>(l.record)] = flip;
          if (flip) pf.classical_flips.push_back(l.id);
          pf.frame.clear_qubits(l.qubits);
          break;
        }
        case LocKind::logical_h: {
          const auto& code = c.code(l);
          auto local = pf.frame.gather(l.qubits);
          auto img = code.hadamard().conjugate_local(local);
          pf.frame.assign(l.qubits, img);
          pf.frame.set_phase(pf.frame.phase_exp() + img.phase_exp());
          break;
        }
        case LocKind::fault:
          detail::left_multiply(pf.frame, *l.pauli, l.qubits);
          break;
      }
    }
    inject_at(l, Attach::after);
  }
  return pf;
}

inline PauliFrame propagate_frame(const Circuit& c, const FaultEvent& f) {
  return propagate_frame(c, std::vector<FaultEvent>{f});
}

}  // namespace ftgadget
