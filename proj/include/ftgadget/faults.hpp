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

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ftgadget/circuit.hpp"
#include "ftgadget/error.hpp"
#include "ftgadget/pauli.hpp"

namespace ftgadget {

enum class NoiseKind { dephasing, depolarizing };

inline const char* noise_name(NoiseKind k) { return k == NoiseKind::dephasing ? "dephasing" : "depolarizing"; }

inline NoiseKind noise_from(const std::string& s) {
  if (s == "dephasing") return NoiseKind::dephasing;
  if (s == "depolarizing") return NoiseKind::depolarizing;
  throw ParseError("unknown fault model '" + s + "'");
}

struct FaultModel {
  NoiseKind kind = NoiseKind::depolarizing;
  bool includes_measurement_flips = true;

  /// Non-identity Paulis a fault on `arity` qubits may apply, in text order.
  std::vector<PauliString> set(std::size_t arity) const {
    std::vector<PauliString> out;
    const std::size_t total = std::size_t{1} << (2 * arity);
    for (std::size_t v = 1; v < total; ++v) {
      PauliString p(arity);
      bool ok = true;
      for (std::size_t q = 0; q < arity; ++q) {
        const bool x = (v >> (2 * q)) & 1u, z = (v >> (2 * q + 1)) & 1u;
        if (kind == NoiseKind::dephasing && x) ok = false;
        p.set(q, x, z);
      }
      if (ok) out.push_back(p);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.text_less(b); });
    return out;
  }
};

enum class Attach { before, after };

/// One single-location fault. `pauli` acts on the location's qubits in their listed order.
struct FaultEvent {
  std::size_t location_id = 0;
  Attach attach = Attach::after;
  PauliString pauli;
  bool measurement_flip = false;

  std::string to_text() const {
    std::string s = std::to_string(location_id) + ",";
    if (measurement_flip) return s + "FLIP";
    return s + pauli.letters() + (attach == Attach::before ? ",before" : ",after");
  }
  bool operator==(const FaultEvent& o) const {
    return location_id == o.location_id && attach == o.attach && measurement_flip == o.measurement_flip &&
           pauli == o.pauli;
  }
};

/// Parses "id,PAULI[,before|after]" or "id,FLIP". Attachment defaults to the location's natural point.
inline FaultEvent parse_fault(const std::string& text, const Circuit& c) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() < 2 || parts.size() > 3) throw ParseError("fault must be id,PAULI[,before|after] or id,FLIP");
  FaultEvent f;
  try {
    f.location_id = std::stoul(parts[0]);
  } catch (const std::exception&) {
    throw ParseError("bad location id '" + parts[0] + "'");
  }
  const auto& loc = c.at(f.location_id);
  if (parts[1] == "FLIP") {
    if (loc.kind != LocKind::measure_z) throw ValidationError("only measure locations take a record flip");
    f.measurement_flip = true;
    f.attach = Attach::after;
    f.pauli = PauliString(loc.qubits.size());
    return f;
  }
  f.pauli = PauliString::from_text(parts[1]);
  f.pauli.set_phase(0);
  if (f.pauli.n_qubits() != loc.qubits.size())
    throw DimensionError("fault Pauli has " + std::to_string(f.pauli.n_qubits()) + " letters; location " +
                         std::to_string(f.location_id) + " has " + std::to_string(loc.qubits.size()) + " qubits");
  const bool natural_before = loc.kind == LocKind::measure_z || loc.kind == LocKind::measure_logical;
  f.attach = natural_before ? Attach::before : Attach::after;
  if (parts.size() == 3) {
    if (parts[2] == "before") f.attach = Attach::before;
    else if (parts[2] == "after") f.attach = Attach::after;
    else throw ParseError("attachment must be before or after");
  }
  return f;
}

namespace detail {

struct AttachPlan {
  bool before = false, after = false;
  bool per_qubit = false;  // block-style: single-qubit faults on each qubit
};

inline AttachPlan attach_plan(const Location& l) {
  switch (l.kind) {
    case LocKind::prepare: return {false, true, l.qubits.size() > 1};
    case LocKind::gate:
    case LocKind::unitary:
    case LocKind::idle: return {false, true, false};
    case LocKind::measure_z: return {true, false, false};
    case LocKind::classical_pauli: return {false, true, true};
    case LocKind::ec_subgadget:
    case LocKind::logical_h: return {true, true, true};
    case LocKind::measure_logical: return {true, false, true};
    case LocKind::fault: return {};
  }
  return {};
}

}  // namespace detail

/// Events for one location, ordered by (attachment, Pauli text), flip last.
inline std::vector<FaultEvent> location_faults(const Location& l, const FaultModel& m) {
  std::vector<FaultEvent> out;
  const auto plan = detail::attach_plan(l);
  const std::size_t k = l.qubits.size();
  if (k == 0) return out;
  for (Attach a : {Attach::before, Attach::after}) {
    if ((a == Attach::before && !plan.before) || (a == Attach::after && !plan.after)) continue;
    std::vector<PauliString> ps;
    if (plan.per_qubit) {
      for (std::size_t j = 0; j < k; ++j)
        for (const auto& p1 : m.set(1)) ps.push_back(p1.scatter(k, {j}));
      std::sort(ps.begin(), ps.end(), [](const auto& x, const auto& y) { return x.text_less(y); });
    } else {
      ps = m.set(k);
    }
    for (auto& p : ps) out.push_back({l.id, a, std::move(p), false});
  }
  if (l.kind == LocKind::measure_z && m.includes_measurement_flips)
    out.push_back({l.id, Attach::after, PauliString(k), true});
  return out;
}

/// Every single fault of the model, ordered by location id.
inline std::vector<FaultEvent> enumerate_single_faults(const Circuit& c, const FaultModel& m) {
  std::vector<FaultEvent> out;
  for (const auto& l : c.locations) {
    auto f = location_faults(l, m);
    out.insert(out.end(), std::make_move_iterator(f.begin()), std::make_move_iterator(f.end()));
  }
  return out;
}

/// Returns a copy with the fault materialized as an extra `fault` location (ids renumbered),
/// or with the measurement's record flip set.
inline Circuit inject(const Circuit& c, const FaultEvent& f) {
  const auto& loc = c.at(f.location_id);
  Circuit out = c;
  if (f.measurement_flip) {
    if (loc.kind != LocKind::measure_z) throw ValidationError("record flip on a non-measurement location");
    out.locations[f.location_id].flip = true;
    return out;
  }
  if (f.pauli.n_qubits() != loc.qubits.size()) throw DimensionError("fault Pauli does not match location arity");
  Location fl;
  fl.kind = LocKind::fault;
  fl.qubits = loc.qubits;
  fl.pauli = f.pauli;
  fl.timestep = loc.timestep;
  const std::size_t pos = f.attach == Attach::before ? f.location_id : f.location_id + 1;
  out.locations.insert(out.locations.begin() + static_cast<long>(pos), std::move(fl));
  for (std::size_t i = 0; i < out.locations.size(); ++i) out.locations[i].id = i;
  return out;
}

/// Seeded multi-fault sample: each location faults independently with probability p, uniformly over its events.
inline std::vector<FaultEvent> sample_faults(const Circuit& c, const FaultModel& m, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<FaultEvent> out;
  for (const auto& l : c.locations) {
    if (u(rng) >= p) continue;
    auto evs = location_faults(l, m);
    if (evs.empty()) continue;
    out.push_back(evs[std::uniform_int_distribution<std::size_t>(0, evs.size() - 1)(rng)]);
  }
  return out;
}

}  // namespace ftgadget
