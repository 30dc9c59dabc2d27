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

// Code files (JSON) and the line-oriented circuit text format.

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "json.hpp"

#include "ftgadget/circuit.hpp"
#include "ftgadget/codes.hpp"
#include "ftgadget/error.hpp"

namespace ftgadget {

using json = nlohmann::json;

inline constexpr const char* kCodeSchema = "ftgadget.code/1";
inline constexpr const char* kCircuitHeader = "ftgadget-circuit 1";

namespace detail {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

inline std::vector<cplx> amplitudes_from(const json& triples, std::size_t n) {
  if (n > kMaxExpandQubits) throw CapacityError("generic codes are limited to " + std::to_string(kMaxExpandQubits) + " qubits");
  std::vector<cplx> v(std::size_t{1} << n);
  if (!triples.is_array()) throw ParseError("codeword must be a list of [index, re, im] triples");
  for (const auto& t : triples) {
    if (!t.is_array() || t.size() != 3) throw ParseError("codeword entries must be [index, re, im]");
    const auto idx = t[0].get<std::size_t>();
    if (idx >= v.size()) throw DimensionError("basis index " + std::to_string(idx) + " out of range");
    v[idx] = {t[1].get<double>(), t[2].get<double>()};
  }
  return v;
}

inline json triples_from(const std::vector<cplx>& v) {
  json out = json::array();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > 1e-15) out.push_back({i, v[i].real(), v[i].imag()});
  return out;
}

inline PauliString pauli_field(const std::string& text, std::size_t n, const std::string& what) {
  auto p = PauliString::from_text(text);
  if (p.n_qubits() != n)
    throw DimensionError(what + " has " + std::to_string(p.n_qubits()) + " qubits, expected " + std::to_string(n));
  return p;
}

}  // namespace detail

inline json code_to_json(const StabilizerCodeSpec& c) {
  json j{{"schema", kCodeSchema}, {"kind", "stabilizer"}, {"name", c.name}, {"n", c.n}, {"distance", c.distance}};
  j["generators"] = json::array();
  for (const auto& g : c.generators) j["generators"].push_back(g.to_text());
  j["logical_x"] = c.logical_x.to_text();
  j["logical_z"] = c.logical_z.to_text();
  j["transversal_z"] = c.transversal_z;
  return j;
}

inline json code_to_json(const GenericCodeSpec& c) {
  return json{{"schema", kCodeSchema},
              {"kind", "generic"},
              {"name", c.name},
              {"n", c.n},
              {"distance", c.distance},
              {"codeword_zero", detail::triples_from(c.codeword_zero)},
              {"codeword_one", detail::triples_from(c.codeword_one)},
              {"transversal_z", c.transversal_z}};
}

inline json code_to_json(const CodeSpec& c) {
  return std::visit([](const auto& s) { return code_to_json(s); }, c);
}

inline json code_to_json(const ConcatenatedCodeSpec& c) {
  return json{{"schema", kCodeSchema},
              {"kind", "concatenated"},
              {"outer", code_to_json(c.outer)},
              {"inner_length", c.inner_length}};
}

inline StabilizerCodeSpec stabilizer_from_json(const json& j) {
  StabilizerCodeSpec c;
  c.name = detail::field<std::string>(j, "name");
  c.n = detail::field<std::size_t>(j, "n");
  c.distance = detail::field<std::size_t>(j, "distance");
  c.transversal_z = j.value("transversal_z", false);
  for (const auto& g : detail::field<std::vector<std::string>>(j, "generators"))
    c.generators.push_back(detail::pauli_field(g, c.n, "generator " + g));
  c.logical_x = detail::pauli_field(detail::field<std::string>(j, "logical_x"), c.n, "logical_x");
  c.logical_z = detail::pauli_field(detail::field<std::string>(j, "logical_z"), c.n, "logical_z");
  return c;
}

/// Parses a code document; concatenated documents are returned flattened.
inline CodeSpec code_from_json(const json& j) {
  const auto kind = detail::field<std::string>(j, "kind");
  if (kind == "stabilizer") return stabilizer_from_json(j);
  if (kind == "generic") {
    GenericCodeSpec c;
    c.name = detail::field<std::string>(j, "name");
    c.n = detail::field<std::size_t>(j, "n");
    c.distance = detail::field<std::size_t>(j, "distance");
    c.transversal_z = j.value("transversal_z", false);
    c.codeword_zero = detail::amplitudes_from(j.at("codeword_zero"), c.n);
    c.codeword_one = detail::amplitudes_from(j.at("codeword_one"), c.n);
    return c;
  }
  if (kind == "concatenated")
    return concatenate(stabilizer_from_json(j.at("outer")), detail::field<std::size_t>(j, "inner_length")).flatten();
  throw ParseError("unknown code kind '" + kind + "'");
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline CodeSpec load_code(const std::string& path) { return code_from_json(read_json_file(path)); }

/// Built-in name ("steane", "five_qubit", "repN") or a path to a code file.
inline CodeSpec resolve_code(const std::string& name_or_path) {
  if (auto b = builtin_code(name_or_path)) return *b;
  return load_code(name_or_path);
}

// ---------------------------------------------------------------------------
// Circuit text

namespace detail {

inline std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

inline std::vector<std::size_t> split_indices(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoul(item));
    } catch (const std::exception&) {
      throw ParseError("bad index '" + item + "'");
    }
  }
  return out;
}

inline json context_to_json(const CodeContext& c) {
  if (c.concatenated()) return code_to_json(*c.concatenated());
  return code_to_json(c.spec());
}

inline std::shared_ptr<const CodeContext> context_from_json(const json& j) {
  if (j.value("kind", "") == "concatenated")
    return std::make_shared<CodeContext>(
        concatenate(stabilizer_from_json(j.at("outer")), j.at("inner_length").get<std::size_t>()));
  return std::make_shared<CodeContext>(code_from_json(j));
}

}  // namespace detail

inline std::string location_to_text(const Location& l) {
  std::ostringstream os;
  os << l.id << ' ' << l.timestep << ' ' << loc_kind_name(l.kind);
  switch (l.kind) {
    case LocKind::gate:
      os << " name=" << gate_name(l.gate->kind) << " q=" << detail::join(l.qubits);
      break;
    case LocKind::unitary: {
      os << " name=" << l.unitary->label << " q=" << l.qubits[0] << " m=";
      os << std::setprecision(17);
      for (std::size_t i = 0; i < 4; ++i)
        os << (i ? "," : "") << l.unitary->m[i].real() << ',' << l.unitary->m[i].imag();
      break;
    }
    case LocKind::prepare:
      os << " q=" << detail::join(l.qubits) << " label=" << prep_label_name(l.label) << " code=" << l.code;
      break;
    case LocKind::idle:
      os << " q=" << l.qubits[0];
      break;
    case LocKind::measure_z:
      os << " q=" << l.qubits[0] << " rec=" << l.record;
      if (l.flip) os << " flip=1";
      break;
    case LocKind::classical_pauli:
      os << " rec=" << l.record << " pauli=" << l.pauli->to_text();
      break;
    case LocKind::ec_subgadget:
    case LocKind::logical_h:
      os << " q=" << detail::join(l.qubits) << " code=" << l.code;
      break;
    case LocKind::measure_logical:
      os << " q=" << detail::join(l.qubits) << " code=" << l.code << " rec=" << l.record;
      break;
    case LocKind::fault:
      os << " q=" << detail::join(l.qubits) << " pauli=" << l.pauli->to_text();
      break;
  }
  if (l.condition >= 0) os << " if=" << l.condition;
  return os.str();
}

inline std::string circuit_to_text(const Circuit& c) {
  std::ostringstream os;
  os << kCircuitHeader << '\n';
  os << "width " << c.width << '\n' << "data " << c.n_data << '\n' << "records " << c.n_records << '\n';
  for (std::size_t i = 0; i < c.codes.size(); ++i)
    os << "code " << i << ' ' << detail::context_to_json(*c.codes[i]).dump() << '\n';
  for (const auto& l : c.locations) os << location_to_text(l) << '\n';
  return os.str();
}

inline LocKind loc_kind_from(const std::string& s) {
  for (auto k : {LocKind::prepare, LocKind::gate, LocKind::unitary, LocKind::idle, LocKind::measure_z,
                 LocKind::classical_pauli, LocKind::ec_subgadget, LocKind::measure_logical, LocKind::logical_h,
                 LocKind::fault})
    if (s == loc_kind_name(k)) return k;
  throw ParseError("unknown location kind '" + s + "'");
}

inline Circuit circuit_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCircuitHeader) throw ParseError("missing circuit header");
  Circuit c;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    try {
      std::istringstream ls(line);
      std::string head;
      ls >> head;
      if (head == "width") {
        ls >> c.width;
      } else if (head == "data") {
        ls >> c.n_data;
      } else if (head == "records") {
        ls >> c.n_records;
      } else if (head == "code") {
        std::size_t idx;
        ls >> idx;
        std::string rest;
        std::getline(ls, rest);
        if (idx != c.codes.size()) throw ParseError("code entries must be numbered in order");
        c.codes.push_back(detail::context_from_json(json::parse(rest)));
      } else {
        Location l;
        l.id = std::stoul(head);
        std::string kind;
        ls >> l.timestep >> kind;
        l.kind = loc_kind_from(kind);
        std::map<std::string, std::string> kv;
        std::string tok;
        while (ls >> tok) {
          const auto eq = tok.find('=');
          if (eq == std::string::npos) throw ParseError("expected key=value, got '" + tok + "'");
          kv[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
        auto get = [&](const char* k) -> const std::string& {
          auto it = kv.find(k);
          if (it == kv.end()) throw ParseError(std::string("missing '") + k + "'");
          return it->second;
        };
        if (kv.count("q")) l.qubits = detail::split_indices(kv["q"]);
        if (kv.count("code")) l.code = std::stoi(kv["code"]);
        if (kv.count("rec")) l.record = std::stoi(kv["rec"]);
        if (kv.count("if")) l.condition = std::stoi(kv["if"]);
        if (kv.count("flip")) l.flip = kv["flip"] == "1";
        switch (l.kind) {
          case LocKind::gate: {
            const auto g = gate_from_name(get("name"));
            if (is_two_qubit(g)) {
              if (l.qubits.size() != 2) throw ParseError("two-qubit gate needs two qubits");
              l.gate = CliffordGate(g, l.qubits[0], l.qubits[1]);
            } else {
              if (l.qubits.size() != 1) throw ParseError("one-qubit gate needs one qubit");
              l.gate = CliffordGate(g, l.qubits[0]);
            }
            break;
          }
          case LocKind::unitary: {
            std::vector<double> v;
            std::stringstream ss(get("m"));
            std::string item;
            while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
            if (v.size() != 8) throw ParseError("unitary needs 8 numbers");
            l.unitary = OneQubitUnitary({cplx{v[0], v[1]}, cplx{v[2], v[3]}, cplx{v[4], v[5]}, cplx{v[6], v[7]}},
                                        get("name"));
            break;
          }
          case LocKind::prepare:
            l.label = prep_label_from(get("label"));
            break;
          case LocKind::classical_pauli:
            l.pauli = PauliString::from_text(get("pauli"));
            if (l.pauli->n_qubits() != c.width) throw DimensionError("classical Pauli width mismatch");
            l.qubits = l.pauli->support();
            break;
          case LocKind::fault:
            l.pauli = PauliString::from_text(get("pauli"));
            if (l.pauli->n_qubits() != l.qubits.size()) throw DimensionError("fault Pauli width mismatch");
            break;
          default:
            break;
        }
        if (l.code >= static_cast<int>(c.codes.size())) throw IndexError("unknown code index");
        c.locations.push_back(std::move(l));
      }
    } catch (const std::exception& e) {
      throw ParseError("circuit line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  c.check();
  return c;
}

}  // namespace ftgadget
