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
/// Run configurations and the command implementations behind the `ftgadget` tool.
///
/// Settings resolve in the order flag > environment > config file > default.
/// Exit codes: 0 success or pass, 2 property failure, 1 error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "ftgadget/verifier.hpp"

namespace ftgadget {

inline constexpr const char* kRunSchema = "ftgadget.run/1";

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitFailed = 2 };

/// Which faults a verification enumerates.
enum class FaultFilter { all, ancilla, data };

inline const char* fault_filter_name(FaultFilter f) {
  switch (f) {
    case FaultFilter::all: return "all";
    case FaultFilter::ancilla: return "ancilla";
    case FaultFilter::data: return "data";
  }
  return "?";
}

inline FaultFilter fault_filter_from(const std::string& s) {
  if (s == "all") return FaultFilter::all;
  if (s == "ancilla") return FaultFilter::ancilla;
  if (s == "data") return FaultFilter::data;
  throw ParseError("unknown fault filter '" + s + "'");
}

struct RunConfig {
  GadgetConfig gadget;
  FaultModel model;
  FtCriterion criterion;
  Backend backend = Backend::automatic;
  std::uint64_t seed = 2024;
  std::size_t workers = 0;
  std::size_t max_counterexamples = 10;
  FaultFilter fault_filter = FaultFilter::all;
  std::optional<std::string> report_path;

  json to_json() const {
    json j;
    j["schema"] = kRunSchema;
    j["gadget"] = gadget_config_to_json(gadget);
    j["model"] = fault_model_to_json(model);
    j["criterion"] = {{"max_residual_weight", criterion.max_residual_weight ? json(*criterion.max_residual_weight)
                                                                            : json(nullptr)},
                      {"require_logical_exact", criterion.require_logical_exact}};
    j["backend"] = backend_name(backend);
    j["seed"] = seed;
    j["max_counterexamples"] = max_counterexamples;
    j["fault_filter"] = fault_filter_name(fault_filter);
    j["report"] = report_path ? json(*report_path) : json(nullptr);
    return j;
  }
};

inline RunConfig run_config_from_json(const json& j, const std::filesystem::path& base_dir = ".") {
  if (j.contains("schema") && j.at("schema") != kRunSchema)
    throw ParseError("unsupported run schema " + j.at("schema").dump());
  RunConfig c;
  c.gadget = gadget_config_from_json(j.at("gadget"), base_dir);
  if (j.contains("model")) c.model = fault_model_from_json(j.at("model"));
  if (j.contains("criterion")) {
    const auto& cr = j.at("criterion");
    if (cr.contains("max_residual_weight") && !cr.at("max_residual_weight").is_null())
      c.criterion.max_residual_weight = cr.at("max_residual_weight").get<std::size_t>();
    c.criterion.require_logical_exact = cr.value("require_logical_exact", true);
  }
  c.backend = backend_from(j.value("backend", "auto"));
  c.seed = j.value("seed", std::uint64_t{2024});
  c.workers = j.value("workers", std::size_t{0});
  c.max_counterexamples = j.value("max_counterexamples", std::size_t{10});
  c.fault_filter = fault_filter_from(j.value("fault_filter", "all"));
  if (j.contains("report") && !j.at("report").is_null()) {
    const std::filesystem::path p(j.at("report").get<std::string>());
    c.report_path = (p.is_absolute() ? p : base_dir / p).string();
  }
  return c;
}

inline RunConfig load_run_config(const std::string& path) {
  return run_config_from_json(read_json_file(path), std::filesystem::path(path).parent_path());
}

/// Command-line overrides; unset fields fall through to the environment, then the config.
struct Overrides {
  std::optional<std::string> backend;
  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_counterexamples;
  std::optional<std::string> fault_filter;
  std::optional<std::string> out;
};

using EnvLookup = std::function<std::optional<std::string>(const char*)>;

inline std::optional<std::string> process_env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

inline void apply_overrides(RunConfig& c, const Overrides& o, const EnvLookup& env = process_env) {
  auto number = [](const std::string& s, const char* what) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ParseError(std::string("bad ") + what + " '" + s + "'");
    }
  };
  if (o.backend) c.backend = backend_from(*o.backend);
  else if (auto e = env("FTGADGET_BACKEND")) c.backend = backend_from(*e);
  if (o.workers) c.workers = *o.workers;
  else if (auto e = env("FTGADGET_WORKERS")) c.workers = number(*e, "FTGADGET_WORKERS");
  if (o.seed) c.seed = *o.seed;
  else if (auto e = env("FTGADGET_SEED")) c.seed = number(*e, "FTGADGET_SEED");
  if (o.max_counterexamples) c.max_counterexamples = *o.max_counterexamples;
  else if (auto e = env("FTGADGET_MAX_COUNTEREXAMPLES")) c.max_counterexamples = number(*e, "FTGADGET_MAX_COUNTEREXAMPLES");
  if (o.fault_filter) c.fault_filter = fault_filter_from(*o.fault_filter);
  if (o.out) c.report_path = *o.out;
}

inline std::vector<FaultEvent> filtered_faults(const Gadget& g, const FaultModel& m, FaultFilter filter) {
  auto all = enumerate_single_faults(g.circuit, m);
  if (filter == FaultFilter::all) return all;
  std::vector<FaultEvent> out;
  for (auto& f : all) {
    bool data = false, anc = false;
    for (auto q : g.circuit.at(f.location_id).qubits) (q < g.n_data() ? data : anc) = true;
    if (filter == FaultFilter::ancilla ? (anc && !data) : (data && !anc)) out.push_back(std::move(f));
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_codes(const std::string& action, const std::string& file, std::ostream& out) {
  const auto code = resolve_code(file);
  if (action == "validate") {
    const auto r = validate(code);
    out << code_name(code) << ": " << (r.valid ? "valid" : "invalid") << "\n";
    for (const auto& v : r.violations) out << "  violation: " << v << "\n";
    for (const auto& w : r.warnings) out << "  warning: " << w << "\n";
    return r.valid ? kExitOk : kExitFailed;
  }
  if (action == "parity") {
    const auto r = check_parity_property(code);
    out << code_name(code) << ": parity property " << (r.holds ? "holds" : "fails") << " (" << r.method << ")\n";
    out << "  |0L> support size " << r.zero_support_size << ", |1L> support size " << r.one_support_size << "\n";
    for (const auto& w : r.witnesses) out << "  witness " << w << "\n";
    return r.holds ? kExitOk : kExitFailed;
  }
  if (action == "min-logical") {
    const auto* s = std::get_if<StabilizerCodeSpec>(&code);
    if (!s) throw UnsupportedError("min-logical needs a stabilizer code");
    const auto r = restricted_parity_support(*s, std::min(s->n, kMaxZLogicalSearch));
    if (!r) {
      out << code_name(code) << ": no Z-type logical operator\n";
      return kExitFailed;
    }
    out << code_name(code) << ": weight " << r->support.size() << " " << r->op.letters() << " support {"
        << detail::join(r->support) << "}\n";
    return kExitOk;
  }
  throw ParseError("unknown codes action '" + action + "'");
}

inline void describe_gadget(const Gadget& g, std::ostream& out) {
  const auto& c = g.circuit;
  out << target_name(g.config.kind) << " gadget, " << architecture_name(g.config.architecture) << ", data "
      << code_name(g.config.data_code);
  if (g.config.ancilla_outer) out << ", ancilla " << g.config.ancilla_outer->name;
  out << "\n  width " << c.width << ", " << c.locations.size() << " locations, " << c.n_timesteps() << " timesteps\n";
  out << "  controlled-" << coupling_letter(g.config.kind) << " gates: " << g.coupling_count() << "\n";
  out << "  support {" << detail::join(g.support) << "}\n";
  for (auto k : {LocKind::prepare, LocKind::gate, LocKind::unitary, LocKind::idle, LocKind::measure_z,
                 LocKind::classical_pauli, LocKind::ec_subgadget, LocKind::measure_logical, LocKind::logical_h})
    if (const auto n = c.count(k)) out << "  " << loc_kind_name(k) << ": " << n << "\n";
  for (int b = 0; b < 2; ++b) {
    const auto& br = g.rule.branch[static_cast<std::size_t>(b)];
    out << "  outcome " << b << ": " << (br.chain_s ? std::string("chained S gadget") : std::string(1, br.logical))
        << "\n";
  }
  for (const auto& n : report_notes(g, Backend::statevector)) out << "  note: " << n << "\n";
}

inline int cmd_gadget(const std::string& action, RunConfig cfg, std::ostream& out) {
  const auto g = build(cfg.gadget);
  if (action == "build") {
    describe_gadget(g, out);
    if (cfg.report_path) write_file(*cfg.report_path, circuit_to_text(g.circuit));
    return kExitOk;
  }
  if (action == "run") {
    const auto r = run_ideal(g, cfg.backend, cfg.seed);
    out << r.to_text();
    if (cfg.report_path) {
      json j = json::array();
      for (const auto& row : r.rows)
        j.push_back({{"input", row.input}, {"branch", row.branch}, {"probability", row.probability},
                     {"fidelity", row.fidelity}, {"discarded", row.discarded}});
      write_file(*cfg.report_path, json{{"backend", backend_name(r.backend)}, {"rows", j}}.dump(2) + "\n");
    }
    return r.pass() ? kExitOk : kExitFailed;
  }
  if (action == "verify") {
    VerifyOptions o;
    o.backend = cfg.backend;
    o.workers = cfg.workers;
    o.seed = cfg.seed;
    o.max_counterexamples = cfg.max_counterexamples;
    o.criterion = cfg.criterion;
    std::optional<std::vector<FaultEvent>> subset;
    if (cfg.fault_filter != FaultFilter::all) subset = filtered_faults(g, cfg.model, cfg.fault_filter);
    auto r = verify_ft(g, cfg.model, o, subset);
    r.config = cfg.to_json();
    r.config.erase("report");
    out << r.to_text();
    if (cfg.report_path) write_file(*cfg.report_path, r.to_json().dump(2) + "\n");
    return r.pass() ? kExitOk : kExitFailed;
  }
  if (action == "cz") {
    const auto r = verify_logical_cz(g, cfg.seed);
    out << "logical CZ min fidelity " << detail::fmt(r.min_fidelity) << "\n";
    if (r.round1_min_fidelity) out << "after round 1 min fidelity " << detail::fmt(*r.round1_min_fidelity) << "\n";
    out << (r.pass() ? "pass" : "fail") << "\n";
    return r.pass() ? kExitOk : kExitFailed;
  }
  if (action == "cross-check") {
    const auto r = cross_check(g, filtered_faults(g, cfg.model, cfg.fault_filter), cfg.seed, cfg.workers);
    out << r.agreed << "/" << r.compared << " scenarios agree, max eigenstate fidelity gap "
        << detail::fmt(r.max_eigen_gap) << "\n";
    for (const auto& d : r.disagreements) out << "  " << d << "\n";
    return r.ok() ? kExitOk : kExitFailed;
  }
  throw ParseError("unknown gadget action '" + action + "'");
}

inline int cmd_propagate(const std::string& circuit_file, const std::vector<std::string>& fault_specs,
                         std::ostream& out) {
  std::ifstream f(circuit_file);
  if (!f) throw Error("cannot read " + circuit_file);
  std::stringstream ss;
  ss << f.rdbuf();
  const auto c = circuit_from_text(ss.str());
  if (!c.clifford_only())
    throw UnsupportedError(
        "circuit is not Clifford-only; frame propagation needs Clifford gates and no conditioned locations "
        "(use `gadget verify --backend statevector` instead)");
  std::vector<FaultEvent> faults;
  for (const auto& s : fault_specs)
    if (s != "none") faults.push_back(parse_fault(s, c));
  const auto pf = propagate_frame(c, faults);
  out << "frame " << (pf.frame.is_identity() ? std::string("I") : pf.frame.to_text()) << "\n";
  out << "support {" << detail::join(pf.frame.support()) << "}\n";
  out << "flipped records {";
  bool first = true;
  for (std::size_t r = 0; r < pf.record_flips.size(); ++r)
    if (pf.record_flips[r]) out << (first ? "" : ",") << r, first = false;
  out << "}\n";
  if (pf.unrecoverable) out << "unrecoverable syndrome in a sub-gadget\n";
  return kExitOk;
}

}  // namespace ftgadget
