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
/// Fault-tolerance verification of gate gadgets.
///
/// A run passes for a fault when, after the gadget's classical corrections and one
/// trailing ideal recovery of the data block, the data carries G|psi> for every
/// branch and every test input, and the physical residual left by the fault has
/// reduced weight at most t.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ftgadget/config.hpp"
#include "ftgadget/frame.hpp"
#include "ftgadget/simulate.hpp"

namespace ftgadget {

inline constexpr const char* kReportSchema = "ftgadget.report/1";
inline constexpr const char* kVersion = "1.0.0";

struct FtCriterion {
  std::optional<std::size_t> max_residual_weight;  // default (d-1)/2 of the data code
  bool require_logical_exact = true;               // false loosens the fidelity threshold to 1e-6

  std::size_t t(const CodeSpec& data) const { return max_residual_weight.value_or(correctable_weight(data)); }
  double tolerance() const { return require_logical_exact ? 1e-9 : 1e-6; }
};

enum class Classification { correct, conjugate_gate, logical_error, residual_too_heavy, unrecoverable };
inline constexpr std::size_t kClassCount = 5;

inline const char* classification_name(Classification c) {
  switch (c) {
    case Classification::correct: return "correct";
    case Classification::conjugate_gate: return "conjugate_gate";
    case Classification::logical_error: return "logical_error";
    case Classification::residual_too_heavy: return "residual_too_heavy";
    case Classification::unrecoverable: return "unrecoverable";
  }
  return "?";
}

enum class Backend { automatic, statevector, tableau };

inline const char* backend_name(Backend b) {
  switch (b) {
    case Backend::automatic: return "auto";
    case Backend::statevector: return "statevector";
    case Backend::tableau: return "tableau";
  }
  return "?";
}

inline Backend backend_from(const std::string& s) {
  if (s == "auto") return Backend::automatic;
  if (s == "statevector") return Backend::statevector;
  if (s == "tableau") return Backend::tableau;
  throw ParseError("unknown backend '" + s + "'");
}

inline Backend resolve_backend(const Gadget& g, Backend b) {
  if (b != Backend::automatic) return b;
  return g.circuit.clifford_only() && g.data().stabilizer() ? Backend::tableau : Backend::statevector;
}

// ---------------------------------------------------------------------------
// Test inputs

struct TestInput {
  std::string name;
  cplx alpha, beta;
  char eigen = 0;  // Pauli the input is an eigenstate of, 0 for random inputs
  int sign = 1;
};

/// The six logical Pauli eigenstates followed by `n_random` seeded random states.
inline std::vector<TestInput> test_inputs(std::uint64_t seed, std::size_t n_random = 8) {
  const double r = 1 / std::sqrt(2.0);
  const cplx i{0, 1};
  std::vector<TestInput> in{{"zero", 1, 0, 'Z', 1},      {"one", 0, 1, 'Z', -1},
                            {"plus", r, r, 'X', 1},      {"minus", r, -r, 'X', -1},
                            {"plus_i", r, r * i, 'Y', 1}, {"minus_i", r, -r * i, 'Y', -1}};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (std::size_t k = 0; k < n_random; ++k) {
    cplx a{nd(rng), nd(rng)}, b{nd(rng), nd(rng)};
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    in.push_back({"random" + std::to_string(k), a / norm, b / norm, 0, 1});
  }
  return in;
}

namespace detail {

inline Mat2 dagger2(const Mat2& m) { return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}; }

/// G P G^dagger as a signed Pauli letter.
inline std::pair<char, int> conjugated_pauli(const Mat2& g, char p) {
  const Mat2 img = mat_mul(mat_mul(g, pauli_matrix(p)), dagger2(g));
  for (char q : {'X', 'Y', 'Z'}) {
    const auto f = proportional(img, pauli_matrix(q));
    if (f && std::abs(std::imag(*f)) < 1e-9) return {q, std::real(*f) > 0 ? 1 : -1};
  }
  throw UnsupportedError("gate does not map Paulis to Paulis");
}

/// Logical class of a data-block Pauli in a stabilizer code, as I, X, Y or Z.
inline char logical_letter(const PauliString& e, const StabilizerCodeSpec& c) {
  const bool a = !e.commutes(c.logical_z), b = !e.commutes(c.logical_x);
  return a ? (b ? 'Y' : 'X') : (b ? 'Z' : 'I');
}

inline std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

inline bool discarded(const Gadget& g, const std::vector<int>& records) {
  return g.repeat_until_success && records[static_cast<std::size_t>(g.record)] == 1;
}

inline std::string fmt(double x, int digits = 12) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Records

struct FaultRecord {
  std::optional<FaultEvent> fault;  // nullopt for the fault-free run
  std::vector<std::string> branches;
  Classification classification = Classification::correct;
  char logical = 'I';  // I, X, Y, Z, C for the conjugate gate, ? for no consistent match
  std::optional<PauliString> residual;
  std::size_t residual_weight = 0;
  Backend backend = Backend::statevector;
  std::size_t scenarios = 0;
  std::size_t skipped_branches = 0;
  double min_fidelity = 1;  // worst fidelity against the target (statevector)
  double eigen_gap = 0;     // largest distance of an eigenstate-input fidelity from {0, 1}

  std::string fault_text() const { return fault ? fault->to_text() : "none"; }

  json to_json() const {
    json j;
    j["fault"] = fault_text();
    j["classification"] = classification_name(classification);
    j["logical"] = std::string(1, logical);
    j["residual"] = residual ? json(residual->letters()) : json(nullptr);
    j["residual_weight"] = residual_weight;
    j["backend"] = backend_name(backend);
    j["branches"] = branches;
    if (backend == Backend::statevector) j["min_fidelity"] = detail::fmt(min_fidelity);
    return j;
  }
};

inline Classification decide(bool unrecoverable, char logical, std::size_t w, std::size_t t) {
  if (unrecoverable) return Classification::unrecoverable;
  if (logical == 'I' && w <= t) return Classification::correct;
  if (w > t) return Classification::residual_too_heavy;
  if (logical == 'C') return Classification::conjugate_gate;
  return Classification::logical_error;
}

// ---------------------------------------------------------------------------
// Classifier

class Classifier {
 public:
  Classifier(const Gadget& g, Backend backend, FtCriterion criterion, std::uint64_t seed)
      : g_(g), backend_(resolve_backend(g, backend)), crit_(criterion), inputs_(test_inputs(seed)) {
    const auto& data = g_.data();
    t_ = crit_.t(data.spec());
    if (g_.conjugate && !g_.conjugate->is_identity() && data.stabilizer())
      conj_letter_ = detail::logical_letter(*g_.conjugate, data.stab());
    if (backend_ == Backend::tableau) {
      if (!data.stabilizer()) throw UnsupportedError("the tableau backend needs a stabilizer data code");
      if (!g_.circuit.clifford_only())
        throw UnsupportedError("the tableau backend cannot run non-Clifford gadgets; use --backend statevector");
    } else {
      exec_ = std::make_unique<StatevectorExecutor>(g_.circuit);
      build_targets();
    }
  }

  Backend backend() const { return backend_; }
  std::size_t t() const { return t_; }
  const std::vector<TestInput>& inputs() const { return inputs_; }

  FaultRecord classify(const FaultEvent* f) const {
    return backend_ == Backend::tableau ? classify_frame(f) : classify_dense(f);
  }

 private:
  struct FrameInfo {
    bool unrecoverable = false;
    char logical = 'I';
    PauliString residual;
    std::size_t weight = 0;
  };

  FrameInfo frame_info(const FaultEvent* f) const {
    const auto& data = g_.data();
    std::vector<FaultEvent> fs;
    if (f) fs.push_back(*f);
    const auto pf = propagate_frame(g_.circuit, fs);
    const auto dq = detail::iota(g_.n_data());
    FrameInfo out;
    out.unrecoverable = pf.unrecoverable;
    out.residual = (pf.frame * pf.correction_flips).gather(dq);
    out.weight = data.stabilizer() ? reduced_weight(out.residual, data.decoder().group()) : out.residual.weight();
    if (data.stabilizer()) {
      const auto tail = pf.frame.gather(dq);
      const auto fix = data.decoder().decode(data.decoder().syndrome(tail));
      if (!fix) {
        out.unrecoverable = true;
      } else {
        out.logical = detail::logical_letter(*fix * tail, data.stab());
        if (conj_letter_ && out.logical == *conj_letter_) out.logical = 'C';
      }
    }
    return out;
  }

  FaultRecord classify_frame(const FaultEvent* f) const {
    FaultRecord r;
    if (f) r.fault = *f;
    r.backend = Backend::tableau;
    const auto fi = frame_info(f);
    r.logical = fi.logical;
    r.residual = fi.residual;
    r.residual_weight = fi.weight;
    r.scenarios = 1;
    r.classification = decide(fi.unrecoverable, fi.logical, fi.weight, t_);
    return r;
  }

  void build_targets() {
    const auto& spec = g_.data().spec();
    const Mat2 gm = target_matrix(g_.config.kind);
    std::vector<std::pair<char, Mat2>> cands{{'I', gm}};
    if (g_.conjugate && !g_.conjugate->is_identity())
      cands.emplace_back('C', mat_mul(logical_action(spec, *g_.conjugate), gm));
    for (char p : {'X', 'Y', 'Z'}) cands.emplace_back(p, mat_mul(pauli_matrix(p), gm));
    for (const auto& [letter, m] : cands) {
      letters_.push_back(letter);
      std::vector<DenseState> per;
      for (const auto& in : inputs_)
        per.push_back(encode(spec, m[0] * in.alpha + m[1] * in.beta, m[2] * in.alpha + m[3] * in.beta));
      targets_.push_back(std::move(per));
    }
  }

  FaultRecord classify_dense(const FaultEvent* f) const {
    FaultRecord r;
    if (f) r.fault = *f;
    r.backend = Backend::statevector;
    const double tol = crit_.tolerance();
    auto paths = recover_data(g_.circuit, exec_->run(f));
    std::optional<char> common;
    bool mixed = false, unrec = false;
    std::size_t ec_weight = 0;
    for (const auto& p : paths) {
      if (detail::discarded(g_, p.records)) continue;
      std::vector<DenseState> outs;
      std::vector<std::size_t> live;
      for (std::size_t k = 0; k < inputs_.size(); ++k) {
        auto out = p.combine(inputs_[k].alpha, inputs_[k].beta);
        if (out.norm_sq() < kImpossibleBranch) {
          ++r.skipped_branches;
          continue;
        }
        outs.push_back(std::move(out));
        live.push_back(k);
      }
      if (live.empty()) continue;
      r.scenarios += live.size();
      if (r.branches.size() < 16) r.branches.push_back(p.tag.empty() ? "-" : p.tag);
      unrec = unrec || p.unrecoverable;
      ec_weight = std::max(ec_weight, p.ec_weight);
      char match = '?';
      for (std::size_t c = 0; c < letters_.size(); ++c) {
        bool ok = true;
        for (std::size_t i = 0; i < live.size(); ++i) {
          const double fid = block_fidelity(outs[i], targets_[c][live[i]]);
          if (c == 0) {
            r.min_fidelity = std::min(r.min_fidelity, fid);
            if (inputs_[live[i]].eigen) r.eigen_gap = std::max(r.eigen_gap, std::min(fid, 1 - fid));
          }
          if (fid < 1 - tol) {
            ok = false;
            if (c != 0) break;
          }
        }
        if (ok) {
          match = letters_[c];
          break;
        }
      }
      if (!common) common = match;
      else if (*common != match) mixed = true;
    }
    r.logical = mixed || !common ? (common ? '?' : 'I') : *common;

    std::size_t w = ec_weight;
    if (g_.circuit.clifford_only()) {
      try {
        const auto fi = frame_info(f);
        r.residual = fi.residual;
        w = fi.weight;
      } catch (const Error&) {
      }
    }
    r.residual_weight = w;
    r.classification = decide(unrec, r.logical, w, t_);
    return r;
  }

  const Gadget& g_;
  Backend backend_;
  FtCriterion crit_;
  std::vector<TestInput> inputs_;
  std::size_t t_ = 0;
  std::optional<char> conj_letter_;
  std::unique_ptr<StatevectorExecutor> exec_;
  std::vector<char> letters_;
  std::vector<std::vector<DenseState>> targets_;
};

// ---------------------------------------------------------------------------
// Ideal runs

struct IdealRow {
  std::string input;
  std::string branch;
  double probability = 0;
  double fidelity = 0;
  bool discarded = false;  // repeat-until-success failure branch
};

struct IdealReport {
  Backend backend = Backend::statevector;
  std::vector<IdealRow> rows;
  double min_fidelity = 1;
  bool pass() const { return min_fidelity >= 1 - 1e-9; }

  std::string to_text() const {
    std::ostringstream os;
    os << "backend " << backend_name(backend) << "\n";
    for (const auto& r : rows)
      os << std::left << std::setw(10) << r.input << " p=" << std::setw(14) << detail::fmt(r.probability, 8)
         << " F=" << std::setw(14) << detail::fmt(r.fidelity, 12) << (r.discarded ? " discarded " : " ")
         << r.branch << "\n";
    os << "min fidelity " << detail::fmt(min_fidelity) << (pass() ? " (ok)" : " (FAIL)") << "\n";
    return os.str();
  }
};

/// Fault-free execution; fidelity of every branch against G|psi> after the gadget's corrections.
inline IdealReport run_ideal(const Gadget& g, Backend backend = Backend::automatic, std::uint64_t seed = 2024) {
  IdealReport rep;
  rep.backend = resolve_backend(g, backend);
  const auto& c = g.circuit;
  if (rep.backend == Backend::statevector) {
    Classifier cl(g, Backend::statevector, {}, seed);
    const StatevectorExecutor exec(c);
    const auto paths = exec.run();
    const auto& spec = g.data().spec();
    const Mat2 gm = target_matrix(g.config.kind);
    for (const auto& in : cl.inputs()) {
      const auto target = encode(spec, gm[0] * in.alpha + gm[1] * in.beta, gm[2] * in.alpha + gm[3] * in.beta);
      for (const auto& p : paths) {
        auto out = p.combine(in.alpha, in.beta);
        IdealRow row{in.name, p.tag.empty() ? "-" : p.tag, out.norm_sq(), 0, detail::discarded(g, p.records)};
        if (row.probability < kImpossibleBranch) continue;
        row.fidelity = block_fidelity(out, target);
        if (!row.discarded) rep.min_fidelity = std::min(rep.min_fidelity, row.fidelity);
        rep.rows.push_back(std::move(row));
      }
    }
    return rep;
  }
  if (!g.data().stabilizer()) throw UnsupportedError("the tableau backend needs a stabilizer data code");
  const auto& data = g.data().stab();
  const auto dq = detail::iota(g.n_data());
  auto logical = [&](char p, int sign) {
    PauliString op = p == 'X' ? data.logical_x : p == 'Z' ? data.logical_z : logical_y(data);
    if (sign < 0) op = op.with_phase(op.phase_exp() + 2);
    return op;
  };
  for (const auto& in : test_inputs(seed, 0)) {
    const auto paths = run_tableau(c, logical(in.eigen, in.sign));
    const auto [q, s] = detail::conjugated_pauli(target_matrix(g.config.kind), in.eigen);
    const auto want = logical(q, in.sign * s).scatter(c.width, dq);
    for (const auto& p : paths) {
      IdealRow row{in.name, p.tag.empty() ? "-" : p.tag, p.probability, 1, detail::discarded(g, p.records)};
      if (p.state.expectation(want) != 1) row.fidelity = 0;
      for (const auto& gen : data.generators)
        if (p.state.expectation(gen.scatter(c.width, dq)) != 1) row.fidelity = 0;
      if (!row.discarded) rep.min_fidelity = std::min(rep.min_fidelity, row.fidelity);
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Exhaustive verification

struct VerifyOptions {
  Backend backend = Backend::automatic;
  std::size_t workers = 0;  // 0 = hardware concurrency
  std::uint64_t seed = 2024;
  std::size_t max_counterexamples = 10;
  FtCriterion criterion;
  bool reverse_order = false;  // process faults back to front; the report must not change
};

struct VerificationReport {
  json config;
  Backend backend = Backend::statevector;
  std::uint64_t seed = 0;
  std::size_t t = 0;
  std::size_t n_faults = 0;
  std::size_t scenarios = 0;
  std::size_t skipped_branches = 0;
  std::array<std::size_t, kClassCount> totals{};
  std::vector<FaultRecord> counterexamples;
  std::vector<std::string> notes;

  bool pass() const {
    for (std::size_t k = 1; k < kClassCount; ++k)
      if (totals[k]) return false;
    return true;
  }

  json to_json() const {
    json j;
    j["schema"] = kReportSchema;
    j["version"] = kVersion;
    j["config"] = config;
    j["backend"] = backend_name(backend);
    j["seed"] = seed;
    j["max_residual_weight"] = t;
    j["faults"] = n_faults;
    j["scenarios"] = scenarios;
    j["skipped_branches"] = skipped_branches;
    json tot;
    for (std::size_t k = 0; k < kClassCount; ++k) tot[classification_name(static_cast<Classification>(k))] = totals[k];
    j["totals"] = tot;
    j["counterexamples"] = json::array();
    for (const auto& r : counterexamples) j["counterexamples"].push_back(r.to_json());
    j["notes"] = notes;
    j["verdict"] = pass() ? "pass" : "fail";
    return j;
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "backend " << backend_name(backend) << ", seed " << seed << ", t = " << t << "\n";
    os << n_faults << " single faults, " << scenarios << " scenarios, " << skipped_branches
       << " zero-probability branches skipped\n";
    for (std::size_t k = 0; k < kClassCount; ++k)
      os << "  " << std::left << std::setw(20) << classification_name(static_cast<Classification>(k)) << totals[k]
         << "\n";
    for (const auto& r : counterexamples) {
      os << "counterexample " << r.fault_text() << ": " << classification_name(r.classification) << ", logical "
         << r.logical;
      if (r.residual) os << ", residual " << r.residual->letters() << " (weight " << r.residual_weight << ")";
      os << "\n";
    }
    for (const auto& n : notes) os << "note: " << n << "\n";
    os << "verdict: " << (pass() ? "pass" : "fail") << "\n";
    return os.str();
  }
};

/// Runs `work(i)` for i in [0, n) on up to `workers` threads; the first exception is rethrown.
template <class F>
void parallel_for(std::size_t n, std::size_t workers, bool reverse, F&& work) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto loop = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < n;) {
      try {
        work(reverse ? n - 1 - k : k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(loop);
  loop();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

inline std::vector<std::string> report_notes(const Gadget& g, Backend backend) {
  std::vector<std::string> notes;
  if (!g.ancilla_h_transversal)
    notes.push_back("the ancilla logical H is an idealized block; faults act only at its boundaries");
  if (!g.data().stabilizer()) notes.push_back("conditional on idealized EC for the data code");
  if (g.repeat_until_success) notes.push_back("repeat-until-success: outcome-1 branches are discarded");
  if (backend == Backend::tableau) notes.push_back("frame classification; independent of the input state");
  return notes;
}

inline VerificationReport verify_ft(const Gadget& g, const FaultModel& model, const VerifyOptions& opt = {},
                                    std::optional<std::vector<FaultEvent>> subset = std::nullopt) {
  const Classifier cl(g, opt.backend, opt.criterion, opt.seed);
  const auto faults = subset ? *subset : enumerate_single_faults(g.circuit, model);
  // Slot 0 is the fault-free run.
  std::vector<FaultRecord> recs(faults.size() + 1);
  parallel_for(recs.size(), opt.workers, opt.reverse_order,
               [&](std::size_t i) { recs[i] = cl.classify(i == 0 ? nullptr : &faults[i - 1]); });

  VerificationReport rep;
  rep.config = json{{"gadget", gadget_config_to_json(g.config)},
                    {"model", fault_model_to_json(model)},
                    {"criterion",
                     {{"max_residual_weight", cl.t()}, {"require_logical_exact", opt.criterion.require_logical_exact}}},
                    {"backend", backend_name(opt.backend)},
                    {"seed", opt.seed}};
  rep.backend = cl.backend();
  rep.seed = opt.seed;
  rep.t = cl.t();
  rep.n_faults = faults.size();
  for (const auto& r : recs) {
    rep.scenarios += r.scenarios;
    rep.skipped_branches += r.skipped_branches;
    ++rep.totals[static_cast<std::size_t>(r.classification)];
    if (r.classification != Classification::correct && rep.counterexamples.size() < opt.max_counterexamples)
      rep.counterexamples.push_back(r);
  }
  rep.notes = report_notes(g, rep.backend);
  return rep;
}

/// All records, for callers that need every fault rather than a summary.
inline std::vector<FaultRecord> classify_all(const Gadget& g, const std::vector<FaultEvent>& faults, Backend backend,
                                             std::uint64_t seed = 2024, std::size_t workers = 0,
                                             FtCriterion criterion = {}) {
  const Classifier cl(g, backend, criterion, seed);
  std::vector<FaultRecord> recs(faults.size());
  parallel_for(recs.size(), workers, false, [&](std::size_t i) { recs[i] = cl.classify(&faults[i]); });
  return recs;
}

// ---------------------------------------------------------------------------
// Backend cross-check

inline constexpr std::size_t kCrossCheckMaxQubits = 12;

struct CrossCheckReport {
  std::size_t compared = 0;
  std::size_t agreed = 0;
  double max_eigen_gap = 0;
  std::vector<std::string> disagreements;
  bool ok() const { return agreed == compared && max_eigen_gap <= 1e-9; }
};

inline CrossCheckReport cross_check(const Gadget& g, const std::vector<FaultEvent>& faults, std::uint64_t seed = 2024,
                                    std::size_t workers = 0) {
  if (!g.circuit.clifford_only()) throw UnsupportedError("cross-check needs a Clifford gadget");
  if (g.circuit.width > kCrossCheckMaxQubits)
    throw CapacityError("cross-check limited to " + std::to_string(kCrossCheckMaxQubits) + " qubits");
  const Classifier sv(g, Backend::statevector, {}, seed), tab(g, Backend::tableau, {}, seed);
  std::vector<std::pair<FaultRecord, FaultRecord>> out(faults.size() + 1);
  parallel_for(out.size(), workers, false, [&](std::size_t i) {
    const FaultEvent* f = i == 0 ? nullptr : &faults[i - 1];
    out[i] = {sv.classify(f), tab.classify(f)};
  });
  CrossCheckReport rep;
  for (const auto& [a, b] : out) {
    ++rep.compared;
    rep.max_eigen_gap = std::max(rep.max_eigen_gap, a.eigen_gap);
    if (a.classification == b.classification && a.logical == b.logical) {
      ++rep.agreed;
      continue;
    }
    std::ostringstream os;
    os << a.fault_text() << ": statevector " << classification_name(a.classification) << "/" << a.logical
       << " tableau " << classification_name(b.classification) << "/" << b.logical << " residual "
       << (b.residual ? b.residual->letters() : "-") << " branches";
    for (const auto& br : a.branches) os << " [" << br << "]";
    rep.disagreements.push_back(os.str());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Logical CZ sub-gadget

struct CzReport {
  double min_fidelity = 1;
  std::optional<double> round1_min_fidelity;
  bool pass() const {
    return min_fidelity >= 1 - 1e-9 && (!round1_min_fidelity || *round1_min_fidelity >= 1 - 1e-9);
  }
};

/**
 * Checks that the coupling rounds of a fig2/fig3 gadget map |-iL>|psi> to
 * (|0L>|psi> - i|1L> Z|psi>)/sqrt2, and for fig3 that after the first round the
 * state is P0|-iL>|psi> + P1|-iL> Z|psi>, with Pb projecting the first hooked
 * inner block onto logical value b.
 */
inline CzReport verify_logical_cz(const Gadget& g, std::uint64_t seed = 2024) {
  if (g.config.architecture == Architecture::fig1) throw UnsupportedError("fig1 has no encoded ancilla");
  const auto& c = g.circuit;
  const Location* prep = nullptr;
  for (const auto& l : c.locations)
    if (l.kind == LocKind::prepare && l.code >= 0) {
      prep = &l;
      break;
    }
  if (!prep) throw ValidationError("no encoded ancilla preparation");
  const auto& anc = c.code(*prep);
  const auto& [a0, a1] = anc.dense_codewords();
  const std::size_t base = detail::contiguous_offset(prep->qubits);
  const std::size_t n = g.n_data();
  const auto zdata = transversal(n, 'Z');
  const cplx mi{0, -1};
  const double r = 1 / std::sqrt(2.0);
  const StatevectorExecutor exec(c);

  auto product = [&](const DenseState& anc_state, const DenseState& psi) {
    std::vector<cplx> amps(std::size_t{1} << c.width);
    for (std::size_t j = 0; j < anc_state.dim(); ++j)
      if (anc_state[j] != cplx{})
        for (std::size_t i = 0; i < psi.dim(); ++i) amps[i | (j << base)] = anc_state[j] * psi[i];
    return DenseState::from_amplitudes(std::move(amps));
  };
  auto single = [](const std::vector<SvPath>& paths) {
    if (paths.size() != 1) throw ValidationError("coupling rounds branched in an ideal run");
    return paths[0];
  };

  CzReport rep;
  const auto full = single(exec.run_until(g.coupling_end));
  std::optional<SvPath> first;
  if (g.config.architecture == Architecture::fig3 && !g.round_ends.empty())
    first = single(exec.run_until(g.round_ends[0]));
  DenseState minus_i = a0;
  for (std::size_t j = 0; j < minus_i.dim(); ++j) minus_i[j] = r * (a0[j] + mi * a1[j]);

  for (const auto& in : test_inputs(seed)) {
    const auto psi = encode(g.data().spec(), in.alpha, in.beta);
    const auto zpsi = apply_pauli(psi, zdata);
    auto expected = product(a0, psi);
    const auto second = product(a1, zpsi);
    for (std::size_t i = 0; i < expected.dim(); ++i) expected[i] = r * (expected[i] + mi * second[i]);
    rep.min_fidelity = std::min(rep.min_fidelity, fidelity(full.combine(in.alpha, in.beta), expected));

    if (first) {
      const auto& concat = anc.concatenated();
      const std::size_t j1 = g.support.at(0);
      const std::size_t q = base + (concat ? concat->block(j1).at(0) : j1);
      const auto zb = PauliString::single(c.width, q, 'Z');
      auto s0 = product(minus_i, psi), s1 = s0;
      s0.project_pauli(zb, 0);
      s1.project_pauli(zb, 1);
      s1.apply_pauli(zdata.embed(c.width, 0));
      for (std::size_t i = 0; i < s0.dim(); ++i) s0[i] += s1[i];
      const double f = fidelity(first->combine(in.alpha, in.beta), s0);
      rep.round1_min_fidelity = std::min(rep.round1_min_fidelity.value_or(1.0), f);
    }
  }
  return rep;
}

}  // namespace ftgadget
