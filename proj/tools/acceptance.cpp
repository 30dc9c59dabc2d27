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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: ftgadget_acceptance [--data DIR] [--only N]...

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "ftgadget/cli.hpp"

using namespace ftgadget;

namespace {

using C = std::complex<double>;
using M2 = std::array<C, 4>;

const double kPi = std::acos(-1.0);
const C kI{0, 1};

M2 mul(const M2& a, const M2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}
M2 lin(C x, const M2& a, C y, const M2& b) {
  return {x * a[0] + y * b[0], x * a[1] + y * b[1], x * a[2] + y * b[2], x * a[3] + y * b[3]};
}
double diff(const M2& a, const M2& b) {
  double d = 0;
  for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}
// Distance from a to the nearest unit-modulus multiple of b.
double phase_diff(const M2& a, const M2& b) {
  C ov = 0;
  double nb = 0;
  for (int i = 0; i < 4; ++i) ov += std::conj(b[i]) * a[i], nb += std::norm(b[i]);
  const C f = ov / nb;
  return diff(a, lin(f / std::abs(f), b, 0, b));
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << x;
  return os.str();
}

GadgetConfig config(GateTarget kind, Architecture arch, CodeSpec data, std::optional<StabilizerCodeSpec> anc = {},
                    bool ec = false) {
  GadgetConfig c;
  c.kind = kind;
  c.architecture = arch;
  c.data_code = std::move(data);
  c.ancilla_outer = std::move(anc);
  c.interleave_ec = ec;
  return c;
}

Outcome algebra() {
  const double r = 1 / std::sqrt(2.0);
  const M2 I{1, 0, 0, 1}, Y{0, -kI, kI, 0}, Z{1, 0, 0, -1}, X{0, 1, 1, 0};
  const M2 S{1, 0, 0, kI}, Sd{1, 0, 0, -kI}, H{r, r, r, -r}, T{1, 0, 0, std::exp(kI * (kPi / 4))};
  double worst = 0;
  worst = std::max(worst, diff(lin(r, I, -kI * r, Z), lin(std::exp(-kI * (kPi / 4)), S, 0, S)));
  worst = std::max(worst, diff(lin(r, I, kI * r, Z), lin(std::exp(kI * (kPi / 4)), Sd, 0, Sd)));
  worst = std::max(worst, diff(mul(Z, Sd), S));
  worst = std::max(worst, phase_diff(lin(r, I, -kI * r, Y), mul(X, H)));
  worst = std::max(worst, phase_diff(lin(std::cos(kPi / 8), I, -kI * std::sin(kPi / 8), Z), T));
  const C v0 = std::cos(kPi / 8), v1 = -kI * std::sin(kPi / 8);
  auto fixes = [&](const M2& u) {
    return std::abs(u[0] * v0 + u[1] * v1 - v0) < 1e-12 && std::abs(u[2] * v0 + u[3] * v1 - v1) < 1e-12;
  };
  const bool a = fixes(mul(mul(Sd, H), S)), b = fixes(mul(mul(S, H), Sd));
  const bool ok = worst < 1e-12 && a != b;
  return {ok, "max deviation " + fmt(worst) + "; |pi/8> is the +1 eigenvector of " +
                  (a ? "S^dagger H S" : b ? "S H S^dagger" : "neither")};
}

Outcome functional(const std::string& data_dir) {
  const std::vector<CodeSpec> codes{repetition_code(3), steane_code(), five_qubit_code(),
                                    load_code(data_dir + "/codes/gnu9.json")};
  double worst = 1;
  std::size_t rows = 0;
  for (auto kind : {GateTarget::S, GateTarget::H, GateTarget::T})
    for (const auto& c : codes) {
      const auto rep = run_ideal(build(config(kind, Architecture::fig1, c)), Backend::statevector);
      worst = std::min(worst, rep.min_fidelity);
      rows += rep.rows.size();
    }
  return {worst >= 1 - 1e-9, "12 gadgets, " + std::to_string(rows) + " branch rows, min fidelity " + fmt(worst)};
}

Outcome counts() {
  auto c = config(GateTarget::S, Architecture::fig2, five_qubit_code(), steane_code());
  const auto full = build(c);
  c.reduced_support = true;
  const auto red = build(c);
  const bool ok = full.coupling_count() == 35 && red.coupling_count() == 15 && red.support.size() >= 3;
  return {ok, std::to_string(full.coupling_count()) + " unreduced, " + std::to_string(red.coupling_count()) +
                  " reduced, support size " + std::to_string(red.support.size())};
}

Outcome parity(const std::string& data_dir) {
  bool ok = true;
  std::ostringstream os;
  for (const auto& c : std::vector<CodeSpec>{steane_code(), five_qubit_code()}) ok = ok && check_parity_property(c).holds;
  for (std::size_t n = 2; n <= 9; ++n) {
    const bool holds = check_parity_property(CodeSpec{repetition_code(n)}).holds;
    ok = ok && holds == (n % 2 == 1);
  }
  const auto anc = load_code(data_dir + "/codes/fig3_ancilla.json");
  ok = ok && check_parity_property(anc).holds;
  const auto bad = check_parity_property(load_code(data_dir + "/codes/corrupted_parity.json"));
  ok = ok && !bad.holds && !bad.witnesses.empty();
  os << "Steane, [[5,1,3]], rep-n (odd n <= 9), " << code_length(anc) << "-qubit concatenated ancilla hold; "
     << "even rep-n and corrupted fixture fail (witness " << (bad.witnesses.empty() ? "-" : bad.witnesses[0]) << ")";
  return {ok, os.str()};
}

Outcome logical_cz() {
  const auto a = verify_logical_cz(build(config(GateTarget::S, Architecture::fig2, five_qubit_code(), steane_code())));
  const auto b =
      verify_logical_cz(build(config(GateTarget::S, Architecture::fig3, repetition_code(3), repetition_code(3))));
  const bool ok = a.pass() && b.pass() && b.round1_min_fidelity;
  return {ok, "fig2 F=" + fmt(a.min_fidelity) + ", fig3 F=" + fmt(b.min_fidelity) +
                  ", fig3 after round 1 F=" + fmt(b.round1_min_fidelity.value_or(0))};
}

Outcome dephasing() {
  VerifyOptions o;
  o.backend = Backend::statevector;
  const auto g2 = build(config(GateTarget::S, Architecture::fig2, five_qubit_code(), steane_code()));
  const auto r2 = verify_ft(g2, FaultModel{NoiseKind::dephasing}, o);
  o.max_counterexamples = 1000;
  const auto g1 = build(config(GateTarget::S, Architecture::fig1, steane_code()));
  const auto r1 = verify_ft(g1, FaultModel{NoiseKind::depolarizing}, o);
  std::string example = "none";
  for (const auto& r : r1.counterexamples) {
    if (!r.fault || r.fault->measurement_flip || !r.residual) continue;
    const auto& l = g1.circuit.at(r.fault->location_id);
    const auto p = r.fault->pauli.scatter(g1.circuit.width, l.qubits);
    if (!p.x(g1.ancilla_qubits[0])) continue;
    const auto text = r.residual->letters();
    if (text.find_first_of("XY") == std::string::npos && r.residual->weight() >= 2) {
      example = r.fault_text() + " -> residual " + text;
      break;
    }
  }
  const bool ok = r2.pass() && !r1.pass() && example != "none";
  return {ok, "fig2 dephasing " + std::string(r2.pass() ? "pass" : "fail") + " (" + std::to_string(r2.n_faults) +
                  " faults); fig1 depolarizing " + (r1.pass() ? "pass" : "fail") + ", ancilla X " + example};
}

Outcome depolarizing() {
  const FaultModel dep{NoiseKind::depolarizing};
  VerifyOptions o;
  o.backend = Backend::tableau;
  const auto plain = build(config(GateTarget::S, Architecture::fig3, steane_code(), steane_code()));
  const auto a = verify_ft(plain, dep, o, filtered_faults(plain, dep, FaultFilter::ancilla));
  const Classifier cl(plain, Backend::tableau, {}, o.seed);
  std::optional<FaultEvent> early;
  for (const auto& l : plain.circuit.locations)
    if (l.kind == LocKind::idle && l.qubits == std::vector<std::size_t>{1} && l.id < plain.coupling_end) {
      early = FaultEvent{l.id, Attach::after, PauliString::from_text("X"), false};
      break;
    }
  const auto b = early ? cl.classify(&*early).classification : Classification::correct;
  const auto with_ec = build(config(GateTarget::S, Architecture::fig3, steane_code(), steane_code(), true));
  const auto c = verify_ft(with_ec, dep, o);
  const bool ok = plain.circuit.width == 56 && a.pass() && b == Classification::conjugate_gate && c.pass();
  return {ok, "width " + std::to_string(plain.circuit.width) + "; (a) " + std::to_string(a.n_faults) +
                  " ancilla faults " + (a.pass() ? "all correct" : "FAIL") + "; (b) " +
                  (early ? early->to_text() : "-") + " -> " + classification_name(b) + "; (c) " +
                  std::to_string(c.n_faults) + " faults with EC " + (c.pass() ? "pass" : "fail")};
}

Outcome equivalence() {
  std::vector<GadgetConfig> cfgs;
  for (auto k : {GateTarget::S, GateTarget::H}) {
    for (const auto& c : std::vector<CodeSpec>{repetition_code(3), steane_code(), five_qubit_code()})
      cfgs.push_back(config(k, Architecture::fig1, c));
    cfgs.push_back(config(k, Architecture::fig2, repetition_code(3), repetition_code(3)));
    cfgs.push_back(config(k, Architecture::fig2, five_qubit_code(), steane_code()));
  }
  std::size_t compared = 0, agreed = 0;
  double gap = 0;
  for (const auto& c : cfgs) {
    const auto g = build(c);
    for (auto m : {NoiseKind::dephasing, NoiseKind::depolarizing}) {
      const auto r = cross_check(g, enumerate_single_faults(g.circuit, FaultModel{m}));
      compared += r.compared;
      agreed += r.agreed;
      gap = std::max(gap, r.max_eigen_gap);
      for (const auto& d : r.disagreements) std::cerr << "  disagreement: " << d << "\n";
    }
  }
  return {agreed == compared && gap <= 1e-9, std::to_string(agreed) + "/" + std::to_string(compared) +
                                                 " scenarios agree over " + std::to_string(cfgs.size()) +
                                                 " gadgets; max eigenstate fidelity gap " + fmt(gap)};
}

Outcome determinism(const std::string& data_dir) {
  const auto dir = std::filesystem::temp_directory_path() / "ftgadget_acceptance";
  std::filesystem::create_directories(dir);
  std::vector<std::string> dumps;
  for (std::size_t w : {1, 4}) {
    auto cfg = load_run_config(data_dir + "/configs/fig2_depolarizing.json");
    Overrides o;
    o.workers = w;
    o.out = (dir / ("report_w" + std::to_string(w) + ".json")).string();
    apply_overrides(cfg, o, [](const char*) { return std::optional<std::string>{}; });
    std::ostringstream sink;
    cmd_gadget("verify", cfg, sink);
    std::ifstream f(*cfg.report_path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    dumps.push_back(ss.str());
  }
  const bool ok = !dumps[0].empty() && dumps[0] == dumps[1];
  return {ok, "reports with 1 and 4 workers: " + std::to_string(dumps[0].size()) + " bytes, " +
                  (ok ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ftgadget acceptance suite"};
  std::string data_dir = FTGADGET_DATA_DIR;
  std::vector<int> only;
  app.add_option("--data", data_dir, "fixture directory");
  app.add_option("--only", only, "criteria to run")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"algebraic identities", algebra},
      {"functional gadget correctness (fig1)", [&] { return functional(data_dir); }},
      {"fig2 construction counts", counts},
      {"parity property", [&] { return parity(data_dir); }},
      {"logical CZ sub-gadget", logical_cz},
      {"dephasing FT (fig2) and fig1 failure", dephasing},
      {"depolarizing FT (fig3, 56 qubits, tableau)", depolarizing},
      {"backend equivalence", equivalence},
      {"determinism across worker counts", [&] { return determinism(data_dir); }},
  };
  const std::set<int> selected(only.begin(), only.end());
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s  %s: %s [%.1fs]\n", id, out.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                out.detail.c_str(), secs);
    std::fflush(stdout);
    failed += out.pass ? 0 : 1;
  }
  return failed ? 1 : 0;
}
