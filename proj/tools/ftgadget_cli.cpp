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

// Command-line front end. See README.md for the command reference.

#include <iostream>

#include "CLI11.hpp"
#include "ftgadget/cli.hpp"

namespace {

void add_run_flags(CLI::App* cmd, ftgadget::Overrides& o) {
  cmd->add_option("--backend", o.backend, "auto, statevector or tableau");
  cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)");
  cmd->add_option("--seed", o.seed, "seed for random test inputs");
  cmd->add_option("--max-counterexamples", o.max_counterexamples, "counterexamples kept in the report");
  cmd->add_option("--faults", o.fault_filter, "all, ancilla or data");
  cmd->add_option("--out", o.out, "output file (report, circuit or table)");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ftgadget;
  CLI::App app{"Fault-tolerance checker for gate gadgets"};
  app.require_subcommand(1);

  std::string codes_action, code_file;
  auto* codes = app.add_subcommand("codes", "inspect a code file");
  codes->add_option("action", codes_action, "validate, parity or min-logical")
      ->required()
      ->check(CLI::IsMember({"validate", "parity", "min-logical"}));
  codes->add_option("file", code_file, "code file or builtin name")->required();

  std::string gadget_action, config_file;
  Overrides over;
  auto* gadget = app.add_subcommand("gadget", "build, run or verify a gadget");
  gadget->add_option("action", gadget_action, "build, run, verify, cz or cross-check")
      ->required()
      ->check(CLI::IsMember({"build", "run", "verify", "cz", "cross-check"}));
  gadget->add_option("--config", config_file, "run configuration file")->required();
  add_run_flags(gadget, over);

  std::string circuit_file;
  std::vector<std::string> fault_specs;
  auto* prop = app.add_subcommand("propagate", "push faults through an exported circuit");
  prop->add_option("--circuit", circuit_file, "circuit file")->required();
  prop->add_option("--fault", fault_specs, "id,PAULI[,before|after], id,FLIP or none")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*codes) return cmd_codes(codes_action, code_file, std::cout);
    if (*gadget) {
      auto cfg = load_run_config(config_file);
      apply_overrides(cfg, over);
      return cmd_gadget(gadget_action, cfg, std::cout);
    }
    return cmd_propagate(circuit_file, fault_specs, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
