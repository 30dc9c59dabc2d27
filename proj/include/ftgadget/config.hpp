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
/// JSON forms of gadget configurations and fault models.

#include <filesystem>
#include <string>

#include "ftgadget/faults.hpp"
#include "ftgadget/gadgets.hpp"
#include "ftgadget/io.hpp"

namespace ftgadget {

/// Resolves a code reference: a builtin name, a path relative to `base_dir`, or an inline code object.
inline CodeSpec code_ref_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (j.is_object()) return code_from_json(j);
  const auto ref = j.get<std::string>();
  if (auto b = builtin_code(ref)) return *b;
  const std::filesystem::path p(ref);
  return load_code((p.is_absolute() ? p : base_dir / p).string());
}

inline json gadget_config_to_json(const GadgetConfig& c) {
  json j;
  j["kind"] = target_name(c.kind);
  j["architecture"] = architecture_name(c.architecture);
  j["data_code"] = code_to_json(c.data_code);
  j["ancilla_code"] = c.ancilla_outer ? code_to_json(*c.ancilla_outer) : json(nullptr);
  j["reduced_support"] = c.reduced_support;
  j["interleave_ec"] = c.interleave_ec;
  j["t_correction_mode"] = t_mode_name(c.t_correction_mode);
  return j;
}

inline GadgetConfig gadget_config_from_json(const json& j, const std::filesystem::path& base_dir = ".") {
  GadgetConfig c;
  c.kind = target_from(j.value("kind", "S"));
  c.architecture = architecture_from(j.value("architecture", "fig1"));
  if (j.contains("data_code")) c.data_code = code_ref_from_json(j.at("data_code"), base_dir);
  if (j.contains("ancilla_code") && !j.at("ancilla_code").is_null()) {
    auto a = code_ref_from_json(j.at("ancilla_code"), base_dir);
    if (!is_stabilizer(a)) throw ValidationError("the ancilla code must be a stabilizer code");
    c.ancilla_outer = std::get<StabilizerCodeSpec>(a);
  }
  c.reduced_support = j.value("reduced_support", false);
  c.interleave_ec = j.value("interleave_ec", false);
  c.t_correction_mode = t_mode_from(j.value("t_correction_mode", "chain_s_gadget"));
  return c;
}

inline json fault_model_to_json(const FaultModel& m) {
  return json{{"kind", noise_name(m.kind)}, {"includes_measurement_flips", m.includes_measurement_flips}};
}

inline FaultModel fault_model_from_json(const json& j) {
  FaultModel m;
  m.kind = noise_from(j.value("kind", "depolarizing"));
  m.includes_measurement_flips = j.value("includes_measurement_flips", true);
  return m;
}

}  // namespace ftgadget
