// Copyright 2026 The csdtc Authors
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

#ifndef CSDTC_CIRCUIT_IO_H
#define CSDTC_CIRCUIT_IO_H

#include <filesystem>

#include <nlohmann/json.hpp>

#include "csdtc/circuit.h"

namespace csdtc {

/// Parses the parameter document
///
///     {"node_caps_fF": [4], "mutual_caps_fF": {"C12": .., "C13": .., "C14": .., "C23": .., "C24": .., "C34": ..},
///      "critical_currents_nA": [5]}
///
/// Unknown or missing keys are rejected with ValidationError. The result is validated.
CircuitParams params_from_json(const nlohmann::json &doc);
nlohmann::json params_to_json(const CircuitParams &params);
CircuitParams load_params(const std::filesystem::path &path);

}  // namespace csdtc

#endif  // CSDTC_CIRCUIT_IO_H
