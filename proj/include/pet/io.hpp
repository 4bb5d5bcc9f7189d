// Copyright 2026 The PET Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "json.hpp"
#include "pet/pulse.hpp"
#include "pet/qcore.hpp"
#include "pet/unitary.hpp"

namespace pet {

using Json = nlohmann::ordered_json;

// Circuit interchange: {"num_qubits": n, "gates": [{"name", "qubits", "params"}]}.
// Literal parameters are written as numbers, symbolic ones as strings.
Json circuit_to_json(const Circuit &c);
Circuit circuit_from_json(const Json &j);

Json backend_to_json(const BackendModel &b);
/// Parses and validates.
BackendModel backend_from_json(const Json &j);
BackendModel read_backend_file(const std::string &path);

Json schedule_to_json(const ScheduledCircuit &s);

/// 4x4 or 2x2 matrix as nested lists of [re, im] pairs.
Matrix matrix_from_json(const Json &j);
Json matrix_to_json(const Matrix &m);

/// Throws Error when the file cannot be read or parsed.
Json read_json_file(const std::string &path);
std::string read_text_file(const std::string &path);

}  // namespace pet
