// Copyright 2026 The csqpt Authors
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

// JSON forms of the library types. Complex numbers are [re, im] pairs and
// matrices are arrays of rows. Readout elements are written 1-based, every
// other index 0-based.

#include <string>
#include <vector>

#include <json.hpp>

#include "csqpt/harness.hpp"

namespace csqpt {

using Json = nlohmann::json;

Json complex_matrix_to_json(const ComplexMatrix& m);
ComplexMatrix complex_matrix_from_json(const Json& j);
Json complex_vector_to_json(const ComplexVector& v);
ComplexVector complex_vector_from_json(const Json& j);

/// {n_qubits, basis_kind, basis_unitary (PEB only), chi}
Json process_to_json(const ProcessMatrix& chi);
ProcessMatrix process_from_json(const Json& j);

/// {labels: [[state, rotation, element]], values, epsilon, seed}
Json data_to_json(const DataVector& data);
DataVector data_from_json(const Json& j);

Json spec_to_json(const TomographySpec& spec);
TomographySpec spec_from_json(const Json& j);

Json report_to_json(const SolveReport& report);

/// Every field is optional on input; missing ones keep their defaults.
Json plan_to_json(const SweepPlan& plan);
SweepPlan plan_from_json(const Json& j);

Json record_to_json(const SweepRecord& record);
SweepRecord record_from_json(const Json& j);
Json records_to_json(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> records_from_json(const Json& j);

/// Throw IoError / ParseError.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace csqpt
