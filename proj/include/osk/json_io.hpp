// Copyright 2026 The opsyskit authors
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

#include <json.hpp>

#include "osk/cpmaps.hpp"
#include "osk/matrix.hpp"
#include "osk/opsys.hpp"

namespace osk {

using json = nlohmann::json;

// Matrix: {"rows": r, "cols": c, "data": [[re, im], ...]} row-major.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

// Operator system: {"ambient_dim": m, "generators": [matrix, ...]}.
json operator_system_to_json(const OperatorSystem& s);
OperatorSystem operator_system_from_json(const json& j);

// Function system: {"omega": k, "functions": [[[re, im], ...], ...]}.
// Serialization stores the full (constant- and conjugation-closed) list;
// parsing rebuilds the system from it.
json function_system_to_json(const FunctionSystem& f);
FunctionSystem function_system_from_json(const json& j);

// CP map: {"domain": "full"|"system", "m":, "n":, "basis_images": [...]}
// with "choi" optional for the full domain (it wins when present) and
// "system" required for the system domain. Full-domain basis_images are
// the images of the matrix units e_ij in row-major order; system-domain
// images follow the system's canonical Hermitian basis.
json cpmap_to_json(const CPMap& t);
CPMap cpmap_from_json(const json& j);

// Functional: {"level": n, "m":, "domain":, "values": [[re, im], ...]}
// ordered (k, i, j) row-major over the domain basis, plus "system" when
// the domain is an operator system.
json functional_to_json(const PositiveFunctional& f);
PositiveFunctional functional_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace osk
