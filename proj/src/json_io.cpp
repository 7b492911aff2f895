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

#include "osk/json_io.hpp"

#include <fstream>

namespace osk {

namespace {

json complex_to_json(cxd v) { return json::array({v.real(), v.imag()}); }

cxd complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw InvalidInputError("complex scalar must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (const auto& v : m.data()) data.push_back(complex_to_json(v));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  const auto& data = j.at("data");
  if (!data.is_array() || static_cast<int>(data.size()) != rows * cols)
    throw InvalidInputError("matrix data length does not match shape");
  std::vector<cxd> entries;
  entries.reserve(data.size());
  for (const auto& e : data) entries.push_back(complex_from_json(e));
  return ComplexMatrix(rows, cols, std::move(entries));
}

json operator_system_to_json(const OperatorSystem& s) {
  json gens = json::array();
  for (const auto& g : s.generators()) gens.push_back(matrix_to_json(g));
  return json{{"ambient_dim", s.ambient_dim()}, {"generators", std::move(gens)}};
}

OperatorSystem operator_system_from_json(const json& j) {
  const int m = j.at("ambient_dim").get<int>();
  std::vector<ComplexMatrix> gens;
  for (const auto& g : j.at("generators")) gens.push_back(matrix_from_json(g));
  return make_operator_system(gens, m);
}

json function_system_to_json(const FunctionSystem& f) {
  json fns = json::array();
  for (const auto& fn : f.functions()) {
    json vec = json::array();
    for (const auto& v : fn) vec.push_back(complex_to_json(v));
    fns.push_back(std::move(vec));
  }
  return json{{"omega", f.omega_size()}, {"functions", std::move(fns)}};
}

FunctionSystem function_system_from_json(const json& j) {
  const int omega = j.at("omega").get<int>();
  std::vector<std::vector<cxd>> fns;
  for (const auto& fn : j.at("functions")) {
    std::vector<cxd> vec;
    vec.reserve(fn.size());
    for (const auto& v : fn) vec.push_back(complex_from_json(v));
    fns.push_back(std::move(vec));
  }
  return FunctionSystem(omega, std::move(fns));
}

json cpmap_to_json(const CPMap& t) {
  json out{{"m", t.input_dim()}, {"n", t.output_dim()}};
  if (t.domain() == CPMap::Domain::Full) {
    out["domain"] = "full";
    json images = json::array();
    for (int i = 0; i < t.input_dim(); ++i)
      for (int j = 0; j < t.input_dim(); ++j)
        images.push_back(
            matrix_to_json(t.apply(ComplexMatrix::unit(t.input_dim(), i, j))));
    out["basis_images"] = std::move(images);
    out["choi"] = matrix_to_json(t.choi());
  } else {
    out["domain"] = "system";
    out["system"] = operator_system_to_json(t.system());
    json images = json::array();
    for (const auto& img : t.basis_images()) images.push_back(matrix_to_json(img));
    out["basis_images"] = std::move(images);
  }
  return out;
}

CPMap cpmap_from_json(const json& j) {
  const int m = j.at("m").get<int>();
  const int n = j.at("n").get<int>();
  const std::string domain = j.at("domain").get<std::string>();
  if (domain == "full") {
    if (j.contains("choi")) return CPMap::from_choi(m, n, matrix_from_json(j.at("choi")));
    std::vector<ComplexMatrix> images;
    for (const auto& img : j.at("basis_images")) images.push_back(matrix_from_json(img));
    return CPMap::from_matrix_unit_images(m, n, images);
  }
  if (domain == "system") {
    OperatorSystem s = operator_system_from_json(j.at("system"));
    std::vector<ComplexMatrix> images;
    for (const auto& img : j.at("basis_images")) images.push_back(matrix_from_json(img));
    return CPMap::on_system(s, n, std::move(images));
  }
  throw InvalidInputError("domain must be \"full\" or \"system\"");
}

json functional_to_json(const PositiveFunctional& f) {
  json out{{"level", f.level()}, {"m", f.ambient_dim()}};
  json values = json::array();
  for (const auto& v : f.values()) values.push_back(complex_to_json(v));
  out["values"] = std::move(values);
  if (f.on_full_algebra()) {
    out["domain"] = "full";
  } else {
    out["domain"] = "system";
    out["system"] = operator_system_to_json(f.system());
  }
  return out;
}

PositiveFunctional functional_from_json(const json& j) {
  const int level = j.at("level").get<int>();
  const int m = j.at("m").get<int>();
  std::vector<cxd> values;
  for (const auto& v : j.at("values")) values.push_back(complex_from_json(v));
  std::optional<OperatorSystem> sys;
  if (j.at("domain").get<std::string>() == "system")
    sys = operator_system_from_json(j.at("system"));
  return PositiveFunctional(level, m, std::move(sys), std::move(values));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace osk
