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

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "osk/iso.hpp"
#include "osk/json_io.hpp"

using namespace osk;

namespace {

struct CliResult {
  int exit_code = -1;
  json report;
  std::string raw;
};

std::string binary_path() {
  const char* p = std::getenv("OPSYSKIT_BIN");
  REQUIRE(p != nullptr);
  return p;
}

CliResult run_cli(const std::string& args) {
  const std::string cmd = "\"" + binary_path() + "\" " + args + " > cli_out.json 2> cli_err.txt";
  const int status = std::system(cmd.c_str());
  CliResult res;
  res.exit_code = WEXITSTATUS(status);
  std::ifstream in("cli_out.json");
  std::stringstream ss;
  ss << in.rdbuf();
  res.raw = ss.str();
  if (!res.raw.empty() && res.raw[0] == '{') res.report = json::parse(res.raw);
  return res;
}

void write_fixtures() {
  // Transpose map on M_2 via matrix-unit images.
  json tmap;
  tmap["domain"] = "full";
  tmap["m"] = 2;
  tmap["n"] = 2;
  json images = json::array();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      images.push_back(matrix_to_json(ComplexMatrix::unit(2, j, i)));
  tmap["basis_images"] = images;
  write_json_file("fx_transpose2.json", tmap);

  write_json_file("fx_zero2.json", matrix_to_json(ComplexMatrix(2, 2)));
  write_json_file("fx_e11.json", matrix_to_json(ComplexMatrix::unit(2, 0, 0)));
  write_json_file("fx_spanI.json", json{{"ambient_dim", 2}, {"generators", json::array()}});

  OperatorSystem span_i = make_operator_system({}, 2);
  PositiveFunctional f(1, 2, span_i, {cxd(1.0 / std::sqrt(2.0))});
  write_json_file("fx_unitf.json", functional_to_json(f));

  // Identity map on M_2.
  write_json_file("fx_id2.json", cpmap_to_json(CPMap::identity(2)));

  Rng rng(2051);
  ComplexMatrix x = random_matrix(rng, 3, 3);
  ComplexMatrix u = haar_unitary(rng, 3);
  write_json_file("fx_x3.json", matrix_to_json(x));
  write_json_file("fx_y3.json", matrix_to_json(u * x * u.adjoint()));
  write_json_file("fx_d10.json", matrix_to_json(ComplexMatrix::diag({1.0, 0.0})));
  write_json_file("fx_i2.json", matrix_to_json(ComplexMatrix::identity(2)));

  // Stone instance: F = span{1, (1,2,3)} under the transposition (0 2).
  FunctionSystem fs(3, {{cxd(1.0), cxd(2.0), cxd(3.0)}});
  write_json_file("fx_F.json", function_system_to_json(fs));
  auto imgs = permutation_images(fs, {2, 1, 0});
  FunctionSystem fsp(3, {imgs[1]});
  write_json_file("fx_Fp.json", function_system_to_json(fsp));
  json stone_map;
  json rows = json::array();
  for (const auto& img : imgs) {
    json row = json::array();
    for (const auto& v : img) row.push_back(json::array({v.real(), v.imag()}));
    rows.push_back(std::move(row));
  }
  stone_map["images"] = rows;
  write_json_file("fx_stone_map.json", stone_map);

  // Diagonal operator system in M_3 and the trace channel restricted to it.
  OperatorSystem diag3 = make_operator_system(
      {ComplexMatrix::diag({1.0, 0.0, 0.0}), ComplexMatrix::diag({0.0, 1.0, 0.0}),
       ComplexMatrix::diag({0.0, 0.0, 1.0})},
      3);
  write_json_file("fx_tau_sys.json", cpmap_to_json(CPMap::trace_state(3, 2).restricted_to(diag3)));
}

}  // namespace

TEST_CASE("cli: check-cp flags the transpose map with exit 2") {
  write_fixtures();
  CliResult r = run_cli("check-cp --map fx_transpose2.json");
  CHECK(r.exit_code == 2);
  CHECK(r.report.at("cp").get<bool>() == false);
  CHECK(r.report.at("min_choi_eigenvalue").get<double>() == doctest::Approx(-1.0));
  CHECK(r.report.at("version").get<std::string>() == "opsyskit 0.1.0");

  CliResult ok = run_cli("check-cp --map fx_id2.json");
  CHECK(ok.exit_code == 0);
  CHECK(ok.report.at("cp").get<bool>() == true);
}

TEST_CASE("cli: invariants of the zero element are |lambda|") {
  CliResult r = run_cli("invariants --x fx_zero2.json");
  REQUIRE(r.exit_code == 0);
  for (const auto& e : r.report.at("profile")) {
    const double re = e.at("lambda")[0].get<double>();
    const double im = e.at("lambda")[1].get<double>();
    CHECK(e.at("value").get<double>() ==
          doctest::Approx(std::sqrt(re * re + im * im)).epsilon(1e-9));
  }
}

TEST_CASE("cli: interval and extend on the scalar system") {
  CliResult r = run_cli(
      "interval --system fx_spanI.json --functional fx_unitf.json --element fx_e11.json");
  REQUIRE(r.exit_code == 0);
  CHECK(r.report.at("beta1").get<double>() == doctest::Approx(0.0).epsilon(1e-5));
  CHECK(r.report.at("beta2").get<double>() == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.report.at("duality_residual").get<double>() <= 1e-6);

  CliResult mid = run_cli(
      "extend --system fx_spanI.json --functional fx_unitf.json --element fx_e11.json "
      "--alpha 0.5");
  REQUIRE(mid.exit_code == 0);
  CHECK(mid.report.at("value").get<double>() == doctest::Approx(0.5).epsilon(1e-5));

  CliResult bad = run_cli(
      "extend --system fx_spanI.json --functional fx_unitf.json --element fx_e11.json "
      "--alpha 1.4");
  CHECK(bad.exit_code == 2);
  CHECK(bad.report.at("status").get<std::string>() == "alpha_out_of_range");
}

TEST_CASE("cli: correspond round-trips its own output") {
  CliResult fwd = run_cli("correspond --map fx_id2.json --output cli_functional.json");
  REQUIRE(fwd.exit_code == 0);
  json f = read_json_file("cli_functional.json");
  write_json_file("cli_f_only.json", f.at("functional"));

  CliResult back = run_cli("correspond --functional cli_f_only.json");
  REQUIRE(back.exit_code == 0);
  CPMap tau = cpmap_from_json(back.report.at("map"));
  CHECK((tau.choi() - CPMap::identity(2).choi()).frobenius_norm() <= 1e-9);
}

TEST_CASE("cli: estimate-c is deterministic under the seed") {
  CliResult a = run_cli("estimate-c --n 2 --delta 0.5 --samples 4000 --seed 7");
  CliResult b = run_cli("estimate-c --n 2 --delta 0.5 --samples 4000 --seed 7");
  REQUIRE(a.exit_code == 0);
  CHECK(a.raw == b.raw);
  const double c = a.report.at("c").get<double>();
  CHECK(c > 0.0);
  CHECK(c < 1.0);

  CliResult diff = run_cli("estimate-c --n 2 --delta 0.5 --samples 4000 --seed 8");
  CHECK(diff.raw != a.raw);
}

TEST_CASE("cli: find-unitary succeeds and fails with honest codes") {
  CliResult good = run_cli("find-unitary --x fx_x3.json --y fx_y3.json --seed 3");
  REQUIRE(good.exit_code == 0);
  CHECK(good.report.at("found").get<bool>());
  CHECK(good.report.at("residual").get<double>() <= 1e-8);

  CliResult bad =
      run_cli("find-unitary --x fx_d10.json --y fx_i2.json --restarts 3 --seed 3");
  CHECK(bad.exit_code == 3);
  CHECK_FALSE(bad.report.at("found").get<bool>());
}

TEST_CASE("cli: stone recovers the transposition") {
  CliResult r = run_cli("stone --F fx_F.json --Fp fx_Fp.json --map fx_stone_map.json");
  REQUIRE(r.exit_code == 0);
  std::vector<int> gamma = r.report.at("gamma").get<std::vector<int>>();
  CHECK(gamma == std::vector<int>{2, 1, 0});
}

TEST_CASE("cli: invariant-state and faithful-extend") {
  CliResult inv = run_cli("invariant-state --map fx_id2.json --c 0.5");
  REQUIRE(inv.exit_code == 0);
  CHECK(inv.report.at("invariance_residual").get<double>() <= 1e-8);

  CliResult fx = run_cli("faithful-extend --map fx_tau_sys.json");
  REQUIRE(fx.exit_code == 0);
  CHECK(fx.report.at("t_star").get<double>() > 1e-6);
  CHECK(fx.report.at("agreement_residual").get<double>() <= 1e-7);
}

TEST_CASE("cli: paulsen embedding report and cocycle check") {
  Rng rng(2053);
  json gens;
  gens["ambient_dim"] = 2;
  json list = json::array();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) list.push_back(matrix_to_json(ComplexMatrix::unit(2, i, j)));
  gens["generators"] = list;
  write_json_file("fx_paulsen_gens.json", gens);
  write_json_file("fx_u2.json", matrix_to_json(haar_unitary(rng, 2)));
  write_json_file("fx_v2.json", matrix_to_json(haar_unitary(rng, 2)));

  CliResult r = run_cli(
      "paulsen --generators fx_paulsen_gens.json --check-cocycle --u fx_u2.json "
      "--v fx_v2.json --seed 5");
  REQUIRE(r.exit_code == 0);
  CHECK(r.report.at("algebra_dim").get<int>() == 16);
  CHECK(r.report.at("corner_dims").at("12").get<int>() == 4);
  CHECK(r.report.at("max_cocycle_residual").get<double>() <= 1e-8);

  // Deterministic report bytes under a fixed seed.
  CliResult again = run_cli(
      "paulsen --generators fx_paulsen_gens.json --check-cocycle --u fx_u2.json "
      "--v fx_v2.json --seed 5");
  CHECK(r.raw == again.raw);
}

TEST_CASE("cli: haar-avg emits the fit and the averaged element") {
  CliResult r = run_cli("haar-avg --n 2 --delta 0.6 --samples 3000 --seed 9 --x fx_e11.json");
  REQUIRE(r.exit_code == 0);
  CHECK(r.report.at("c").get<double>() > 0.0);
  CHECK(r.report.at("c").get<double>() < 1.0);
  CHECK(r.report.at("trace_residual").get<double>() <= 1e-10);
  ComplexMatrix avg = matrix_from_json(r.report.at("average"));
  CHECK(std::abs(avg.trace() - 1.0) <= 1e-10);
}

TEST_CASE("cli: choi emits the Choi matrix") {
  CliResult r = run_cli("choi --map fx_id2.json");
  REQUIRE(r.exit_code == 0);
  ComplexMatrix c = matrix_from_json(r.report.at("choi"));
  CHECK((c - CPMap::identity(2).choi()).frobenius_norm() <= 1e-12);
}

TEST_CASE("cli: usage errors exit with 1, help exits with 0") {
  CliResult r = run_cli("no-such-command");
  CHECK(r.exit_code == 1);
  CliResult missing = run_cli("check-cp");
  CHECK(missing.exit_code == 1);
  CliResult help = run_cli("--help");
  CHECK(help.exit_code == 0);
}

TEST_CASE("json round-trips preserve values") {
  Rng rng(2052);
  ComplexMatrix m = random_matrix(rng, 3, 2);
  ComplexMatrix m2 = matrix_from_json(json::parse(matrix_to_json(m).dump()));
  CHECK((m - m2).frobenius_norm() <= 1e-12);

  OperatorSystem s = make_operator_system({random_matrix(rng, 2, 2)}, 2);
  OperatorSystem s2 = operator_system_from_json(json::parse(operator_system_to_json(s).dump()));
  CHECK(s2.dim() == s.dim());
  for (int k = 0; k < s.dim(); ++k)
    CHECK((s.basis()[k] - s2.basis()[k]).frobenius_norm() <= 1e-12);

  CPMap tau = CPMap::trace_state(2, 3);
  CPMap tau2 = cpmap_from_json(json::parse(cpmap_to_json(tau).dump()));
  CHECK((tau.choi() - tau2.choi()).frobenius_norm() <= 1e-12);

  PositiveFunctional f = functional_from_cpmap(tau);
  PositiveFunctional f2 = functional_from_json(json::parse(functional_to_json(f).dump()));
  for (size_t i = 0; i < f.values().size(); ++i)
    CHECK(std::abs(f.values()[i] - f2.values()[i]) <= 1e-12);
}
