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

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "osk/extend.hpp"
#include "osk/haar.hpp"
#include "osk/iso.hpp"
#include "osk/json_io.hpp"

namespace {

constexpr const char* kVersion = "opsyskit 0.1.0";

// Exit codes: 0 success/feasible, 1 usage or parse error, 2 infeasible or
// negative certificate, 3 numerical failure / inconclusive.
enum ExitCode { kOk = 0, kUsage = 1, kNegative = 2, kNumerical = 3 };

struct Output {
  std::string path;  // empty = stdout

  int emit(osk::json report, int code) const {
    report["version"] = kVersion;
    if (path.empty())
      std::cout << report.dump(2) << "\n";
    else
      osk::write_json_file(path, report);
    return code;
  }
};

osk::json certificate_json(const std::vector<double>& cert, double slack) {
  osk::json j;
  j["combination"] = cert;
  j["max_eigenvalue"] = slack;
  return j;
}

int run(CLI::App& app, int argc, char** argv) {
  using namespace osk;

  Output out;
  app.add_option("--output", out.path, "write the JSON report to a file instead of stdout");
  app.fallthrough();
  app.require_subcommand(1);

  // --- check-cp ------------------------------------------------------
  auto* check_cp = app.add_subcommand("check-cp", "complete positivity of a map");
  std::string cc_map;
  double cc_tol = 1e-10;
  int64_t cc_seed = -1;
  check_cp->add_option("--map", cc_map, "CP map JSON")->required();
  check_cp->add_option("--tol", cc_tol, "PSD tolerance");
  check_cp->add_option("--seed", cc_seed, "sampling seed (system-domain maps)");
  check_cp->callback([&]() {
    CPMap tau = cpmap_from_json(read_json_file(cc_map));
    json rep;
    bool cp = false;
    if (tau.domain() == CPMap::Domain::Full) {
      const double mineig = tau.min_choi_eigenvalue();
      cp = mineig >= -cc_tol;
      rep["min_choi_eigenvalue"] = mineig;
    } else {
      if (cc_seed < 0) throw InvalidInputError("--seed is required for system-domain maps");
      Rng rng(static_cast<uint64_t>(cc_seed));
      double worst = 0.0;
      for (int s = 0; s < 64; ++s) {
        ComplexMatrix y = sample_level_positive(tau.system(), 1, rng);
        std::vector<cxd> coords = tau.system().project(y);
        ComplexMatrix img(tau.output_dim(), tau.output_dim());
        for (int k = 0; k < tau.system().dim(); ++k) img += tau.basis_images()[k] * coords[k];
        worst = std::min(worst, min_eigenvalue(img.hermitian_part(), 1e-7));
      }
      cp = worst >= -cc_tol;
      rep["min_sampled_eigenvalue"] = worst;
    }
    rep["cp"] = cp;
    rep["unital"] = tau.is_unital(1e-8);
    std::exit(out.emit(rep, cp ? kOk : kNegative));
  });

  // --- choi ----------------------------------------------------------
  auto* choi_cmd = app.add_subcommand("choi", "Choi matrix of a full-domain map");
  std::string ch_map;
  choi_cmd->add_option("--map", ch_map, "CP map JSON")->required();
  choi_cmd->callback([&]() {
    CPMap tau = cpmap_from_json(read_json_file(ch_map));
    json rep;
    rep["choi"] = matrix_to_json(tau.choi());
    rep["min_choi_eigenvalue"] = tau.min_choi_eigenvalue();
    std::exit(out.emit(rep, kOk));
  });

  // --- correspond ----------------------------------------------------
  auto* corr = app.add_subcommand("correspond",
                                  "CP map <-> positive functional correspondence");
  std::string co_map, co_fun;
  int64_t co_seed = -1;
  corr->add_option("--map", co_map, "CP map JSON (emit its functional)");
  corr->add_option("--functional", co_fun, "functional JSON (emit its map)");
  corr->add_option("--seed", co_seed, "positivity sampling seed (system-domain functionals)");
  corr->callback([&]() {
    if (co_map.empty() == co_fun.empty())
      throw InvalidInputError("pass exactly one of --map / --functional");
    json rep;
    if (!co_map.empty()) {
      CPMap tau = cpmap_from_json(read_json_file(co_map));
      PositiveFunctional s = functional_from_cpmap(tau);
      rep["functional"] = functional_to_json(s);
      rep["is_state"] = s.is_state(1e-8);
    } else {
      PositiveFunctional s = functional_from_json(read_json_file(co_fun));
      if (!s.on_full_algebra() && co_seed < 0)
        throw InvalidInputError("--seed is required for system-domain functionals");
      CPMap tau = cpmap_from_functional(s, co_seed < 0 ? 2026 : static_cast<uint64_t>(co_seed));
      rep["map"] = cpmap_to_json(tau);
      rep["unital"] = tau.is_unital(1e-8);
    }
    std::exit(out.emit(rep, kOk));
  });

  // --- extend ----------------------------------------------------------
  auto* ext = app.add_subcommand("extend", "positive extension with a prescribed value");
  std::string ex_sys, ex_fun, ex_elem;
  double ex_alpha = 0.0;
  ext->add_option("--system", ex_sys, "operator system JSON")->required();
  ext->add_option("--functional", ex_fun, "functional JSON on the system")->required();
  ext->add_option("--element", ex_elem, "PSD element JSON")->required();
  ext->add_option("--alpha", ex_alpha, "prescribed value g(x)")->required();
  ext->callback([&]() {
    OperatorSystem s = operator_system_from_json(read_json_file(ex_sys));
    PositiveFunctional f = functional_from_json(read_json_file(ex_fun));
    ComplexMatrix x = matrix_from_json(read_json_file(ex_elem));
    json rep;
    try {
      ComplexMatrix rho = extend_functional(s, f, x, ex_alpha);
      rep["rho"] = matrix_to_json(rho);
      rep["value"] = (rho * x).trace().real();
      rep["min_eigenvalue"] = min_eigenvalue(rho.hermitian_part());
      std::exit(out.emit(rep, kOk));
    } catch (const AlphaOutOfRangeError&) {
      rep["status"] = "alpha_out_of_range";
      std::exit(out.emit(rep, kNegative));
    } catch (const InfeasibleError&) {
      SdpResult base = state_extension_feasibility(s, f);
      rep["status"] = "infeasible";
      rep["certificate"] = certificate_json(base.certificate, base.certificate_slack);
      std::exit(out.emit(rep, kNegative));
    }
  });

  // --- interval --------------------------------------------------------
  auto* itv = app.add_subcommand("interval", "extension value interval [beta1, beta2]");
  std::string iv_sys, iv_fun, iv_elem;
  itv->add_option("--system", iv_sys, "operator system JSON")->required();
  itv->add_option("--functional", iv_fun, "functional JSON on the system")->required();
  itv->add_option("--element", iv_elem, "PSD element JSON")->required();
  itv->callback([&]() {
    OperatorSystem s = operator_system_from_json(read_json_file(iv_sys));
    PositiveFunctional f = functional_from_json(read_json_file(iv_fun));
    ComplexMatrix x = matrix_from_json(read_json_file(iv_elem));
    json rep;
    try {
      ExtensionInterval interval = extension_interval(s, f, x);
      MinkowskiResult mk = minkowski_value(s, f, x.hermitian_part());
      rep["beta1"] = interval.beta1;
      rep["beta2"] = interval.beta2;
      rep["minkowski_value"] = mk.p_value;
      rep["duality_residual"] = std::abs(mk.p_value - interval.beta2);
      rep["rho_min"] = matrix_to_json(interval.rho_min);
      rep["rho_max"] = matrix_to_json(interval.rho_max);
      std::exit(out.emit(rep, kOk));
    } catch (const InfeasibleError&) {
      SdpResult base = state_extension_feasibility(s, f);
      rep["status"] = "infeasible";
      rep["certificate"] = certificate_json(base.certificate, base.certificate_slack);
      std::exit(out.emit(rep, kNegative));
    }
  });

  // --- faithful-extend -------------------------------------------------
  auto* fx = app.add_subcommand("faithful-extend", "faithful UCP extension to M_m");
  std::string fx_map;
  double fx_tol = 1e-6;
  fx->add_option("--map", fx_map, "UCP map JSON (system domain)")->required();
  fx->add_option("--tol", fx_tol, "positivity threshold for the reduced Choi");
  fx->callback([&]() {
    CPMap tau = cpmap_from_json(read_json_file(fx_map));
    if (!is_faithful(tau)) {
      json rep;
      rep["faithful_input"] = false;
      std::exit(out.emit(rep, kNegative));
    }
    FaithfulExtension fe = faithful_extension(tau, fx_tol);
    double agree = 0.0;
    if (tau.domain() == CPMap::Domain::System)
      for (int k = 0; k < tau.system().dim(); ++k)
        agree = std::max(agree, operator_norm(fe.eta.apply(tau.system().basis()[k]) -
                                              tau.basis_images()[k]));
    json rep;
    rep["eta"] = cpmap_to_json(fe.eta);
    rep["t_star"] = fe.t_star;
    rep["agreement_residual"] = agree;
    std::exit(out.emit(rep, kOk));
  });

  // --- haar-avg ---------------------------------------------------------
  auto* havg = app.add_subcommand("haar-avg", "Monte Carlo averaged conjugation");
  int ha_n = 2;
  double ha_delta = 0.5;
  int ha_samples = 10000;
  int64_t ha_seed = -1;
  std::string ha_x;
  havg->add_option("--n", ha_n, "unitary dimension")->required();
  havg->add_option("--delta", ha_delta, "neighborhood radius")->required();
  havg->add_option("--samples", ha_samples, "Monte Carlo samples")->required();
  havg->add_option("--seed", ha_seed, "sampler seed")->required();
  havg->add_option("--x", ha_x, "optional element JSON to average");
  havg->callback([&]() {
    HaarNeighborhood nb(ha_n, ha_delta, static_cast<uint64_t>(ha_seed));
    json rep;
    if (!ha_x.empty()) {
      ComplexMatrix x = matrix_from_json(read_json_file(ha_x));
      ComplexMatrix avg = average_conjugation(nb, x, ha_samples);
      rep["average"] = matrix_to_json(avg);
      rep["trace_residual"] = std::abs(avg.trace() - x.trace());
    }
    CFit fit = fit_c(nb, ha_samples);
    rep["c"] = fit.estimate.c;
    rep["half_width"] = fit.estimate.half_width;
    rep["max_rel_off_model"] = fit.max_rel_off_model;
    std::exit(out.emit(rep, kOk));
  });

  // --- estimate-c -------------------------------------------------------
  auto* estc = app.add_subcommand("estimate-c", "depolarizing constant of a neighborhood");
  int ec_n = 2;
  double ec_delta = 0.5;
  int ec_samples = 20000;
  int64_t ec_seed = -1;
  estc->add_option("--n", ec_n, "unitary dimension")->required();
  estc->add_option("--delta", ec_delta, "neighborhood radius")->required();
  estc->add_option("--samples", ec_samples, "Monte Carlo samples")->required();
  estc->add_option("--seed", ec_seed, "sampler seed")->required();
  estc->callback([&]() {
    HaarNeighborhood nb(ec_n, ec_delta, static_cast<uint64_t>(ec_seed));
    CEstimate est = estimate_c(nb, ec_samples);
    json rep;
    rep["c"] = est.c;
    rep["half_width"] = est.half_width;
    std::exit(out.emit(rep, kOk));
  });

  // --- invariant-state ---------------------------------------------------
  auto* ist = app.add_subcommand("invariant-state",
                                 "invariant state of the depolarized map via the series");
  std::string is_map;
  double is_c = 0.5, is_tol = 1e-12;
  ist->add_option("--map", is_map, "UCP map JSON on M_m")->required();
  ist->add_option("--c", is_c, "depolarizing constant in (0, 1)")->required();
  ist->add_option("--tol", is_tol, "series truncation tolerance");
  ist->callback([&]() {
    CPMap tau = cpmap_from_json(read_json_file(is_map));
    PositiveFunctional phi = invariant_state_series(tau, is_c, is_tol);
    ComplexMatrix rho = phi.density();
    CPMap tau_c = depolarizing_map(tau.input_dim(), is_c).compose(tau);
    json rep;
    rep["density"] = matrix_to_json(rho);
    rep["invariance_residual"] = (tau_c.apply_dual(rho) - rho).frobenius_norm();
    rep["min_eigenvalue"] = min_eigenvalue(rho);
    std::exit(out.emit(rep, kOk));
  });

  // --- invariants ---------------------------------------------------------
  auto* inv = app.add_subcommand("invariants", "norm invariant profile of an element");
  std::string in_x, in_grid = "default";
  int in_kmax = 3;
  inv->add_option("--x", in_x, "element JSON")->required();
  inv->add_option("--kmax", in_kmax, "largest amplification level");
  inv->add_option("--grid", in_grid, "lambda grid (only \"default\" is defined)");
  inv->callback([&]() {
    if (in_grid != "default") throw InvalidInputError("unknown lambda grid: " + in_grid);
    ComplexMatrix x = matrix_from_json(read_json_file(in_x));
    std::vector<int> ks;
    for (int k = 1; k <= in_kmax; ++k) ks.push_back(k);
    json rep;
    json samples = json::array();
    for (const auto& s : invariant_profile(x, ks, default_lambda_grid(x))) {
      json e;
      e["k"] = s.k;
      e["lambda"] = json::array({s.lambda.real(), s.lambda.imag()});
      e["value"] = s.value;
      samples.push_back(std::move(e));
    }
    rep["profile"] = std::move(samples);
    rep["norm"] = operator_norm(x);
    std::exit(out.emit(rep, kOk));
  });

  // --- find-unitary ---------------------------------------------------------
  auto* fu = app.add_subcommand("find-unitary", "unitary with u x u* = y");
  std::string fu_x, fu_y;
  double fu_tol = 1e-8;
  int fu_restarts = 16;
  int64_t fu_seed = -1;
  fu->add_option("--x", fu_x, "element JSON")->required();
  fu->add_option("--y", fu_y, "target JSON")->required();
  fu->add_option("--tol", fu_tol, "acceptance residual (operator norm)");
  fu->add_option("--restarts", fu_restarts, "optimizer restarts");
  fu->add_option("--seed", fu_seed, "restart seed")->required();
  fu->callback([&]() {
    ComplexMatrix x = matrix_from_json(read_json_file(fu_x));
    ComplexMatrix y = matrix_from_json(read_json_file(fu_y));
    FindUnitaryResult res = find_implementing_unitary(x, y, fu_tol, fu_restarts,
                                                      static_cast<uint64_t>(fu_seed));
    json rep;
    rep["found"] = res.found;
    rep["residual"] = res.residual;
    rep["restarts_used"] = res.restarts_used;
    if (res.found) rep["u"] = matrix_to_json(res.u);
    std::exit(out.emit(rep, res.found ? kOk : kNumerical));
  });

  // --- paulsen ---------------------------------------------------------
  auto* pl = app.add_subcommand("paulsen", "2x2 block embedding of an operator space");
  std::string pl_gens, pl_u, pl_v;
  bool pl_cocycle = false;
  int pl_trials = 20;
  int64_t pl_seed = -1;
  double pl_tol = 1e-8;
  pl->add_option("--generators", pl_gens,
                 "operator space JSON ({\"ambient_dim\": m, \"generators\": [...]})")
      ->required();
  pl->add_flag("--check-cocycle", pl_cocycle, "verify the corner cocycle relation");
  pl->add_option("--u", pl_u, "left unitary JSON for the attached isomorphism");
  pl->add_option("--v", pl_v, "right unitary JSON for the attached isomorphism");
  pl->add_option("--trials", pl_trials, "random triples for the cocycle check");
  pl->add_option("--seed", pl_seed, "triple sampling seed");
  pl->add_option("--tol", pl_tol, "cocycle residual tolerance");
  pl->callback([&]() {
    json space_json = read_json_file(pl_gens);
    const int m = space_json.at("ambient_dim").get<int>();
    std::vector<ComplexMatrix> gens;
    for (const auto& g : space_json.at("generators")) gens.push_back(matrix_from_json(g));
    PaulsenSystem ps = paulsen_embed(gens, m);
    json rep;
    rep["system_dim"] = ps.system.dim();
    rep["algebra_dim"] = static_cast<int>(ps.algebra.size());
    json corners;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        corners[std::to_string(i + 1) + std::to_string(j + 1)] =
            static_cast<int>(ps.corners[i][j].size());
    rep["corner_dims"] = std::move(corners);
    int code = kOk;
    if (pl_cocycle) {
      if (pl_u.empty() || pl_v.empty() || pl_seed < 0)
        throw InvalidInputError("--check-cocycle needs --u, --v and --seed");
      ComplexMatrix u = matrix_from_json(read_json_file(pl_u));
      ComplexMatrix v = matrix_from_json(read_json_file(pl_v));
      PaulsenIso iso = paulsen_iso_from_two_sided(u, v);
      Rng rng(static_cast<uint64_t>(pl_seed));
      double worst = 0.0;
      for (int t = 0; t < pl_trials; ++t) {
        ComplexMatrix a(m, m), b(m, m), c(m, m);
        for (const auto& e : ps.corners[0][0]) a += e * rng.complex_gaussian();
        for (const auto& e : ps.corners[0][1]) b += e * rng.complex_gaussian();
        for (const auto& e : ps.corners[1][1]) c += e * rng.complex_gaussian();
        worst = std::max(worst, cocycle_check(ps, iso, a, b, c));
      }
      rep["max_cocycle_residual"] = worst;
      if (worst > pl_tol) code = kNegative;
    }
    std::exit(out.emit(rep, code));
  });

  // --- stone ---------------------------------------------------------
  auto* st = app.add_subcommand("stone", "recover the point map behind an order isomorphism");
  std::string st_f, st_fp, st_map;
  st->add_option("--F", st_f, "source function system JSON")->required();
  st->add_option("--Fp", st_fp, "target function system JSON")->required();
  st->add_option("--map", st_map, "images JSON ({\"images\": [[...], ...]})")->required();
  st->callback([&]() {
    FunctionSystem f = function_system_from_json(read_json_file(st_f));
    FunctionSystem fp = function_system_from_json(read_json_file(st_fp));
    json mj = read_json_file(st_map);
    std::vector<std::vector<cxd>> images;
    for (const auto& row : mj.at("images")) {
      std::vector<cxd> img;
      for (const auto& v : row) img.push_back({v[0].get<double>(), v[1].get<double>()});
      images.push_back(std::move(img));
    }
    std::vector<int> gamma = stone_recover_permutation(f, fp, images);
    json rep;
    rep["gamma"] = gamma;
    std::exit(out.emit(rep, kOk));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator-system numerics toolkit"};
  try {
    return run(app, argc, argv);
  } catch (const osk::InfeasibleError& e) {
    std::cerr << e.what() << "\n";
    return kNegative;
  } catch (const osk::AlphaOutOfRangeError& e) {
    std::cerr << e.what() << "\n";
    return kNegative;
  } catch (const osk::NoConsistentPermutationError& e) {
    std::cerr << e.what() << "\n";
    return kNegative;
  } catch (const osk::NoFaithfulExtensionFoundError& e) {
    std::cerr << e.what() << "\n";
    return kNumerical;
  } catch (const osk::SolverFailureError& e) {
    std::cerr << e.what() << "\n";
    return kNumerical;
  } catch (const osk::InconclusiveError& e) {
    std::cerr << e.what() << "\n";
    return kNumerical;
  } catch (const osk::Error& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
}
