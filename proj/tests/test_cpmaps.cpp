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

#include <cmath>

#include "osk/cpmaps.hpp"

using namespace osk;

namespace {

CPMap random_cp_map(Rng& rng, int m, int n, int kraus_count = 3) {
  std::vector<ComplexMatrix> kraus;
  for (int k = 0; k < kraus_count; ++k) kraus.push_back(random_matrix(rng, n, m));
  return CPMap::from_kraus(m, n, kraus);
}

// Random UCP map: random PSD Choi, unitality restored by conjugating the
// output factor with the inverse square root of the reduced matrix.
CPMap random_ucp_map(Rng& rng, int m, int n) {
  ComplexMatrix g = random_matrix(rng, m * n, m * n);
  ComplexMatrix w = g * g.adjoint();
  ComplexMatrix r = partial_trace(w, m, n, Factor::First);
  EigResult e = hermitian_eig(r, 1e-8);
  ComplexMatrix rinv_sqrt(n, n);
  for (int k = 0; k < n; ++k) {
    const double lam = 1.0 / std::sqrt(std::max(e.eigenvalues[k], 1e-14));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        rinv_sqrt(i, j) += cxd(lam) * e.eigenvectors(i, k) * std::conj(e.eigenvectors(j, k));
  }
  ComplexMatrix fix = kron(ComplexMatrix::identity(m), rinv_sqrt);
  return CPMap::from_choi(m, n, fix * w * fix.adjoint());
}

}  // namespace

TEST_CASE("choi matrix of canonical maps") {
  // Identity on M_2: twice the maximally entangled projector.
  CPMap id2 = CPMap::identity(2);
  EigResult e = hermitian_eig(id2.choi());
  CHECK(e.eigenvalues[0] == doctest::Approx(0.0));
  CHECK(e.eigenvalues[1] == doctest::Approx(0.0));
  CHECK(e.eigenvalues[2] == doctest::Approx(0.0));
  CHECK(e.eigenvalues[3] == doctest::Approx(2.0));

  // x -> tr0(x) I_2: brute-force sum of the four defining terms.
  CPMap ts = CPMap::trace_state(2, 2);
  ComplexMatrix expected(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      expected += kron(ComplexMatrix::unit(2, i, j),
                       ComplexMatrix::identity(2) * cxd(i == j ? 0.5 : 0.0));
  CHECK((ts.choi() - expected).frobenius_norm() <= 1e-14);

  // Transpose map: Choi is the swap operator with eigenvalues {-1, 1, 1, 1}.
  std::vector<ComplexMatrix> timages;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) timages.push_back(ComplexMatrix::unit(2, j, i));
  CPMap transpose2 = CPMap::from_matrix_unit_images(2, 2, timages);
  CHECK(transpose2.min_choi_eigenvalue() == doctest::Approx(-1.0));
  CHECK_FALSE(transpose2.is_cp());
  CHECK(id2.is_cp());
}

TEST_CASE("apply recovers the map from its Choi matrix") {
  Rng rng(31);
  CPMap tau = random_cp_map(rng, 3, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      ComplexMatrix x = ComplexMatrix::unit(3, i, j);
      ComplexMatrix direct = partial_trace(
          kron(x.transpose(), ComplexMatrix::identity(2)) * tau.choi(), 3, 2, Factor::First);
      CHECK((tau.apply(x) - direct).frobenius_norm() <= 1e-12);
    }
  // Kraus consistency.
  ComplexMatrix y = random_matrix(rng, 3, 3);
  CHECK((tau.apply(y.hermitian_part()).adjoint() - tau.apply(y.hermitian_part()))
            .frobenius_norm() <= 1e-10);
}

TEST_CASE("apply_dual is the trace dual") {
  Rng rng(32);
  CPMap tau = random_cp_map(rng, 3, 2);
  ComplexMatrix x = random_matrix(rng, 3, 3);
  ComplexMatrix rho = random_matrix(rng, 2, 2);
  cxd lhs = (tau.apply_dual(rho) * x).trace();
  cxd rhs = (rho * tau.apply(x)).trace();
  CHECK(std::abs(lhs - rhs) <= 1e-10);
}

TEST_CASE("functional from the identity map") {
  CPMap id2 = CPMap::identity(2);
  PositiveFunctional s = functional_from_cpmap(id2);

  CHECK(std::abs(s.evaluate(ComplexMatrix::identity(4)) - 1.0) <= 1e-12);
  CHECK(s.is_state());

  Rng rng(33);
  ComplexMatrix x = random_matrix(rng, 2, 2);
  cxd v = s.evaluate(kron(x, ComplexMatrix::identity(2)));
  CHECK(std::abs(v - x.trace() / 2.0) <= 1e-12);
}

TEST_CASE("functional identities s(x (x) I) = tr0(tau(x))") {
  Rng rng(34);
  for (int trial = 0; trial < 6; ++trial) {
    const int m = 2 + trial % 3;
    const int n = 2 + trial % 2;
    CPMap tau = random_cp_map(rng, m, n);
    PositiveFunctional s = functional_from_cpmap(tau);
    for (const auto& b : hermitian_basis(m)) {
      cxd lhs = s.evaluate(kron(b, ComplexMatrix::identity(n)));
      cxd rhs = normalized_trace(tau.apply(b));
      CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
  }
  // tau = trace_state: s([x_ij]) = (1/n) sum_i tr0(x_ii).
  CPMap ts = CPMap::trace_state(2, 2);
  PositiveFunctional s = functional_from_cpmap(ts);
  ComplexMatrix y(4, 4);
  Rng rng2(35);
  ComplexMatrix x00 = random_matrix(rng2, 2, 2), x11 = random_matrix(rng2, 2, 2);
  y += kron(x00, ComplexMatrix::unit(2, 0, 0));
  y += kron(x11, ComplexMatrix::unit(2, 1, 1));
  cxd expected = (normalized_trace(x00) + normalized_trace(x11)) / 2.0;
  CHECK(std::abs(s.evaluate(y) - expected) <= 1e-12);
}

TEST_CASE("cpmap_from_functional: worked cases") {
  // Density = maximally entangled projector gives the identity map.
  ComplexMatrix p(4, 4);
  p(0, 0) = 0.5;
  p(0, 3) = 0.5;
  p(3, 0) = 0.5;
  p(3, 3) = 0.5;
  PositiveFunctional s = PositiveFunctional::from_density(2, 2, p);
  CPMap tau = cpmap_from_functional(s);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      ComplexMatrix u = ComplexMatrix::unit(2, i, j);
      CHECK((tau.apply(u) - u).frobenius_norm() <= 1e-10);
    }

  // s = tr/(n m) gives x -> tr0(x) I.
  PositiveFunctional s2 =
      PositiveFunctional::from_density(2, 2, ComplexMatrix::identity(4) * cxd(0.25));
  CPMap tau2 = cpmap_from_functional(s2);
  CPMap expected = CPMap::trace_state(2, 2);
  CHECK((tau2.choi() - expected.choi()).frobenius_norm() <= 1e-10);

  // Negative control: a non-positive functional is rejected.
  ComplexMatrix bad = ComplexMatrix::diag({1.0, 1.0, 1.0, -1.0});
  CHECK_THROWS_AS(cpmap_from_functional(PositiveFunctional::from_density(2, 2, bad)),
                  NotPositiveError);
}

TEST_CASE("correspondence roundtrips on random CP maps") {
  Rng rng(36);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + trial % 3;
    const int n = 2 + (trial / 2) % 3;
    CPMap tau = random_cp_map(rng, m, n);
    CPMap back = cpmap_from_functional(functional_from_cpmap(tau));
    CHECK((back.choi() - tau.choi()).frobenius_norm() <= 1e-10);
  }
  // Reverse roundtrip on the functional side.
  CPMap tau = random_cp_map(rng, 2, 3);
  PositiveFunctional s = functional_from_cpmap(tau);
  PositiveFunctional s2 = functional_from_cpmap(cpmap_from_functional(s));
  for (size_t i = 0; i < s.values().size(); ++i)
    CHECK(std::abs(s.values()[i] - s2.values()[i]) <= 1e-10);
}

TEST_CASE("tau CP iff Choi PSD") {
  Rng rng(37);
  for (int trial = 0; trial < 5; ++trial) {
    CPMap tau = random_cp_map(rng, 2, 2);
    CHECK(tau.min_choi_eigenvalue() >= -1e-10);
    CHECK(tau.is_cp());
  }
}

TEST_CASE("weighted functional") {
  // Uniform weights reproduce the plain correspondence identity.
  Rng rng(38);
  CPMap tau = random_ucp_map(rng, 2, 2);
  StateWeights uniform({cxd(1.0), cxd(1.0)});
  PositiveFunctional su = weighted_functional(tau, uniform);
  for (const auto& b : hermitian_basis(2)) {
    cxd lhs = su.evaluate(kron(b, ComplexMatrix::identity(2)));
    CHECK(std::abs(lhs - normalized_trace(tau.apply(b))) <= 1e-10);
  }

  // n=2, weights (sqrt(1/3), sqrt(2/3)), tau identity:
  // s(x (x) I) = x_11/3 + 2 x_22/3.
  StateWeights w({cxd(std::sqrt(1.0 / 3.0)), cxd(std::sqrt(2.0 / 3.0))});
  PositiveFunctional sw = weighted_functional(CPMap::identity(2), w);
  ComplexMatrix x = random_matrix(rng, 2, 2);
  cxd expected = x(0, 0) / 3.0 + x(1, 1) * (2.0 / 3.0);
  CHECK(std::abs(sw.evaluate(kron(x, ComplexMatrix::identity(2))) - expected) <= 1e-12);

  // The general identity s_{tau,lambda}(x (x) I) = phi_0(tau(x)).
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2 + trial % 2;
    CPMap t = random_ucp_map(rng, 3, n);
    std::vector<cxd> lam;
    for (int i = 0; i < n; ++i) lam.push_back(rng.complex_gaussian() + cxd(2.0));
    StateWeights sw2(lam);
    PositiveFunctional f = weighted_functional(t, sw2);
    ComplexMatrix phi0 = sw2.phi0_density();
    for (const auto& b : hermitian_basis(3)) {
      cxd lhs = f.evaluate(kron(b, ComplexMatrix::identity(n)));
      cxd rhs = (phi0 * t.apply(b)).trace();
      CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
    // Positivity is preserved by the Schur weighting.
    CHECK(f.positivity_min(24, 100 + trial) >= -1e-10);
  }

  CHECK_THROWS_AS(StateWeights({cxd(1.0), cxd(0.0)}), WeightMismatchError);
  CHECK_THROWS_AS(weighted_functional(tau, StateWeights({cxd(1.0), cxd(1.0), cxd(1.0)})),
                  WeightMismatchError);
}

TEST_CASE("functional_from_cpmap checks a supplied level") {
  CPMap ts = CPMap::trace_state(2, 3);
  CHECK_NOTHROW(functional_from_cpmap(ts, 3));
  CHECK_THROWS_AS(functional_from_cpmap(ts, 2), LevelMismatchError);
}

TEST_CASE("functionals respect the adjoint: f(Y*) = conj(f(Y))") {
  Rng rng(43);
  CPMap tau = random_cp_map(rng, 2, 3);
  PositiveFunctional s = functional_from_cpmap(tau);
  for (int trial = 0; trial < 5; ++trial) {
    ComplexMatrix y = random_matrix(rng, 6, 6);
    CHECK(std::abs(s.evaluate(y.adjoint()) - std::conj(s.evaluate(y))) <= 1e-10);
  }
}

TEST_CASE("is_faithful on full-domain maps") {
  CHECK(is_faithful(CPMap::identity(2)));
  CHECK(is_faithful(CPMap::trace_state(2, 2)));

  // x -> tr(x e_11) I kills e_22.
  std::vector<ComplexMatrix> images(4, ComplexMatrix(2, 2));
  images[0] = ComplexMatrix::identity(2);
  CPMap killer = CPMap::from_matrix_unit_images(2, 2, images);
  CHECK((killer.apply(ComplexMatrix::unit(2, 1, 1))).frobenius_norm() <= 1e-14);
  CHECK_FALSE(is_faithful(killer));
}

TEST_CASE("kadison_schwarz_check") {
  Rng rng(39);
  CPMap id2 = CPMap::identity(2);
  for (int trial = 0; trial < 4; ++trial) {
    ComplexMatrix x = random_matrix(rng, 2, 2);
    CHECK(std::abs(kadison_schwarz_check(id2, x)) <= 1e-10);
  }

  // tau = trace_state, x = e_12: tau(x*x) = I/2, tau(x*)tau(x) = 0.
  CPMap ts = CPMap::trace_state(2, 2);
  CHECK(kadison_schwarz_check(ts, ComplexMatrix::unit(2, 0, 1)) == doctest::Approx(0.5));

  for (int trial = 0; trial < 6; ++trial) {
    const int m = 2 + trial % 2;
    CPMap tau = random_ucp_map(rng, m, m);
    REQUIRE(tau.is_unital(1e-8));
    ComplexMatrix x = random_matrix(rng, m, m);
    CHECK(kadison_schwarz_check(tau, x) >= -1e-9);
  }
}

TEST_CASE("fixed_point_algebra") {
  // Identity on M_2 fixes everything.
  CHECK(fixed_point_algebra(CPMap::identity(2)).size() == 4);

  // Conjugation by diag(1, i) fixes exactly the diagonal algebra.
  ComplexMatrix u = ComplexMatrix::diag({cxd(1.0), cxd(0.0, 1.0)});
  auto basis = fixed_point_algebra(CPMap::conjugation(u));
  CHECK(basis.size() == 2);
  for (const auto& b : basis) {
    CHECK(std::abs(b(0, 1)) <= 1e-10);
    CHECK(std::abs(b(1, 0)) <= 1e-10);
  }

  // Full depolarization fixes only the scalars.
  CHECK(fixed_point_algebra(CPMap::trace_state(2, 2)).size() == 1);

  // p id + (1-p) Ad(u) fixes the commutant of u.
  Rng rng(40);
  ComplexMatrix w = haar_unitary(rng, 3);
  ComplexMatrix sq = w * cxd(std::sqrt(0.4));
  ComplexMatrix sid = ComplexMatrix::identity(3) * cxd(std::sqrt(0.6));
  CPMap mix = CPMap::from_kraus(3, 3, {sid, sq});
  auto fixed = fixed_point_algebra(mix);
  CHECK(fixed.size() == 3);  // w has distinct eigenvalues almost surely
  for (const auto& b : fixed)
    CHECK((w * b - b * w).frobenius_norm() <= 1e-7);

  // No faithful invariant state: x -> tr(x e_11) I has only e_11 invariant.
  std::vector<ComplexMatrix> images(4, ComplexMatrix(2, 2));
  images[0] = ComplexMatrix::identity(2);
  CPMap killer = CPMap::from_matrix_unit_images(2, 2, images);
  CHECK_THROWS_AS(fixed_point_algebra(killer), NoFaithfulInvariantStateError);
}

TEST_CASE("invariant_state finds the stationary density") {
  Rng rng(41);
  ComplexMatrix u = haar_unitary(rng, 3);
  auto rho = invariant_state(CPMap::conjugation(u));
  REQUIRE(rho.has_value());
  CHECK((*rho - ComplexMatrix::identity(3) * cxd(1.0 / 3.0)).frobenius_norm() <= 1e-8);

  CPMap ucp = random_ucp_map(rng, 3, 3);
  auto rho2 = invariant_state(ucp);
  REQUIRE(rho2.has_value());
  CHECK((ucp.apply_dual(*rho2) - *rho2).frobenius_norm() <= 1e-8);
  CHECK(std::abs(rho2->trace() - 1.0) <= 1e-8);
}

TEST_CASE("restriction to an operator system") {
  Rng rng(42);
  OperatorSystem s = make_operator_system({random_matrix(rng, 3, 3)}, 3);
  CPMap full = random_ucp_map(rng, 3, 2);
  CPMap restricted = full.restricted_to(s);
  CHECK(restricted.domain() == CPMap::Domain::System);
  for (int k = 0; k < s.dim(); ++k)
    CHECK((restricted.apply(s.basis()[k]) - full.apply(s.basis()[k])).frobenius_norm() <= 1e-10);
  CHECK_THROWS_AS(restricted.choi(), DomainNotFullAlgebraError);
  // Elements outside the span are rejected.
  CHECK_THROWS_AS(restricted.apply(random_matrix(rng, 3, 3)), InvalidInputError);
}
