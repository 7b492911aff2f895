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

#include "osk/linalg.hpp"

using namespace osk;

namespace {

ComplexMatrix maximally_entangled_projector2() {
  // |psi> = (|00> + |11>)/sqrt(2) on C^2 (x) C^2, P = |psi><psi|.
  ComplexMatrix p(4, 4);
  p(0, 0) = 0.5;
  p(0, 3) = 0.5;
  p(3, 0) = 0.5;
  p(3, 3) = 0.5;
  return p;
}

}  // namespace

TEST_CASE("hermitian_eig on identity and diagonal matrices") {
  EigResult e = hermitian_eig(ComplexMatrix::identity(3));
  for (double v : e.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  ComplexMatrix d = ComplexMatrix::diag({2.0, -1.0});
  e = hermitian_eig(d);
  CHECK(e.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(e.eigenvalues[1] == doctest::Approx(2.0));
}

TEST_CASE("hermitian_eig on the symmetric flip") {
  // Characteristic polynomial of [[0,1],[1,0]] is t^2 - 1.
  ComplexMatrix x(2, 2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  EigResult e = hermitian_eig(x);
  CHECK(e.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(e.eigenvalues[1] == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  ComplexMatrix x(2, 2);
  x(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eig(x), NotHermitianError);
}

TEST_CASE("hermitian_eig reconstruction residual on random matrices") {
  Rng rng(42);
  const double tol = 1e-10;
  for (int n : {2, 3, 5, 8, 16, 32}) {
    ComplexMatrix m = random_hermitian(rng, n);
    EigResult e = hermitian_eig(m, tol);
    const ComplexMatrix& v = e.eigenvectors;
    ComplexMatrix mv = m * v;
    ComplexMatrix vd = v;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) vd(i, j) *= e.eigenvalues[j];
    const double norm_m = std::max(std::abs(e.eigenvalues.front()),
                                   std::abs(e.eigenvalues.back()));
    CHECK((mv - vd).frobenius_norm() <= 10.0 * tol * std::max(1.0, norm_m));
    CHECK((v.adjoint() * v - ComplexMatrix::identity(n)).frobenius_norm() <= tol * n);
    for (int k = 0; k + 1 < n; ++k) CHECK(e.eigenvalues[k] <= e.eigenvalues[k + 1]);
  }
}

TEST_CASE("operator_norm basics") {
  CHECK(operator_norm(ComplexMatrix::identity(4)) == doctest::Approx(1.0));
  CHECK(operator_norm(ComplexMatrix::diag({3.0, -4.0})) == doctest::Approx(4.0));

  // J_k = k * rank-one projector, so ||J_k|| = k; cross-check with the
  // eigensolver directly.
  for (int k : {2, 3, 5}) {
    ComplexMatrix j(k, k);
    for (auto& v : j.data()) v = 1.0;
    CHECK(operator_norm(j) == doctest::Approx(static_cast<double>(k)));
    EigResult e = hermitian_eig(j);
    CHECK(e.eigenvalues.back() == doctest::Approx(static_cast<double>(k)));
  }
}

TEST_CASE("operator_norm is unitarily invariant") {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 3;
    ComplexMatrix m = random_matrix(rng, n, n);
    ComplexMatrix u = haar_unitary(rng, n);
    ComplexMatrix v = haar_unitary(rng, n);
    const double a = operator_norm(m);
    const double b = operator_norm(u * m * v);
    CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, a));
  }
}

TEST_CASE("kron basics and norm multiplicativity") {
  CHECK((kron(ComplexMatrix::identity(2), ComplexMatrix::identity(3)) -
         ComplexMatrix::identity(6))
            .frobenius_norm() == doctest::Approx(0.0));

  ComplexMatrix d = kron(ComplexMatrix::diag({1.0, 2.0}), ComplexMatrix::identity(2));
  CHECK((d - ComplexMatrix::diag({1.0, 1.0, 2.0, 2.0})).frobenius_norm() ==
        doctest::Approx(0.0));

  Rng rng(3);
  for (int trial = 0; trial < 4; ++trial) {
    ComplexMatrix a = random_matrix(rng, 2, 2);
    ComplexMatrix b = random_matrix(rng, 2, 2);
    CHECK(operator_norm(kron(a, b)) ==
          doctest::Approx(operator_norm(a) * operator_norm(b)).epsilon(1e-9));
    // Mixed product rule.
    ComplexMatrix c = random_matrix(rng, 2, 2);
    ComplexMatrix e = random_matrix(rng, 2, 2);
    CHECK((kron(a, b) * kron(c, e) - kron(a * c, b * e)).frobenius_norm() <= 1e-12);
  }
}

TEST_CASE("partial_trace basics") {
  ComplexMatrix r = partial_trace(ComplexMatrix::identity(4), 2, 2, Factor::Second);
  CHECK((r - ComplexMatrix::identity(2) * cxd(2.0)).frobenius_norm() <= 1e-14);

  Rng rng(11);
  ComplexMatrix a = random_matrix(rng, 2, 2);
  ComplexMatrix t = partial_trace(kron(a, ComplexMatrix::identity(2)), 2, 2, Factor::Second);
  CHECK((t - a * cxd(2.0)).frobenius_norm() <= 1e-13);

  // Product rule with the traced factor's trace.
  ComplexMatrix b = random_matrix(rng, 3, 3);
  ComplexMatrix pt = partial_trace(kron(a, b), 2, 3, Factor::Second);
  CHECK((pt - a * b.trace()).frobenius_norm() <= 1e-12);

  // Maximally entangled projector reduces to I/2.
  ComplexMatrix red = partial_trace(maximally_entangled_projector2(), 2, 2, Factor::Second);
  CHECK((red - ComplexMatrix::identity(2) * cxd(0.5)).frobenius_norm() <= 1e-14);

  CHECK_THROWS_AS(partial_trace(ComplexMatrix::identity(5), 2, 2, Factor::First),
                  DimensionMismatchError);
}

TEST_CASE("partial_trace preserves trace and is adjoint to x -> x (x) I") {
  Rng rng(13);
  ComplexMatrix m = random_matrix(rng, 6, 6);
  ComplexMatrix r = partial_trace(m, 2, 3, Factor::Second);
  CHECK(std::abs(r.trace() - m.trace()) <= 1e-12);

  ComplexMatrix a = random_matrix(rng, 2, 2);
  cxd lhs = (r * a).trace();
  cxd rhs = (m * kron(a, ComplexMatrix::identity(3))).trace();
  CHECK(std::abs(lhs - rhs) <= 1e-12);

  // Same pairing for the first factor.
  ComplexMatrix rf = partial_trace(m, 2, 3, Factor::First);
  ComplexMatrix b = random_matrix(rng, 3, 3);
  CHECK(std::abs((rf * b).trace() - (m * kron(ComplexMatrix::identity(2), b)).trace()) <= 1e-12);
}

TEST_CASE("min_eigenvalue basics") {
  CHECK(min_eigenvalue(ComplexMatrix::identity(3)) == doctest::Approx(1.0));

  // 2x2 closed form: eigenvalues of [[1,2],[2,1]] are 1 +- 2.
  ComplexMatrix m(2, 2);
  m(0, 0) = 1.0;
  m(0, 1) = 2.0;
  m(1, 0) = 2.0;
  m(1, 1) = 1.0;
  CHECK(min_eigenvalue(m) == doctest::Approx(-1.0));

  ComplexMatrix p = ComplexMatrix::unit(3, 1, 1);
  CHECK(min_eigenvalue(p) == doctest::Approx(0.0));
  CHECK(is_psd(p));
}

TEST_CASE("hermitian bases are orthonormal") {
  for (int m : {2, 3}) {
    auto basis = hermitian_basis(m);
    CHECK(static_cast<int>(basis.size()) == m * m);
    for (size_t a = 0; a < basis.size(); ++a) {
      CHECK(basis[a].is_hermitian(1e-14));
      for (size_t b = 0; b < basis.size(); ++b) {
        const cxd ip = hs_inner(basis[a], basis[b]);
        CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) <= 1e-14);
      }
    }
    auto tl = traceless_hermitian_basis(m);
    CHECK(static_cast<int>(tl.size()) == m * m - 1);
    for (const auto& t : tl) {
      CHECK(std::abs(t.trace()) <= 1e-14);
      CHECK(std::abs(hs_inner(t, t) - 1.0) <= 1e-14);
    }
  }
}

TEST_CASE("solve_linear and null_space") {
  Rng rng(5);
  ComplexMatrix a = random_matrix(rng, 4, 4);
  std::vector<cxd> x_true(4);
  for (auto& v : x_true) v = rng.complex_gaussian();
  std::vector<cxd> b(4);
  for (int i = 0; i < 4; ++i) {
    b[i] = 0.0;
    for (int j = 0; j < 4; ++j) b[i] += a(i, j) * x_true[j];
  }
  auto x = solve_linear(a, b);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(x[i] - x_true[i]) <= 1e-10);

  // Rank-one 2x2: null space has dimension 1.
  ComplexMatrix r1(2, 2);
  r1(0, 0) = 1.0;
  r1(0, 1) = 1.0;
  ComplexMatrix ns = null_space(r1);
  CHECK(ns.cols() == 1);
  // A * v = 0 for the null vector.
  cxd v0 = r1(0, 0) * ns(0, 0) + r1(0, 1) * ns(1, 0);
  CHECK(std::abs(v0) <= 1e-10);
}

TEST_CASE("haar_unitary produces unitaries, deterministic under seed") {
  Rng rng(123);
  for (int n : {1, 2, 4}) {
    ComplexMatrix u = haar_unitary(rng, n);
    CHECK((u.adjoint() * u - ComplexMatrix::identity(n)).frobenius_norm() <= 1e-12);
  }
  Rng r1(99), r2(99);
  ComplexMatrix u1 = haar_unitary(r1, 3);
  ComplexMatrix u2 = haar_unitary(r2, 3);
  CHECK((u1 - u2).frobenius_norm() == 0.0);
}

TEST_CASE("psd_projection clips negative part") {
  ComplexMatrix m = ComplexMatrix::diag({1.0, -2.0});
  ComplexMatrix p = psd_projection(m);
  CHECK((p - ComplexMatrix::diag({1.0, 0.0})).frobenius_norm() <= 1e-12);
}
