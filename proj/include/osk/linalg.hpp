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

#include <cstdint>
#include <utility>
#include <vector>

#include "osk/matrix.hpp"

namespace osk {

struct EigResult {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // unitary, columns match eigenvalues
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. M = V diag(d) V* with d ascending. Throws NotHermitianError
/// if ||M - M*||_F > tol * max(1, ||M||_F), NoConvergenceError if the
/// sweep budget is exhausted. Intended for dimensions up to ~64.
EigResult hermitian_eig(const ComplexMatrix& M, double tol = 1e-10);

/// Largest singular value.
double operator_norm(const ComplexMatrix& M);

/// Sum of singular values.
double trace_norm(const ComplexMatrix& M);

/// Least eigenvalue of a Hermitian matrix. M is PSD iff result >= -tol.
double min_eigenvalue(const ComplexMatrix& M, double tol = 1e-10);
double max_eigenvalue(const ComplexMatrix& M, double tol = 1e-10);
bool is_psd(const ComplexMatrix& M, double tol = 1e-10);

/// Kronecker product; the first argument is the slow (outer) factor.
ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B);

enum class Factor { First, Second };

/// Partial trace of an (m*n)x(m*n) matrix over the declared factor.
/// Tensor index convention matches kron: row index = a*n + i with
/// a indexing the first (m) factor. Tracing the second factor of A (x) B
/// yields tr(B) * A.
ComplexMatrix partial_trace(const ComplexMatrix& M, int m, int n, Factor traced);

/// Clip negative eigenvalues to zero (projection onto the PSD cone in
/// Frobenius norm).
ComplexMatrix psd_projection(const ComplexMatrix& M);

/// Orthonormal Hermitian basis of M_m(C) under the trace inner product:
/// e_kk, (e_ij+e_ji)/sqrt(2), i(e_ij-e_ji)/sqrt(2) for i<j. m*m elements.
std::vector<ComplexMatrix> hermitian_basis(int m);

/// Orthonormal Hermitian traceless basis of M_n(C): m*m - 1 elements.
std::vector<ComplexMatrix> traceless_hermitian_basis(int n);

/// Solve A x = b by Gaussian elimination with partial pivoting.
std::vector<cxd> solve_linear(ComplexMatrix A, std::vector<cxd> b);

/// Orthonormal basis of the (numerical) null space of A, via the
/// eigendecomposition of A* A; singular values below tol count as zero.
/// Columns of the result span the null space.
ComplexMatrix null_space(const ComplexMatrix& A, double tol = 1e-8);

/// Deterministic random source. Gaussian variates via Box-Muller on the
/// raw mt19937_64 stream so results do not depend on the standard library
/// implementation.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  /// Derive an independent stream from the same seed.
  Rng stream(uint64_t stream_id) const;

  double uniform();                  // [0, 1)
  double uniform(double a, double b);
  double gaussian();                 // N(0, 1)
  cxd complex_gaussian();            // E|z|^2 = 1
  uint64_t next_u64();

 private:
  uint64_t state_[2];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

ComplexMatrix random_matrix(Rng& rng, int rows, int cols);
ComplexMatrix random_hermitian(Rng& rng, int n);
/// PSD with unit operator norm.
ComplexMatrix random_psd(Rng& rng, int n);
/// Haar-distributed unitary via Gram-Schmidt orthonormalization of a
/// Ginibre matrix; the positive-diagonal normalization of the triangular
/// factor makes the law exactly Haar.
ComplexMatrix haar_unitary(Rng& rng, int n);

}  // namespace osk
