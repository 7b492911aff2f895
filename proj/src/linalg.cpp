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

#include "osk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace osk {

namespace {

double offdiag_norm(const ComplexMatrix& A) {
  double s = 0.0;
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      if (i != j) s += std::norm(A(i, j));
  return std::sqrt(s);
}

}  // namespace

EigResult hermitian_eig(const ComplexMatrix& M, double tol) {
  if (!M.is_square()) throw DimensionMismatchError("eigendecomposition of non-square matrix");
  if (!M.is_hermitian(tol)) throw NotHermitianError("matrix is not Hermitian within tolerance");

  const int n = M.rows();
  ComplexMatrix A = M.hermitian_part();
  ComplexMatrix V = ComplexMatrix::identity(n);

  const double scale = std::max(1.0, A.frobenius_norm());
  const double stop = 64.0 * 2.220446049250313e-16 * scale;
  const int max_sweeps = 80;

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (offdiag_norm(A) <= stop) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cxd beta = A(p, q);
        const double babs = std::abs(beta);
        if (babs <= 1e-300) continue;
        const cxd phase = beta / babs;
        const double app = A(p, p).real();
        const double aqq = A(q, q).real();
        // Rotation for the real symmetric 2x2 block [[app, |b|], [|b|, aqq]].
        const double theta = (aqq - app) / (2.0 * babs);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // Unitary differs from identity at (p,q):
        //   J_pp = c, J_pq = s, J_qp = -conj(phase) s, J_qq = conj(phase) c.
        const cxd jpq = s;
        const cxd jqp = -std::conj(phase) * s;
        const cxd jqq = std::conj(phase) * c;
        // A <- J* A J: columns then rows.
        for (int i = 0; i < n; ++i) {
          const cxd aip = A(i, p), aiq = A(i, q);
          A(i, p) = aip * c + aiq * jqp;
          A(i, q) = aip * jpq + aiq * jqq;
        }
        for (int j = 0; j < n; ++j) {
          const cxd apj = A(p, j), aqj = A(q, j);
          A(p, j) = c * apj + std::conj(jqp) * aqj;
          A(q, j) = std::conj(jpq) * apj + std::conj(jqq) * aqj;
        }
        for (int i = 0; i < n; ++i) {
          const cxd vip = V(i, p), viq = V(i, q);
          V(i, p) = vip * c + viq * jqp;
          V(i, q) = vip * jpq + viq * jqq;
        }
      }
    }
  }
  if (sweep == max_sweeps && offdiag_norm(A) > stop)
    throw NoConvergenceError("Jacobi sweep budget exhausted");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return A(a, a).real() < A(b, b).real(); });

  EigResult res;
  res.eigenvalues.resize(n);
  res.eigenvectors = ComplexMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    res.eigenvalues[k] = A(order[k], order[k]).real();
    for (int i = 0; i < n; ++i) res.eigenvectors(i, k) = V(i, order[k]);
  }
  return res;
}

double operator_norm(const ComplexMatrix& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0.0;
  if (M.max_abs() == 0.0) return 0.0;
  // Gram matrix of the smaller side.
  ComplexMatrix G = (M.rows() <= M.cols()) ? M * M.adjoint() : M.adjoint() * M;
  EigResult e = hermitian_eig(G, 1e-8);
  return std::sqrt(std::max(0.0, e.eigenvalues.back()));
}

double trace_norm(const ComplexMatrix& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0.0;
  if (M.max_abs() == 0.0) return 0.0;
  ComplexMatrix G = (M.rows() <= M.cols()) ? M * M.adjoint() : M.adjoint() * M;
  EigResult e = hermitian_eig(G, 1e-8);
  double s = 0.0;
  for (double v : e.eigenvalues) s += std::sqrt(std::max(0.0, v));
  return s;
}

double min_eigenvalue(const ComplexMatrix& M, double tol) {
  return hermitian_eig(M, tol).eigenvalues.front();
}

double max_eigenvalue(const ComplexMatrix& M, double tol) {
  return hermitian_eig(M, tol).eigenvalues.back();
}

bool is_psd(const ComplexMatrix& M, double tol) {
  return min_eigenvalue(M, tol) >= -tol;
}

ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B) {
  ComplexMatrix r(A.rows() * B.rows(), A.cols() * B.cols());
  for (int a = 0; a < A.rows(); ++a)
    for (int b = 0; b < A.cols(); ++b) {
      const cxd v = A(a, b);
      if (v == cxd(0.0)) continue;
      for (int i = 0; i < B.rows(); ++i)
        for (int j = 0; j < B.cols(); ++j)
          r(a * B.rows() + i, b * B.cols() + j) = v * B(i, j);
    }
  return r;
}

ComplexMatrix partial_trace(const ComplexMatrix& M, int m, int n, Factor traced) {
  if (!M.is_square() || M.rows() != m * n)
    throw DimensionMismatchError("partial trace: matrix is not (m*n)x(m*n)");
  if (traced == Factor::Second) {
    ComplexMatrix r(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        cxd s = 0.0;
        for (int i = 0; i < n; ++i) s += M(a * n + i, b * n + i);
        r(a, b) = s;
      }
    return r;
  }
  ComplexMatrix r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cxd s = 0.0;
      for (int a = 0; a < m; ++a) s += M(a * n + i, a * n + j);
      r(i, j) = s;
    }
  return r;
}

ComplexMatrix psd_projection(const ComplexMatrix& M) {
  EigResult e = hermitian_eig(M, 1e-6);
  const int n = M.rows();
  ComplexMatrix r(n, n);
  for (int k = 0; k < n; ++k) {
    const double d = e.eigenvalues[k];
    if (d <= 0.0) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        r(i, j) += d * e.eigenvectors(i, k) * std::conj(e.eigenvectors(j, k));
  }
  return r;
}

std::vector<ComplexMatrix> hermitian_basis(int m) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i) basis.push_back(ComplexMatrix::unit(m, i, i));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      ComplexMatrix x(m, m);
      x(i, j) = inv_sqrt2;
      x(j, i) = inv_sqrt2;
      basis.push_back(x);
      ComplexMatrix y(m, m);
      y(i, j) = cxd(0.0, inv_sqrt2);
      y(j, i) = cxd(0.0, -inv_sqrt2);
      basis.push_back(y);
    }
  return basis;
}

std::vector<ComplexMatrix> traceless_hermitian_basis(int n) {
  std::vector<ComplexMatrix> basis;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ComplexMatrix x(n, n);
      x(i, j) = inv_sqrt2;
      x(j, i) = inv_sqrt2;
      basis.push_back(x);
      ComplexMatrix y(n, n);
      y(i, j) = cxd(0.0, inv_sqrt2);
      y(j, i) = cxd(0.0, -inv_sqrt2);
      basis.push_back(y);
    }
  // Diagonal traceless ladder.
  for (int k = 1; k < n; ++k) {
    ComplexMatrix d(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) d(i, i) = norm;
    d(k, k) = -static_cast<double>(k) * norm;
    basis.push_back(d);
  }
  return basis;
}

std::vector<cxd> solve_linear(ComplexMatrix A, std::vector<cxd> b) {
  if (!A.is_square() || A.rows() != static_cast<int>(b.size()))
    throw DimensionMismatchError("linear solve shape mismatch");
  const int n = A.rows();
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(A(col, col));
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A(r, col)) > best) {
        best = std::abs(A(r, col));
        piv = r;
      }
    if (best < 1e-14)
      throw SolverFailureError("singular system in linear solve");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(A(col, j), A(piv, j));
      std::swap(b[col], b[piv]);
    }
    for (int r = col + 1; r < n; ++r) {
      const cxd f = A(r, col) / A(col, col);
      if (f == cxd(0.0)) continue;
      for (int j = col; j < n; ++j) A(r, j) -= f * A(col, j);
      b[r] -= f * b[col];
    }
  }
  std::vector<cxd> x(n);
  for (int r = n - 1; r >= 0; --r) {
    cxd s = b[r];
    for (int j = r + 1; j < n; ++j) s -= A(r, j) * x[j];
    x[r] = s / A(r, r);
  }
  return x;
}

ComplexMatrix null_space(const ComplexMatrix& A, double tol) {
  ComplexMatrix G = A.adjoint() * A;
  EigResult e = hermitian_eig(G, 1e-8);
  // Absolute eigenvalue noise of the Jacobi sweep is O(eps ||G||); the
  // requested singular-value tolerance cannot go below that floor.
  const double lam_max = std::max(1.0, e.eigenvalues.back());
  const double cutoff = std::max(tol * tol, 64.0 * 2.220446049250313e-16 * lam_max);
  int count = 0;
  for (double v : e.eigenvalues)
    if (v <= cutoff) ++count;
  ComplexMatrix r(A.cols(), count);
  int c = 0;
  for (int k = 0; k < static_cast<int>(e.eigenvalues.size()); ++k) {
    if (e.eigenvalues[k] > cutoff) continue;
    for (int i = 0; i < A.cols(); ++i) r(i, c) = e.eigenvectors(i, k);
    ++c;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Rng: xorshift128+ core, Box-Muller gaussians.

namespace {
uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

Rng::Rng(uint64_t seed) {
  uint64_t s = seed;
  state_[0] = splitmix64(s);
  state_[1] = splitmix64(s);
}

Rng Rng::stream(uint64_t stream_id) const {
  uint64_t mix = state_[0] ^ (stream_id * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
  return Rng(mix);
}

uint64_t Rng::next_u64() {
  uint64_t s1 = state_[0];
  const uint64_t s0 = state_[1];
  state_[0] = s0;
  s1 ^= s1 << 23;
  state_[1] = s1 ^ s0 ^ (s1 >> 18) ^ (s0 >> 5);
  return state_[1] + s0;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

cxd Rng::complex_gaussian() {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return {gaussian() * inv_sqrt2, gaussian() * inv_sqrt2};
}

ComplexMatrix random_matrix(Rng& rng, int rows, int cols) {
  ComplexMatrix m(rows, cols);
  for (auto& v : m.data()) v = rng.complex_gaussian();
  return m;
}

ComplexMatrix random_hermitian(Rng& rng, int n) {
  return random_matrix(rng, n, n).hermitian_part();
}

ComplexMatrix random_psd(Rng& rng, int n) {
  ComplexMatrix g = random_matrix(rng, n, n);
  ComplexMatrix p = g * g.adjoint();
  return p * cxd(1.0 / operator_norm(p));
}

ComplexMatrix haar_unitary(Rng& rng, int n) {
  // Modified Gram-Schmidt with a reorthogonalization pass; keeping the
  // triangular factor's diagonal positive yields the Haar law.
  ComplexMatrix g = random_matrix(rng, n, n);
  ComplexMatrix q(n, n);
  for (int j = 0; j < n; ++j) {
    std::vector<cxd> v(n);
    for (int i = 0; i < n; ++i) v[i] = g(i, j);
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < j; ++k) {
        cxd proj = 0.0;
        for (int i = 0; i < n; ++i) proj += std::conj(q(i, k)) * v[i];
        for (int i = 0; i < n; ++i) v[i] -= proj * q(i, k);
      }
    }
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += std::norm(v[i]);
    norm = std::sqrt(norm);
    if (norm < 1e-14) {
      // Essentially impossible for Ginibre input; re-draw the column.
      for (int i = 0; i < n; ++i) g(i, j) = rng.complex_gaussian();
      --j;
      continue;
    }
    for (int i = 0; i < n; ++i) q(i, j) = v[i] / norm;
  }
  return q;
}

}  // namespace osk
