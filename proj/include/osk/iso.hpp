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

#include <array>
#include <optional>
#include <vector>

#include "osk/linalg.hpp"
#include "osk/matrix.hpp"
#include "osk/opsys.hpp"

namespace osk {

/// ||lambda I + J_k (x) x|| where J_k is the all-ones k x k matrix.
/// J_k is unitarily equivalent to diag(k, 0, ..., 0), so for k >= 2 the
/// value reduces to max(|lambda|, ||lambda I + k x||); k = 1 is the bare
/// norm ||lambda I + x||.
double invariant(const ComplexMatrix& x, int k, cxd lambda);

/// The default sampling grid: lambda in {0, +-1, +-i, 1+i} scaled by
/// {1, ||x||}, k in {1, 2, 3}.
struct InvariantSample {
  int k;
  cxd lambda;
  double value;
};

std::vector<InvariantSample> invariant_profile(const ComplexMatrix& x,
                                               const std::vector<int>& ks,
                                               const std::vector<cxd>& lambdas);
std::vector<cxd> default_lambda_grid(const ComplexMatrix& x);

/// True iff the profiles of x and y agree on the sampled grid within tol.
/// A necessary condition for an automorphism carrying x to y; finite
/// sampling cannot certify the converse.
bool invariants_match(const ComplexMatrix& x, const ComplexMatrix& y,
                      const std::vector<int>& ks, const std::vector<cxd>& lambdas,
                      double tol = 1e-9);

/// A linear map between full matrix algebras given by its matrix-unit
/// images; carrier for corner maps and attached isomorphism data.
class LinearMatrixMap {
 public:
  LinearMatrixMap() = default;
  LinearMatrixMap(int m, int out_dim, std::vector<ComplexMatrix> unit_images);
  static LinearMatrixMap conjugation(const ComplexMatrix& u);
  /// x -> u x v*.
  static LinearMatrixMap two_sided(const ComplexMatrix& u, const ComplexMatrix& v);

  ComplexMatrix apply(const ComplexMatrix& x) const;
  int input_dim() const { return m_; }
  int output_dim() const { return out_; }

 private:
  int m_ = 0, out_ = 0;
  std::vector<ComplexMatrix> images_;
};

/// A unital adjoint-preserving linear map between operator systems, given
/// by the images of the source basis inside the target span.
struct OrderIsoSpec {
  OperatorSystem source;
  OperatorSystem target;
  std::vector<ComplexMatrix> images;  // images[k] = map(source.basis()[k])
};

/// Complete order isomorphism check: linear bijectivity of the span map,
/// unitality, and complete positivity of the map and its inverse up to
/// level K = max(m, m'). When a span is the full matrix algebra the CP
/// side is certified exactly through the Choi matrix; proper subspaces
/// are probed on sampled positive elements per level.
bool is_complete_order_iso(const OrderIsoSpec& spec, uint64_t seed = 17,
                           int samples_per_level = 24, double tol = 1e-8);

struct FindUnitaryResult {
  bool found = false;
  ComplexMatrix u;
  double residual = 0.0;  // operator norm of u x u* - y
  int restarts_used = 0;
};

/// Search for a unitary with u x u* = y. Normal inputs are matched
/// spectrally; the general case matches the Hermitian pair
/// (x + x*, i(x - x*)) by minimizing the Frobenius objective over the
/// unitary group (projected gradient with polar retraction, multiple
/// restarts seeded by exact eigenbasis phase matching). Failure after the
/// restart budget is inconclusive, never a proof of non-equivalence.
FindUnitaryResult find_implementing_unitary(const ComplexMatrix& x, const ComplexMatrix& y,
                                            double tol = 1e-8, int restarts = 16,
                                            uint64_t seed = 2);

/// The 2x2-block operator system with scalar diagonal and an operator
/// space M (and M*) off-diagonal, inside M_{2m}.
struct PaulsenSystem {
  int m = 0;
  OperatorSystem system;                 // in M_{2m}
  std::vector<ComplexMatrix> mspace;     // orthonormal basis of span(M)
  std::vector<ComplexMatrix> algebra;    // HS-orthonormal basis of C*(S)
  // Corner (i, j) of the generated algebra, as m x m matrices.
  std::array<std::array<std::vector<ComplexMatrix>, 2>, 2> corners;
};

PaulsenSystem paulsen_embed(const std::vector<ComplexMatrix>& m_generators, int m);

/// Corner data of an isomorphism of Paulsen systems: the two corner
/// automorphisms and the connecting map of the (1,2) corner.
struct PaulsenIso {
  LinearMatrixMap alpha1;
  LinearMatrixMap tau;
  LinearMatrixMap alpha2;
};

/// The isomorphism implemented by x -> W x W* with W = diag(u, v).
PaulsenIso paulsen_iso_from_two_sided(const ComplexMatrix& u, const ComplexMatrix& v);

/// || tau(a b c) - alpha1(a) tau(b) alpha2(c) ||; vanishes for the corner
/// maps of any genuine isomorphism. Throws CornerMembershipViolationError
/// when a, b, c are not in the respective corner algebras.
double cocycle_check(const PaulsenSystem& ps, const PaulsenIso& iso, const ComplexMatrix& a,
                     const ComplexMatrix& b, const ComplexMatrix& c, double tol = 1e-8);

struct UnitarityCertificate {
  bool is_unitary = false;
  double defect = 0.0;               // max(||x*x - I||, ||x x* - I||)
  std::array<double, 3> xk0{};       // invariant values x_k(0), k = 1..3
};

/// Algebraic unitarity test with the norm invariants x_k(0) = k ||x||
/// reported alongside.
UnitarityCertificate unitarity_certificate(const ComplexMatrix& x, double tol = 1e-10);

/// Recover the point map behind an order isomorphism of finite function
/// systems: the unique permutation gamma with map(psi) = psi o gamma for
/// all psi. images[i] is the image of F.functions()[i] as a vector over
/// the target points. Throws NotSeparatingError when F fails to separate
/// points and NoConsistentPermutationError when no point map reproduces
/// the images.
std::vector<int> stone_recover_permutation(const FunctionSystem& F, const FunctionSystem& Fp,
                                           const std::vector<std::vector<cxd>>& images,
                                           double tol = 1e-8);

/// The map on F induced by a permutation: Gamma(psi) = psi o gamma.
std::vector<std::vector<cxd>> permutation_images(const FunctionSystem& F,
                                                 const std::vector<int>& gamma);

}  // namespace osk
