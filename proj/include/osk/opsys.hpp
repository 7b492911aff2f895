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

#include <vector>

#include "osk/linalg.hpp"
#include "osk/matrix.hpp"

namespace osk {

/// A unital, adjoint-closed subspace S of M_m(C), carried by an
/// orthonormal Hermitian basis (trace inner product) of
/// span{I, g, g* : g generators}. The complex span of the basis is S,
/// the real span is the Hermitian part S^h. The basis is canonical given
/// generator order: deterministic Gram-Schmidt on I, then the Hermitian
/// and anti-Hermitian parts of each generator.
class OperatorSystem {
 public:
  int ambient_dim() const { return m_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<ComplexMatrix>& basis() const { return basis_; }
  const std::vector<ComplexMatrix>& generators() const { return generators_; }

  /// Complex coordinates of x over the basis (orthogonal projection).
  std::vector<cxd> project(const ComplexMatrix& x) const;
  /// Reassemble an element from complex coordinates.
  ComplexMatrix assemble(const std::vector<cxd>& coords) const;

  /// True iff the trace-norm distance from x to the span is <= tol.
  bool contains(const ComplexMatrix& x, double tol = 1e-8) const;
  /// Trace-norm distance from x to the span.
  double membership_residual(const ComplexMatrix& x) const;

  /// True iff the span is all of M_m (checked by projecting matrix units).
  bool spans_full_algebra(double tol = 1e-8) const;

  /// Orthonormal Hermitian basis of the orthogonal complement of the span
  /// inside the Hermitian part of M_m.
  std::vector<ComplexMatrix> hermitian_complement_basis() const;

  friend OperatorSystem make_operator_system(const std::vector<ComplexMatrix>&, int);

 private:
  int m_ = 0;
  std::vector<ComplexMatrix> generators_;
  std::vector<ComplexMatrix> basis_;
};

OperatorSystem make_operator_system(const std::vector<ComplexMatrix>& generators, int m);

/// PSD elements of S: random Hermitian span elements shifted to the PSD
/// cone and rescaled to unit operator norm (zero samples are kept as is).
std::vector<ComplexMatrix> positive_cone_sample(const OperatorSystem& S, int count,
                                                uint64_t seed);

/// A finite function system: a conjugation-closed subspace of C(Omega)
/// with |Omega| points, containing the constants. Functions are stored as
/// complex vectors of length omega_size; the constant-one vector and all
/// entrywise conjugates are appended at construction.
class FunctionSystem {
 public:
  FunctionSystem(int omega_size, std::vector<std::vector<cxd>> functions);

  int omega_size() const { return omega_; }
  const std::vector<std::vector<cxd>>& functions() const { return functions_; }

  /// Embed as diagonal matrices.
  OperatorSystem to_operator_system() const;

 private:
  int omega_;
  std::vector<std::vector<cxd>> functions_;
};

/// True iff for every pair of distinct points some function takes
/// different values on them.
bool separates_points(const FunctionSystem& F, double tol = 1e-12);

}  // namespace osk
