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

#include <optional>
#include <vector>

#include "osk/linalg.hpp"
#include "osk/matrix.hpp"
#include "osk/opsys.hpp"

namespace osk {

/// Normalized trace tr(x)/n.
inline cxd normalized_trace(const ComplexMatrix& x) {
  return x.trace() / static_cast<double>(x.rows());
}

/// A linear map M_m(C) -> M_n(C), or the restriction of one to an
/// operator system S in M_m. Full-domain maps are carried by their Choi
/// matrix sum_ij e_ij (x) tau(e_ij); system-domain maps by the images of
/// the system's canonical Hermitian basis.
class CPMap {
 public:
  enum class Domain { Full, System };

  static CPMap identity(int m);
  static CPMap from_choi(int m, int n, ComplexMatrix choi);
  /// images[i*m + j] = tau(e_ij).
  static CPMap from_matrix_unit_images(int m, int n, const std::vector<ComplexMatrix>& images);
  static CPMap from_kraus(int m, int n, const std::vector<ComplexMatrix>& kraus);
  /// x -> u x u*.
  static CPMap conjugation(const ComplexMatrix& u);
  /// x -> tr0(x) I_n for x in M_m.
  static CPMap trace_state(int m, int n);
  /// Restriction to S: images of S's basis under this map.
  CPMap restricted_to(const OperatorSystem& S) const;
  /// System-domain map from basis images (images[k] = tau(basis[k])).
  static CPMap on_system(const OperatorSystem& S, int n, std::vector<ComplexMatrix> images);

  Domain domain() const { return domain_; }
  int input_dim() const { return m_; }
  int output_dim() const { return n_; }
  const OperatorSystem& system() const;
  const std::vector<ComplexMatrix>& basis_images() const { return basis_images_; }

  /// Choi matrix (full domain only).
  const ComplexMatrix& choi() const;

  ComplexMatrix apply(const ComplexMatrix& x) const;
  /// Trace dual: tr(apply_dual(rho) x) = tr(rho apply(x)). Full domain only.
  ComplexMatrix apply_dual(const ComplexMatrix& rho) const;
  /// this after other (full domains).
  CPMap compose(const CPMap& other) const;

  bool is_unital(double tol = 1e-10) const;
  /// Full domain: Choi PSD test. System domain: sampled positivity at
  /// level 1 (see iso module for amplified checks).
  bool is_cp(double tol = 1e-10) const;
  double min_choi_eigenvalue() const;

 private:
  Domain domain_ = Domain::Full;
  int m_ = 0, n_ = 0;
  std::optional<OperatorSystem> system_;
  std::vector<ComplexMatrix> basis_images_;  // system domain
  std::optional<ComplexMatrix> choi_;        // full domain
};

/// Weights of a faithful diagonal state phi_0(x) = sum |lambda_i|^2 x_ii.
/// All entries nonzero; normalized so the weights form a state.
class StateWeights {
 public:
  explicit StateWeights(std::vector<cxd> weights);

  int size() const { return static_cast<int>(weights_.size()); }
  const std::vector<cxd>& weights() const { return weights_; }
  /// The rank-one PSD matrix [conj(lambda_i) lambda_j], trace 1.
  ComplexMatrix lambda_matrix() const;
  /// Density diag(|lambda_i|^2) of phi_0.
  ComplexMatrix phi0_density() const;

 private:
  std::vector<cxd> weights_;
};

/// A linear functional on M_n(S) (or on M_n(M_m) when no system is
/// attached), carried by its values on the product basis {b_k (x) e_ij}.
class PositiveFunctional {
 public:
  PositiveFunctional(int level, int m, std::optional<OperatorSystem> system,
                     std::vector<cxd> values);

  /// Functional X -> tr(rho X) on M_n(M_m) from a density matrix on the
  /// (m n)-dimensional space.
  static PositiveFunctional from_density(int m, int level, const ComplexMatrix& rho);

  int level() const { return level_; }
  int ambient_dim() const { return m_; }
  bool on_full_algebra() const { return !system_.has_value(); }
  const OperatorSystem& system() const;
  const std::vector<cxd>& values() const { return values_; }
  /// Value on b_k (x) e_ij.
  cxd value(int k, int i, int j) const { return values_[(static_cast<size_t>(k) * level_ + i) * level_ + j]; }

  /// Evaluate on an (m n)x(m n) element of M_n(S).
  cxd evaluate(const ComplexMatrix& Y) const;
  /// Density matrix rho with f = tr(rho .), full-algebra domain only.
  ComplexMatrix density() const;
  /// f(identity of M_n(S)) == 1 within tol.
  bool is_state(double tol = 1e-10) const;
  /// Minimum of f over `samples` random elements of M_n(S)_+.
  double positivity_min(int samples, uint64_t seed) const;

  /// The domain basis the value table refers to (system basis, or the
  /// canonical Hermitian basis of M_m).
  std::vector<ComplexMatrix> domain_basis() const;

 private:
  int level_, m_;
  std::optional<OperatorSystem> system_;
  std::vector<cxd> values_;
};

/// s[x^i_j] = (1/n) sum_ij tau(x^i_j)^i_j on M_n(S); a state iff tau is
/// unital, and s(x (x) I_n) = tr0(tau(x)). The level, when given, must
/// match the map's output dimension.
PositiveFunctional functional_from_cpmap(const CPMap& tau, int level = -1);

/// Inverse of the correspondence: tau(x)^i_j = n s(x (x) |e_i><e_j|).
/// Throws NotPositiveError when s fails the (sampled) positivity check.
CPMap cpmap_from_functional(const PositiveFunctional& s, uint64_t seed = 2026);

/// Schur-weighted variant: s_{tau,lambda}[x^i_j] = sum_ij
/// conj(lambda_i) lambda_j tau(x^i_j)^i_j, so that
/// s_{tau,lambda}(x (x) I_n) = phi_0(tau(x)).
PositiveFunctional weighted_functional(const CPMap& tau, const StateWeights& w);

/// Faithfulness of tau on the positive cone of its domain. Full domain:
/// the reduced Choi matrix is positive definite. System domain: decided
/// by a semidefinite feasibility problem (see extend module).
bool is_faithful(const CPMap& tau, double tol = 1e-10);

/// min eigenvalue of tau(x*x) - tau(x*)tau(x); >= -1e-9 for any UCP tau.
double kadison_schwarz_check(const CPMap& tau, const ComplexMatrix& x);

/// Basis of the fixed-point space {x : tau(x) = x} of a unital CP map on
/// M_m with a faithful invariant state. Verifies the invariant state
/// exists (NoFaithfulInvariantStateError) and that the returned span is
/// closed under products (ClosureViolationError), which is what the
/// faithful invariant state guarantees.
std::vector<ComplexMatrix> fixed_point_algebra(const CPMap& tau, double tol = 1e-8);

/// Invariant state of the trace dual computed exactly by splitting along
/// ker(T - I) + ran(T - I); nullopt if numerically degenerate.
std::optional<ComplexMatrix> invariant_state(const CPMap& tau, double tol = 1e-8);

/// Random Hermitian element of M_n(S) shifted to the PSD cone; helper
/// shared by positivity checks at matrix levels.
ComplexMatrix sample_level_positive(const OperatorSystem& S, int level, Rng& rng);

}  // namespace osk
