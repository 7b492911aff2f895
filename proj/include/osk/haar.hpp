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

#include "osk/cpmaps.hpp"
#include "osk/linalg.hpp"
#include "osk/matrix.hpp"

namespace osk {

struct CEstimate {
  double c = 0.0;
  double half_width = 0.0;  // three standard errors of the per-sample statistic
};

/// The homogeneous neighborhood U = {u in U_n(C) : ||u - I|| < delta} of
/// the identity, together with the sampler seed and a cached constant for
/// the averaged-conjugation map. Membership depends only on ||u - I||,
/// which is invariant under adjoints and unitary conjugation, so U* = U
/// and g U g* = U hold structurally.
struct HaarNeighborhood {
  int n = 2;
  double delta = 0.5;
  uint64_t seed = 1;
  std::optional<CEstimate> c_estimate;

  HaarNeighborhood(int n_, double delta_, uint64_t seed_)
      : n(n_), delta(delta_), seed(seed_) {
    if (n < 1) throw InvalidInputError("unitary dimension must be positive");
    if (delta <= 0.0) throw InvalidInputError("delta must be positive");
  }

  bool contains(const ComplexMatrix& u) const {
    return operator_norm(u - ComplexMatrix::identity(n)) < delta;
  }
};

/// Haar samples conditioned on the neighborhood: eigenangles drawn from
/// the Weyl density restricted to the angular window (by rejection, whose
/// acceptance rate is bounded away from zero uniformly in delta), framed
/// by an independent Haar eigenbasis. Every returned matrix satisfies the
/// membership predicate exactly, since ||u - I|| = max_k |e^{i theta_k} - 1|.
std::vector<ComplexMatrix> sample_neighborhood(const HaarNeighborhood& U, int count,
                                               uint64_t stream = 0);

/// Monte Carlo estimate of E_U(x) = mean of u x u* over U; the sample set
/// is symmetrized with the adjoints, which leaves the law invariant.
ComplexMatrix average_conjugation(const HaarNeighborhood& U, const ComplexMatrix& x,
                                  int samples, uint64_t stream = 0);

/// Fit of the averaged conjugation against the model c x + (1-c) tr0(x) I
/// on a traceless Hermitian basis, with the off-model residual.
struct CFit {
  CEstimate estimate;
  double max_rel_off_model = 0.0;  // max_a ||avg_a - c t_a|| / |c|
};

CFit fit_c(const HaarNeighborhood& U, int samples, uint64_t stream = 0);

/// Estimate of the depolarizing constant c_U in (0, 1); stores it in
/// U.c_estimate. Throws DegenerateDimensionError for n = 1, where the
/// decomposition is not unique.
CEstimate estimate_c(HaarNeighborhood& U, int samples, uint64_t stream = 0);

/// c x + (1-c) tr0(x) I, the closed form of the averaged conjugation.
ComplexMatrix depolarize(const ComplexMatrix& x, double c);

/// Unital CP map x -> c x + (1-c) tr0(x) I as a CPMap.
CPMap depolarizing_map(int n, double c);

/// Block-level averaging of Y in M_n(S) (an (m n) x (m n) matrix):
/// c [y_ij] + (1-c) [delta_ij ybar] with ybar the average diagonal block;
/// equals the mean of (I (x) u) Y (I (x) u)* over the neighborhood.
ComplexMatrix block_average(const ComplexMatrix& Y, int m, int n, double c);

/// f_U(Y) = f(block_average(Y, c)) in closed form on the value table.
/// Affine in f, and injective for 0 < c < 1.
PositiveFunctional functional_transform(const PositiveFunctional& f, double c);

/// The invariant state of tau_c(x) = c tau(x) + (1-c) tr0(tau(x)) I as the
/// geometric series phi = (1-c) sum_k c^k tr0 o tau^{k+1}, truncated when
/// c^K < tol (1-c) and renormalized. Returned as a level-1 functional on
/// M_m with its density matrix.
PositiveFunctional invariant_state_series(const CPMap& tau, double c, double tol = 1e-12);

}  // namespace osk
