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
#include "osk/matrix.hpp"
#include "osk/opsys.hpp"

namespace osk {

/// Semidefinite feasibility / optimization over a block-diagonal PSD
/// variable X = diag(X_1, ..., X_B) with real linear equalities
/// sum_B tr(X_B A_B) = b. Solved by a log-barrier Newton method on the
/// exactly parameterized affine set: phase 1 minimizes the cone slack
/// (its dual multiplier is the Farkas certificate on infeasible
/// instances), phase 2 follows the central path of the objective.
struct SdpConstraint {
  std::vector<ComplexMatrix> blocks;  // one Hermitian matrix per variable block
  double rhs = 0.0;
};

struct SdpProblem {
  explicit SdpProblem(int variable_dim) : block_dims{variable_dim} {}
  explicit SdpProblem(std::vector<int> dims) : block_dims(std::move(dims)) {}

  std::vector<int> block_dims;
  std::vector<SdpConstraint> constraints;
  std::optional<std::vector<ComplexMatrix>> objective;
  double tolerance = 1e-9;        // duality gap target for feasibility
  double value_tolerance = 1e-7;  // objective accuracy target

  /// Append tr(X_block K) = v as one or two real Hermitian constraints.
  void add_complex_constraint(const std::vector<std::pair<int, ComplexMatrix>>& terms,
                              cxd v);
  void add_real_constraint(int block, ComplexMatrix A, double rhs);
};

enum class SdpStatus { Optimal, Infeasible, NumericalFailure };

struct SdpResult {
  SdpStatus status = SdpStatus::NumericalFailure;
  std::vector<ComplexMatrix> rho_blocks;
  double value = 0.0;
  /// When infeasible: y with sum_i y_i A_i negative semidefinite (within
  /// tolerance) and y . b = 1; validated before reporting.
  std::vector<double> certificate;
  double certificate_slack = 0.0;  // max eigenvalue of sum y_i A_i

  const ComplexMatrix& rho() const { return rho_blocks.at(0); }
};

SdpResult sdp_solve(const SdpProblem& p);

/// Minkowski functional of f at y: P_f(y) = inf{f(y') : y' in S^h,
/// y <= y' <= ||y|| I}, together with a witness achieving it.
struct MinkowskiResult {
  double p_value = 0.0;
  ComplexMatrix witness;
};

MinkowskiResult minkowski_value(const OperatorSystem& S, const PositiveFunctional& f,
                                const ComplexMatrix& y);

/// Extension values of positive extensions: the set of values
/// g(x) over positive extensions g of f equals [beta1, beta2], computed as
/// the range of tr(rho x) over states rho on M_m agreeing with f on S.
/// Cross-checked against the Minkowski functional: beta2 = P_f(x).
struct ExtensionInterval {
  double beta1 = 0.0;
  double beta2 = 0.0;
  ComplexMatrix rho_min;  // attains beta1
  ComplexMatrix rho_max;  // attains beta2
};

ExtensionInterval extension_interval(const OperatorSystem& S, const PositiveFunctional& f,
                                     const ComplexMatrix& x);

/// A state rho on M_m extending f with tr(rho x) = alpha.
ComplexMatrix extend_functional(const OperatorSystem& S, const PositiveFunctional& f,
                                const ComplexMatrix& x, double alpha);

/// Feasibility of {rho >= 0 : tr(rho b) = f(b) on the basis of S}; the
/// result carries the certificate when no state extends f.
SdpResult state_extension_feasibility(const OperatorSystem& S, const PositiveFunctional& f);

/// Faithful UCP extension of a faithful UCP map on S to all of M_m,
/// found by maximizing t subject to Choi PSD, unitality, agreement on S,
/// and reduced Choi >= t I. Throws NoFaithfulExtensionFoundError when the
/// optimum is below tolerance (inconclusive, not a refutation).
struct FaithfulExtension {
  CPMap eta;
  double t_star = 0.0;
};

FaithfulExtension faithful_extension(const CPMap& tau, double tol = 1e-6);

/// UCP extension eta of tau with the invariance property
/// phi0(x) = tr0(eta(x)) for all x in M_m, or a validated infeasibility
/// certificate when no such extension exists.
struct InvarianceExtensionResult {
  SdpStatus status = SdpStatus::NumericalFailure;
  std::optional<CPMap> eta;
  std::vector<double> certificate;
  double certificate_slack = 0.0;
};

InvarianceExtensionResult invariance_constrained_extension(const CPMap& tau,
                                                           const ComplexMatrix& phi0_density);

/// System-domain faithfulness via feasibility of
/// {z >= 0, z in S^h, tr(z) = 1, tr(tau(z)) = 0}: faithful iff infeasible.
bool is_faithful_on_system(const CPMap& tau, double tol = 1e-10);

}  // namespace osk
