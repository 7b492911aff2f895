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

#include "osk/cpmaps.hpp"

#include <cmath>

namespace osk {

// Defined in extend.cpp (semidefinite feasibility).
bool is_faithful_on_system(const CPMap& tau, double tol);

// ---------------------------------------------------------------------------
// CPMap

CPMap CPMap::identity(int m) {
  ComplexMatrix choi(m * m, m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      choi += kron(ComplexMatrix::unit(m, i, j), ComplexMatrix::unit(m, i, j));
  return from_choi(m, m, std::move(choi));
}

CPMap CPMap::from_choi(int m, int n, ComplexMatrix choi) {
  if (choi.rows() != m * n || choi.cols() != m * n)
    throw DimensionMismatchError("Choi matrix is not (m n) x (m n)");
  CPMap t;
  t.domain_ = Domain::Full;
  t.m_ = m;
  t.n_ = n;
  t.choi_ = std::move(choi);
  return t;
}

CPMap CPMap::from_matrix_unit_images(int m, int n,
                                     const std::vector<ComplexMatrix>& images) {
  if (static_cast<int>(images.size()) != m * m)
    throw DimensionMismatchError("need m*m matrix unit images");
  ComplexMatrix choi(m * n, m * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const ComplexMatrix& img = images[static_cast<size_t>(i) * m + j];
      if (img.rows() != n || img.cols() != n)
        throw DimensionMismatchError("image is not n x n");
      choi += kron(ComplexMatrix::unit(m, i, j), img);
    }
  return from_choi(m, n, std::move(choi));
}

CPMap CPMap::from_kraus(int m, int n, const std::vector<ComplexMatrix>& kraus) {
  std::vector<ComplexMatrix> images(static_cast<size_t>(m) * m, ComplexMatrix(n, n));
  for (const auto& v : kraus) {
    if (v.rows() != n || v.cols() != m)
      throw DimensionMismatchError("Kraus operator is not n x m");
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        images[static_cast<size_t>(i) * m + j] += v * ComplexMatrix::unit(m, i, j) * v.adjoint();
  }
  return from_matrix_unit_images(m, n, images);
}

CPMap CPMap::conjugation(const ComplexMatrix& u) {
  if (!u.is_square()) throw DimensionMismatchError("conjugation needs a square matrix");
  return from_kraus(u.rows(), u.rows(), {u});
}

CPMap CPMap::trace_state(int m, int n) {
  std::vector<ComplexMatrix> images(static_cast<size_t>(m) * m, ComplexMatrix(n, n));
  for (int i = 0; i < m; ++i)
    images[static_cast<size_t>(i) * m + i] = ComplexMatrix::identity(n) * cxd(1.0 / m);
  return from_matrix_unit_images(m, n, images);
}

CPMap CPMap::restricted_to(const OperatorSystem& S) const {
  if (S.ambient_dim() != m_)
    throw DimensionMismatchError("operator system ambient dimension mismatch");
  std::vector<ComplexMatrix> images;
  images.reserve(S.dim());
  for (const auto& b : S.basis()) images.push_back(apply(b));
  return on_system(S, n_, std::move(images));
}

CPMap CPMap::on_system(const OperatorSystem& S, int n, std::vector<ComplexMatrix> images) {
  if (static_cast<int>(images.size()) != S.dim())
    throw DimensionMismatchError("one image per basis element required");
  for (const auto& img : images)
    if (img.rows() != n || img.cols() != n)
      throw DimensionMismatchError("image is not n x n");
  CPMap t;
  t.domain_ = Domain::System;
  t.m_ = S.ambient_dim();
  t.n_ = n;
  t.system_ = S;
  t.basis_images_ = std::move(images);
  return t;
}

const OperatorSystem& CPMap::system() const {
  if (!system_) throw DomainNotFullAlgebraError("map has full-algebra domain");
  return *system_;
}

const ComplexMatrix& CPMap::choi() const {
  if (!choi_) throw DomainNotFullAlgebraError("Choi matrix requires the full-algebra domain");
  return *choi_;
}

ComplexMatrix CPMap::apply(const ComplexMatrix& x) const {
  if (x.rows() != m_ || x.cols() != m_)
    throw DimensionMismatchError("argument is not m x m");
  if (domain_ == Domain::Full) {
    ComplexMatrix lifted = kron(x.transpose(), ComplexMatrix::identity(n_));
    return partial_trace(lifted * (*choi_), m_, n_, Factor::First);
  }
  if (!system_->contains(x, 1e-6))
    throw InvalidInputError("argument is not in the operator system");
  std::vector<cxd> coords = system_->project(x);
  ComplexMatrix out(n_, n_);
  for (size_t k = 0; k < coords.size(); ++k) out += basis_images_[k] * coords[k];
  return out;
}

ComplexMatrix CPMap::apply_dual(const ComplexMatrix& rho) const {
  if (domain_ != Domain::Full)
    throw DomainNotFullAlgebraError("trace dual requires the full-algebra domain");
  if (rho.rows() != n_ || rho.cols() != n_)
    throw DimensionMismatchError("argument is not n x n");
  ComplexMatrix lifted = kron(ComplexMatrix::identity(m_), rho);
  return partial_trace(lifted * (*choi_), m_, n_, Factor::Second).transpose();
}

CPMap CPMap::compose(const CPMap& other) const {
  if (other.output_dim() != m_)
    throw DimensionMismatchError("composition dimension mismatch");
  if (domain_ != Domain::Full || other.domain_ != Domain::Full)
    throw DomainNotFullAlgebraError("composition requires full-algebra domains");
  const int p = other.input_dim();
  std::vector<ComplexMatrix> images;
  images.reserve(static_cast<size_t>(p) * p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      images.push_back(apply(other.apply(ComplexMatrix::unit(p, i, j))));
  return from_matrix_unit_images(p, n_, images);
}

bool CPMap::is_unital(double tol) const {
  ComplexMatrix img = apply(ComplexMatrix::identity(m_));
  return (img - ComplexMatrix::identity(n_)).frobenius_norm() <= tol * std::sqrt(1.0 * n_);
}

double CPMap::min_choi_eigenvalue() const { return min_eigenvalue(choi(), 1e-8); }

bool CPMap::is_cp(double tol) const {
  if (domain_ == Domain::Full) return min_choi_eigenvalue() >= -tol;
  Rng rng(71);
  for (int k = 0; k < 48; ++k) {
    ComplexMatrix y(m_, m_);
    for (const auto& b : system_->basis()) y += b * cxd(rng.gaussian());
    const double lam = min_eigenvalue(y);
    if (lam < 0.0) y += ComplexMatrix::identity(m_) * cxd(-lam);
    if (min_eigenvalue(apply(y)) < -tol * std::max(1.0, operator_norm(y))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// StateWeights

StateWeights::StateWeights(std::vector<cxd> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw WeightMismatchError("empty weight vector");
  double norm2 = 0.0;
  for (const auto& w : weights_) {
    if (std::abs(w) < 1e-14) throw WeightMismatchError("weights must be nonzero");
    norm2 += std::norm(w);
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& w : weights_) w *= scale;
}

ComplexMatrix StateWeights::lambda_matrix() const {
  const int n = size();
  ComplexMatrix lam(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lam(i, j) = std::conj(weights_[i]) * weights_[j];
  return lam;
}

ComplexMatrix StateWeights::phi0_density() const {
  const int n = size();
  ComplexMatrix rho(n, n);
  for (int i = 0; i < n; ++i) rho(i, i) = std::norm(weights_[i]);
  return rho;
}

// ---------------------------------------------------------------------------
// PositiveFunctional

PositiveFunctional::PositiveFunctional(int level, int m,
                                       std::optional<OperatorSystem> system,
                                       std::vector<cxd> values)
    : level_(level), m_(m), system_(std::move(system)), values_(std::move(values)) {
  if (level_ <= 0 || m_ <= 0) throw InvalidInputError("dimensions must be positive");
  const size_t dim = system_ ? system_->dim() : static_cast<size_t>(m_) * m_;
  if (values_.size() != dim * level_ * level_)
    throw LevelMismatchError("value table size does not match basis x level");
}

const OperatorSystem& PositiveFunctional::system() const {
  if (!system_) throw DomainNotFullAlgebraError("functional lives on the full algebra");
  return *system_;
}

std::vector<ComplexMatrix> PositiveFunctional::domain_basis() const {
  return system_ ? system_->basis() : hermitian_basis(m_);
}

PositiveFunctional PositiveFunctional::from_density(int m, int level,
                                                    const ComplexMatrix& rho) {
  if (rho.rows() != m * level || rho.cols() != m * level)
    throw DimensionMismatchError("density is not (m n) x (m n)");
  auto basis = hermitian_basis(m);
  std::vector<cxd> values;
  values.reserve(basis.size() * level * level);
  for (const auto& b : basis)
    for (int i = 0; i < level; ++i)
      for (int j = 0; j < level; ++j)
        values.push_back((rho * kron(b, ComplexMatrix::unit(level, i, j))).trace());
  return PositiveFunctional(level, m, std::nullopt, std::move(values));
}

cxd PositiveFunctional::evaluate(const ComplexMatrix& Y) const {
  const int n = level_;
  if (Y.rows() != m_ * n || Y.cols() != m_ * n)
    throw DimensionMismatchError("element is not (m n) x (m n)");
  auto basis = domain_basis();
  cxd total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ComplexMatrix block(m_, m_);
      for (int a = 0; a < m_; ++a)
        for (int b = 0; b < m_; ++b) block(a, b) = Y(a * n + i, b * n + j);
      if (system_ && !system_->contains(block, 1e-6))
        throw InvalidInputError("block is not in the operator system");
      for (size_t k = 0; k < basis.size(); ++k)
        total += hs_inner(basis[k], block) * value(static_cast<int>(k), i, j);
    }
  return total;
}

ComplexMatrix PositiveFunctional::density() const {
  if (system_) throw DomainNotFullAlgebraError("density requires the full-algebra domain");
  auto basis = hermitian_basis(m_);
  ComplexMatrix rho(m_ * level_, m_ * level_);
  for (size_t k = 0; k < basis.size(); ++k)
    for (int i = 0; i < level_; ++i)
      for (int j = 0; j < level_; ++j)
        rho += kron(basis[k], ComplexMatrix::unit(level_, j, i)) * value(static_cast<int>(k), i, j);
  return rho;
}

bool PositiveFunctional::is_state(double tol) const {
  const cxd v = evaluate(ComplexMatrix::identity(m_ * level_));
  return std::abs(v - 1.0) <= tol;
}

double PositiveFunctional::positivity_min(int samples, uint64_t seed) const {
  Rng rng(seed);
  double worst = 0.0;
  OperatorSystem full = system_ ? *system_ : make_operator_system(hermitian_basis(m_), m_);
  for (int s = 0; s < samples; ++s) {
    ComplexMatrix y = sample_level_positive(full, level_, rng);
    worst = std::min(worst, evaluate(y).real());
  }
  return worst;
}

ComplexMatrix sample_level_positive(const OperatorSystem& S, int level, Rng& rng) {
  const int m = S.ambient_dim();
  ComplexMatrix y(m * level, m * level);
  for (int i = 0; i < level; ++i)
    for (int j = i; j < level; ++j) {
      ComplexMatrix block(m, m);
      if (i == j) {
        for (const auto& b : S.basis()) block += b * cxd(rng.gaussian());
      } else {
        for (const auto& b : S.basis()) block += b * rng.complex_gaussian();
      }
      ComplexMatrix unit_ij(level, level);
      unit_ij(i, j) = 1.0;
      y += kron(block, unit_ij);
      if (i != j) {
        ComplexMatrix unit_ji(level, level);
        unit_ji(j, i) = 1.0;
        y += kron(block.adjoint(), unit_ji);
      }
    }
  const double lam = min_eigenvalue(y, 1e-8);
  if (lam < 0.0) y += ComplexMatrix::identity(m * level) * cxd(-lam);
  return y;
}

// ---------------------------------------------------------------------------
// Correspondence

PositiveFunctional functional_from_cpmap(const CPMap& tau, int level) {
  const int n = tau.output_dim();
  if (level >= 0 && level != n)
    throw LevelMismatchError("level does not match the map's output dimension");
  std::optional<OperatorSystem> sys;
  std::vector<ComplexMatrix> basis;
  if (tau.domain() == CPMap::Domain::System) {
    sys = tau.system();
    basis = sys->basis();
  } else {
    basis = hermitian_basis(tau.input_dim());
  }
  std::vector<cxd> values;
  values.reserve(basis.size() * n * n);
  for (const auto& b : basis) {
    ComplexMatrix img = tau.apply(b);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) values.push_back(img(i, j) / static_cast<double>(n));
  }
  return PositiveFunctional(n, tau.input_dim(), std::move(sys), std::move(values));
}

CPMap cpmap_from_functional(const PositiveFunctional& s, uint64_t seed) {
  const int n = s.level();
  const int m = s.ambient_dim();
  if (s.on_full_algebra()) {
    const double floor = min_eigenvalue(s.density().hermitian_part(), 1e-6);
    if (floor < -1e-8 * std::max(1.0, s.density().frobenius_norm()))
      throw NotPositiveError("functional density has a negative eigenvalue");
  } else if (s.positivity_min(48, seed) < -1e-8) {
    throw NotPositiveError("functional is negative on a sampled positive element");
  }

  auto basis = s.domain_basis();
  std::vector<ComplexMatrix> basis_images;
  basis_images.reserve(basis.size());
  for (size_t k = 0; k < basis.size(); ++k) {
    ComplexMatrix img(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        img(i, j) = static_cast<double>(n) * s.value(static_cast<int>(k), i, j);
    basis_images.push_back(std::move(img));
  }
  if (!s.on_full_algebra()) return CPMap::on_system(s.system(), n, std::move(basis_images));

  // Convert Hermitian-basis images to matrix-unit images:
  // e_ij = sum_k (b_k)_ji b_k.
  std::vector<ComplexMatrix> unit_images(static_cast<size_t>(m) * m, ComplexMatrix(n, n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      ComplexMatrix img(n, n);
      for (size_t k = 0; k < basis.size(); ++k) img += basis_images[k] * basis[k](j, i);
      unit_images[static_cast<size_t>(i) * m + j] = std::move(img);
    }
  return CPMap::from_matrix_unit_images(m, n, unit_images);
}

PositiveFunctional weighted_functional(const CPMap& tau, const StateWeights& w) {
  const int n = tau.output_dim();
  if (w.size() != n) throw WeightMismatchError("weight count does not match output dimension");
  PositiveFunctional s = functional_from_cpmap(tau);
  // Schur scaling of the level blocks, normalized so that
  // s(x (x) I_n) reproduces phi_0(tau(x)) rather than its average.
  std::vector<cxd> values(s.values());
  const auto& lam = w.weights();
  const size_t basis_dim = values.size() / (static_cast<size_t>(n) * n);
  for (size_t k = 0; k < basis_dim; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        values[(k * n + i) * n + j] *= static_cast<double>(n) * std::conj(lam[i]) * lam[j];
  std::optional<OperatorSystem> sys;
  if (!s.on_full_algebra()) sys = s.system();
  return PositiveFunctional(n, s.ambient_dim(), std::move(sys), std::move(values));
}

bool is_faithful(const CPMap& tau, double tol) {
  if (tau.domain() == CPMap::Domain::Full) {
    ComplexMatrix reduced = partial_trace(tau.choi(), tau.input_dim(), tau.output_dim(),
                                          Factor::Second);
    return min_eigenvalue(reduced.hermitian_part(), 1e-8) > tol;
  }
  return is_faithful_on_system(tau, tol);
}

double kadison_schwarz_check(const CPMap& tau, const ComplexMatrix& x) {
  ComplexMatrix lhs = tau.apply(x.adjoint() * x);
  ComplexMatrix rhs = tau.apply(x.adjoint()) * tau.apply(x);
  return min_eigenvalue((lhs - rhs).hermitian_part(), 1e-8);
}

// ---------------------------------------------------------------------------
// Fixed points

namespace {

ComplexMatrix map_matrix_on_units(const CPMap& tau, bool dual) {
  const int m = dual ? tau.output_dim() : tau.input_dim();
  const int out = dual ? tau.input_dim() : tau.output_dim();
  ComplexMatrix T(out * out, m * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      ComplexMatrix img = dual ? tau.apply_dual(ComplexMatrix::unit(m, a, b))
                               : tau.apply(ComplexMatrix::unit(m, a, b));
      const int col = a * m + b;
      for (int i = 0; i < out; ++i)
        for (int j = 0; j < out; ++j) T(i * out + j, col) = img(i, j);
    }
  return T;
}

ComplexMatrix unvec(const std::vector<cxd>& v, int m) {
  ComplexMatrix x(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) x(i, j) = v[static_cast<size_t>(i) * m + j];
  return x;
}

}  // namespace

std::optional<ComplexMatrix> invariant_state(const CPMap& tau, double tol) {
  if (tau.domain() != CPMap::Domain::Full || tau.input_dim() != tau.output_dim())
    throw DomainNotFullAlgebraError("invariant state requires a map on M_m");
  const int m = tau.input_dim();
  ComplexMatrix T = map_matrix_on_units(tau, /*dual=*/true);
  ComplexMatrix K = T - ComplexMatrix::identity(m * m);

  ComplexMatrix V0 = null_space(K, tol);
  ComplexMatrix W0 = null_space(K.adjoint(), tol);
  if (V0.cols() == 0 || V0.cols() != W0.cols()) return std::nullopt;

  // Split vec(I/m) = fixed + (T - I) w; the fixed component is the
  // Cesaro limit of the dual iteration started at the maximally mixed state.
  const int k0 = V0.cols();
  ComplexMatrix small(k0, k0);
  std::vector<cxd> rhs(k0);
  std::vector<cxd> target(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i) target[static_cast<size_t>(i) * m + i] = 1.0 / m;
  for (int r = 0; r < k0; ++r) {
    for (int c = 0; c < k0; ++c) {
      cxd s = 0.0;
      for (int t = 0; t < m * m; ++t) s += std::conj(W0(t, r)) * V0(t, c);
      small(r, c) = s;
    }
    cxd s = 0.0;
    for (int t = 0; t < m * m; ++t) s += std::conj(W0(t, r)) * target[t];
    rhs[r] = s;
  }
  std::vector<cxd> alpha;
  try {
    alpha = solve_linear(small, rhs);
  } catch (const SolverFailureError&) {
    return std::nullopt;
  }
  std::vector<cxd> rho_vec(static_cast<size_t>(m) * m);
  for (int t = 0; t < m * m; ++t) {
    cxd s = 0.0;
    for (int c = 0; c < k0; ++c) s += V0(t, c) * alpha[static_cast<size_t>(c)];
    rho_vec[static_cast<size_t>(t)] = s;
  }
  ComplexMatrix rho = unvec(rho_vec, m).hermitian_part();
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > 1e-6) return std::nullopt;
  rho *= cxd(1.0 / tr);
  if ((tau.apply_dual(rho) - rho).frobenius_norm() > 1e-7 * std::max(1.0, rho.frobenius_norm()))
    return std::nullopt;
  return rho;
}

std::vector<ComplexMatrix> fixed_point_algebra(const CPMap& tau, double tol) {
  if (tau.domain() != CPMap::Domain::Full || tau.input_dim() != tau.output_dim())
    throw DomainNotFullAlgebraError("fixed point algebra requires a map on M_m");
  const int m = tau.input_dim();

  std::optional<ComplexMatrix> rho = invariant_state(tau, std::min(tol, 1e-8));
  if (!rho || min_eigenvalue(*rho, 1e-8) <= 1e-8)
    throw NoFaithfulInvariantStateError("no faithful invariant state found");

  // Matrix of tau on the real span of the Hermitian basis.
  auto hb = hermitian_basis(m);
  const int d = static_cast<int>(hb.size());
  ComplexMatrix A(d, d);
  for (int b = 0; b < d; ++b) {
    ComplexMatrix img = tau.apply(hb[b]);
    for (int a = 0; a < d; ++a) A(a, b) = hs_inner(hb[a], img).real();
  }
  ComplexMatrix N = null_space(A - ComplexMatrix::identity(d), tol);

  std::vector<ComplexMatrix> basis;
  basis.reserve(N.cols());
  for (int c = 0; c < N.cols(); ++c) {
    ComplexMatrix x(m, m);
    for (int a = 0; a < d; ++a) x += hb[a] * N(a, c);
    basis.push_back(x.hermitian_part());
  }

  // The span must contain the identity and close under products; both are
  // consequences of the faithful invariant state.
  auto span_residual = [&](const ComplexMatrix& p) {
    ComplexMatrix r = p;
    for (const auto& x : basis) r -= x * hs_inner(x, p);
    return r.frobenius_norm();
  };
  if (span_residual(ComplexMatrix::identity(m)) > tol * m)
    throw ClosureViolationError("identity escapes the fixed-point span");
  for (size_t r = 0; r < basis.size(); ++r)
    for (size_t s = r; s < basis.size(); ++s) {
      ComplexMatrix p = basis[r] * basis[s];
      if (span_residual(p) > tol * std::max(1.0, p.frobenius_norm()))
        throw ClosureViolationError("fixed-point span is not closed under products");
    }
  return basis;
}

}  // namespace osk
