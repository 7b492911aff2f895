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

#include "osk/opsys.hpp"

#include <cmath>

namespace osk {

namespace {

// Orthonormalize Hermitian candidates against `basis` (real span, trace
// inner product), appending the surviving directions.
void gram_schmidt_append(std::vector<ComplexMatrix>& basis,
                         const std::vector<ComplexMatrix>& candidates) {
  for (const ComplexMatrix& cand : candidates) {
    ComplexMatrix v = cand;
    const double scale = std::max(1.0, v.frobenius_norm());
    for (int pass = 0; pass < 2; ++pass) {
      for (const ComplexMatrix& b : basis) {
        const double coeff = hs_inner(b, v).real();
        v -= b * cxd(coeff);
      }
    }
    const double norm = v.frobenius_norm();
    if (norm <= 1e-10 * scale) continue;
    basis.push_back(v * cxd(1.0 / norm));
  }
}

}  // namespace

OperatorSystem make_operator_system(const std::vector<ComplexMatrix>& generators, int m) {
  if (m <= 0) throw InvalidInputError("ambient dimension must be positive");
  for (const auto& g : generators)
    if (g.rows() != m || g.cols() != m)
      throw DimensionMismatchError("generator is not m x m");

  OperatorSystem s;
  s.m_ = m;
  s.generators_ = generators;

  std::vector<ComplexMatrix> candidates;
  candidates.push_back(ComplexMatrix::identity(m));
  for (const auto& g : generators) {
    candidates.push_back(g.hermitian_part());
    candidates.push_back(g.antihermitian_part());
  }
  gram_schmidt_append(s.basis_, candidates);
  return s;
}

std::vector<cxd> OperatorSystem::project(const ComplexMatrix& x) const {
  if (x.rows() != m_ || x.cols() != m_)
    throw DimensionMismatchError("element is not m x m");
  std::vector<cxd> coords(basis_.size());
  for (size_t i = 0; i < basis_.size(); ++i) coords[i] = hs_inner(basis_[i], x);
  return coords;
}

ComplexMatrix OperatorSystem::assemble(const std::vector<cxd>& coords) const {
  if (coords.size() != basis_.size())
    throw DimensionMismatchError("coordinate count does not match basis");
  ComplexMatrix x(m_, m_);
  for (size_t i = 0; i < basis_.size(); ++i) x += basis_[i] * coords[i];
  return x;
}

double OperatorSystem::membership_residual(const ComplexMatrix& x) const {
  ComplexMatrix r = x - assemble(project(x));
  return trace_norm(r);
}

bool OperatorSystem::contains(const ComplexMatrix& x, double tol) const {
  return membership_residual(x) <= tol;
}

bool OperatorSystem::spans_full_algebra(double tol) const {
  if (dim() != m_ * m_) return false;
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j)
      if (!contains(ComplexMatrix::unit(m_, i, j), tol)) return false;
  return true;
}

std::vector<ComplexMatrix> OperatorSystem::hermitian_complement_basis() const {
  std::vector<ComplexMatrix> full = basis_;
  gram_schmidt_append(full, hermitian_basis(m_));
  return {full.begin() + dim(), full.end()};
}

std::vector<ComplexMatrix> positive_cone_sample(const OperatorSystem& S, int count,
                                                uint64_t seed) {
  if (count < 1) throw InvalidInputError("count must be >= 1");
  Rng rng(seed);
  std::vector<ComplexMatrix> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    ComplexMatrix y(S.ambient_dim(), S.ambient_dim());
    for (const auto& b : S.basis()) y += b * cxd(rng.gaussian());
    const double lam = min_eigenvalue(y, 1e-8);
    if (lam < 0.0) y += ComplexMatrix::identity(S.ambient_dim()) * cxd(-lam);
    const double norm = operator_norm(y);
    if (norm > 1e-12) y *= cxd(1.0 / norm);
    out.push_back(std::move(y));
  }
  return out;
}

FunctionSystem::FunctionSystem(int omega_size, std::vector<std::vector<cxd>> functions)
    : omega_(omega_size) {
  if (omega_size <= 0) throw InvalidInputError("omega must be non-empty");
  for (const auto& f : functions)
    if (static_cast<int>(f.size()) != omega_size)
      throw DimensionMismatchError("function length does not match omega");
  // Close under constants and conjugation; duplicates are dropped so the
  // construction is stable under serialization round trips.
  auto push_unique = [this](std::vector<cxd> f) {
    for (const auto& g : functions_) {
      double diff = 0.0, scale = 1.0;
      for (size_t i = 0; i < f.size(); ++i) {
        diff = std::max(diff, std::abs(f[i] - g[i]));
        scale = std::max(scale, std::abs(f[i]));
      }
      if (diff <= 1e-12 * scale) return;
    }
    functions_.push_back(std::move(f));
  };
  push_unique(std::vector<cxd>(omega_size, cxd(1.0)));
  for (auto& f : functions) {
    std::vector<cxd> conj_f(f.size());
    for (size_t i = 0; i < f.size(); ++i) conj_f[i] = std::conj(f[i]);
    push_unique(std::move(f));
    push_unique(std::move(conj_f));
  }
}

OperatorSystem FunctionSystem::to_operator_system() const {
  std::vector<ComplexMatrix> gens;
  gens.reserve(functions_.size());
  for (const auto& f : functions_) gens.push_back(ComplexMatrix::diag(f));
  return make_operator_system(gens, omega_);
}

bool separates_points(const FunctionSystem& F, double tol) {
  const int k = F.omega_size();
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      bool separated = false;
      for (const auto& f : F.functions())
        if (std::abs(f[a] - f[b]) > tol) {
          separated = true;
          break;
        }
      if (!separated) return false;
    }
  return true;
}

}  // namespace osk
