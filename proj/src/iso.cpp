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

#include "osk/iso.hpp"

#include <algorithm>
#include <cmath>

#include "osk/cpmaps.hpp"

namespace osk {

// ---------------------------------------------------------------------------
// Norm invariants

double invariant(const ComplexMatrix& x, int k, cxd lambda) {
  if (!x.is_square()) throw DimensionMismatchError("element must be square");
  if (k < 1) throw InvalidInputError("k must be >= 1");
  ComplexMatrix shifted = x * cxd(static_cast<double>(k));
  for (int i = 0; i < x.rows(); ++i) shifted(i, i) += lambda;
  const double norm = operator_norm(shifted);
  if (k == 1) return norm;
  return std::max(std::abs(lambda), norm);
}

std::vector<cxd> default_lambda_grid(const ComplexMatrix& x) {
  const double scale = operator_norm(x);
  std::vector<cxd> base = {cxd(0.0),        cxd(1.0),  cxd(-1.0),
                           cxd(0.0, 1.0),   cxd(0.0, -1.0), cxd(1.0, 1.0)};
  std::vector<cxd> grid = base;
  if (scale > 1e-12 && std::abs(scale - 1.0) > 1e-12)
    for (const auto& l : base)
      if (l != cxd(0.0)) grid.push_back(l * scale);
  return grid;
}

std::vector<InvariantSample> invariant_profile(const ComplexMatrix& x,
                                               const std::vector<int>& ks,
                                               const std::vector<cxd>& lambdas) {
  std::vector<InvariantSample> out;
  out.reserve(ks.size() * lambdas.size());
  for (int k : ks)
    for (const auto& l : lambdas) out.push_back({k, l, invariant(x, k, l)});
  return out;
}

bool invariants_match(const ComplexMatrix& x, const ComplexMatrix& y,
                      const std::vector<int>& ks, const std::vector<cxd>& lambdas,
                      double tol) {
  if (ks.empty() || lambdas.empty()) throw InvalidInputError("grids must be nonempty");
  for (int k : ks)
    for (const auto& l : lambdas)
      if (std::abs(invariant(x, k, l) - invariant(y, k, l)) > tol) return false;
  return true;
}

// ---------------------------------------------------------------------------
// LinearMatrixMap

LinearMatrixMap::LinearMatrixMap(int m, int out_dim, std::vector<ComplexMatrix> unit_images)
    : m_(m), out_(out_dim), images_(std::move(unit_images)) {
  if (static_cast<int>(images_.size()) != m * m)
    throw DimensionMismatchError("need m*m matrix unit images");
  for (const auto& img : images_)
    if (img.rows() != out_ || img.cols() != out_)
      throw DimensionMismatchError("image dimension mismatch");
}

LinearMatrixMap LinearMatrixMap::conjugation(const ComplexMatrix& u) {
  return two_sided(u, u);
}

LinearMatrixMap LinearMatrixMap::two_sided(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (!u.is_square() || u.rows() != v.rows() || !v.is_square())
    throw DimensionMismatchError("two-sided map needs square factors of equal size");
  const int m = u.rows();
  std::vector<ComplexMatrix> images;
  images.reserve(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      images.push_back(u * ComplexMatrix::unit(m, i, j) * v.adjoint());
  return LinearMatrixMap(m, m, std::move(images));
}

ComplexMatrix LinearMatrixMap::apply(const ComplexMatrix& x) const {
  if (x.rows() != m_ || x.cols() != m_)
    throw DimensionMismatchError("argument is not m x m");
  ComplexMatrix out(out_, out_);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) {
      const cxd v = x(i, j);
      if (v == cxd(0.0)) continue;
      out += images_[static_cast<size_t>(i) * m_ + j] * v;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Complete order isomorphism check

namespace {

// Linear extension of basis |-> images to the full algebra, valid when the
// source spans M_m: e_ab = sum_k (b_k)_ba b_k.
std::vector<ComplexMatrix> unit_images_from_basis(const OperatorSystem& S,
                                                  const std::vector<ComplexMatrix>& images,
                                                  int out_dim) {
  const int m = S.ambient_dim();
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<size_t>(m) * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      ComplexMatrix img(out_dim, out_dim);
      for (int k = 0; k < S.dim(); ++k) img += images[k] * S.basis()[k](b, a);
      out.push_back(std::move(img));
    }
  return out;
}

ComplexMatrix apply_blockwise(const OperatorSystem& S,
                              const std::vector<ComplexMatrix>& images, int out_dim,
                              const ComplexMatrix& Y, int level) {
  const int m = S.ambient_dim();
  ComplexMatrix out(out_dim * level, out_dim * level);
  for (int i = 0; i < level; ++i)
    for (int j = 0; j < level; ++j) {
      ComplexMatrix block(m, m);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) block(a, b) = Y(a * level + i, b * level + j);
      std::vector<cxd> coords = S.project(block);
      ComplexMatrix mapped(out_dim, out_dim);
      for (int k = 0; k < S.dim(); ++k) mapped += images[k] * coords[k];
      ComplexMatrix unit_ij(level, level);
      unit_ij(i, j) = 1.0;
      out += kron(mapped, unit_ij);
    }
  return out;
}

bool cp_at_sampled_levels(const OperatorSystem& S, const std::vector<ComplexMatrix>& images,
                          int out_dim, int max_level, int samples, Rng& rng, double tol) {
  for (int level = 1; level <= max_level; ++level) {
    for (int s = 0; s < samples; ++s) {
      ComplexMatrix y = sample_level_positive(S, level, rng);
      // Mix in compressions s (x) w w* of cone elements for extra coverage.
      if (s % 3 == 0) {
        ComplexMatrix pos(S.ambient_dim(), S.ambient_dim());
        for (const auto& b : S.basis()) pos += b * cxd(rng.gaussian());
        const double lam = min_eigenvalue(pos);
        if (lam < 0.0) pos += ComplexMatrix::identity(S.ambient_dim()) * cxd(-lam);
        ComplexMatrix w(level, level);
        std::vector<cxd> vec(level);
        for (auto& v : vec) v = rng.complex_gaussian();
        for (int a = 0; a < level; ++a)
          for (int b = 0; b < level; ++b) w(a, b) = vec[a] * std::conj(vec[b]);
        y = kron(pos, w);
      }
      ComplexMatrix mapped = apply_blockwise(S, images, out_dim, y, level);
      const double scale = std::max(1.0, operator_norm(y));
      if (min_eigenvalue(mapped.hermitian_part(), 1e-7) < -tol * scale) return false;
    }
  }
  return true;
}

}  // namespace

bool is_complete_order_iso(const OrderIsoSpec& spec, uint64_t seed, int samples_per_level,
                           double tol) {
  const OperatorSystem& S = spec.source;
  const OperatorSystem& T = spec.target;
  const int m = S.ambient_dim();
  const int mp = T.ambient_dim();

  if (static_cast<int>(spec.images.size()) != S.dim())
    throw DimensionMismatchError("one image per source basis element required");
  for (const auto& img : spec.images) {
    if (!img.is_hermitian(1e-8))
      throw InvalidInputError("map is not adjoint-preserving on the Hermitian basis");
    if (!T.contains(img, 1e-6))
      throw NotBijectiveError("an image escapes the target span");
  }

  if (S.dim() != T.dim()) throw NotBijectiveError("span dimensions differ");
  ComplexMatrix B(T.dim(), S.dim());
  for (int s = 0; s < S.dim(); ++s) {
    std::vector<cxd> coords = T.project(spec.images[s]);
    for (int t = 0; t < T.dim(); ++t) B(t, s) = coords[t];
  }
  EigResult be = hermitian_eig(B.adjoint() * B, 1e-8);
  if (be.eigenvalues.front() <= 1e-14 * std::max(1.0, be.eigenvalues.back()))
    throw NotBijectiveError("span map is singular");

  // Unitality.
  std::vector<cxd> id_coords = S.project(ComplexMatrix::identity(m));
  ComplexMatrix id_image(mp, mp);
  for (int k = 0; k < S.dim(); ++k) id_image += spec.images[k] * id_coords[k];
  if ((id_image - ComplexMatrix::identity(mp)).frobenius_norm() > 1e-8 * mp)
    throw NotUnitalError("map does not send I to I");

  // Inverse images by solving the coordinate system columnwise.
  std::vector<ComplexMatrix> inverse_images(T.dim(), ComplexMatrix(m, m));
  for (int t = 0; t < T.dim(); ++t) {
    std::vector<cxd> rhs(T.dim(), cxd(0.0));
    rhs[t] = 1.0;
    std::vector<cxd> coeff = solve_linear(B, rhs);
    ComplexMatrix pre(m, m);
    for (int k = 0; k < S.dim(); ++k) pre += S.basis()[k] * coeff[k];
    inverse_images[t] = pre;
  }

  const int max_level = std::max(m, mp);
  Rng rng(seed);

  // Exact certificates through the Choi matrix wherever a span is full.
  if (S.spans_full_algebra()) {
    CPMap full = CPMap::from_matrix_unit_images(m, mp,
                                                unit_images_from_basis(S, spec.images, mp));
    if (full.min_choi_eigenvalue() < -tol) return false;
  } else if (!cp_at_sampled_levels(S, spec.images, mp, max_level, samples_per_level, rng,
                                   tol)) {
    return false;
  }
  if (T.spans_full_algebra()) {
    CPMap full_inv = CPMap::from_matrix_unit_images(
        mp, m, unit_images_from_basis(T, inverse_images, m));
    if (full_inv.min_choi_eigenvalue() < -tol) return false;
  } else if (!cp_at_sampled_levels(T, inverse_images, m, max_level, samples_per_level, rng,
                                   tol)) {
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Implementing unitary

namespace {

// Simultaneous diagonalization of a normal matrix via its Hermitian and
// anti-Hermitian parts; nullopt when x is not normal enough.
struct NormalEig {
  ComplexMatrix vectors;
  std::vector<cxd> values;
};

std::optional<NormalEig> normal_eig(const ComplexMatrix& x) {
  const int n = x.rows();
  const double scale = std::max(1.0, x.frobenius_norm());
  if ((x * x.adjoint() - x.adjoint() * x).frobenius_norm() > 1e-9 * scale * scale)
    return std::nullopt;
  ComplexMatrix h1 = x.hermitian_part();
  ComplexMatrix h2 = x.antihermitian_part();
  EigResult e1 = hermitian_eig(h1, 1e-8);
  ComplexMatrix v = e1.eigenvectors;

  // Rotate inside H1 eigenclusters to diagonalize H2 there.
  const double ctol = 1e-7 * scale;
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && e1.eigenvalues[end] - e1.eigenvalues[end - 1] <= ctol) ++end;
    const int size = end - start;
    if (size > 1) {
      ComplexMatrix vc(n, size);
      for (int c = 0; c < size; ++c)
        for (int i = 0; i < n; ++i) vc(i, c) = v(i, start + c);
      ComplexMatrix compressed = vc.adjoint() * h2 * vc;
      EigResult e2 = hermitian_eig(compressed.hermitian_part(), 1e-7);
      ComplexMatrix rotated = vc * e2.eigenvectors;
      for (int c = 0; c < size; ++c)
        for (int i = 0; i < n; ++i) v(i, start + c) = rotated(i, c);
    }
    start = end;
  }

  NormalEig out;
  out.vectors = v;
  out.values.resize(n);
  ComplexMatrix d = v.adjoint() * x * v;
  double offdiag = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j)
        out.values[i] = d(i, i);
      else
        offdiag += std::norm(d(i, j));
    }
  if (std::sqrt(offdiag) > 1e-7 * scale) return std::nullopt;
  return out;
}

// Greedy minimal-distance matching of two small eigenvalue lists.
std::optional<std::vector<int>> match_values(const std::vector<cxd>& a,
                                             const std::vector<cxd>& b, double tol) {
  const int n = static_cast<int>(a.size());
  std::vector<int> match(n, -1);
  std::vector<bool> used(n, false);
  for (int round = 0; round < n; ++round) {
    double best = 1e300;
    int bi = -1, bj = -1;
    for (int i = 0; i < n; ++i) {
      if (match[i] >= 0) continue;
      for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        const double d = std::abs(a[i] - b[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (best > tol) return std::nullopt;
    match[bi] = bj;
    used[bj] = true;
  }
  return match;
}

ComplexMatrix polar_unitary(const ComplexMatrix& a) {
  EigResult e = hermitian_eig((a.adjoint() * a).hermitian_part(), 1e-7);
  const int n = a.rows();
  ComplexMatrix inv_sqrt(n, n);
  for (int k = 0; k < n; ++k) {
    const double lam = 1.0 / std::sqrt(std::max(e.eigenvalues[k], 1e-30));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        inv_sqrt(i, j) += cxd(lam) * e.eigenvectors(i, k) * std::conj(e.eigenvectors(j, k));
  }
  return a * inv_sqrt;
}

// Eigenbasis phase alignment for the Hermitian pair (anchor, partner):
// diagonalize the anchor on both sides, then read the phases off the
// partner's off-diagonal entries along a spanning forest.
std::optional<ComplexMatrix> phase_match(const ComplexMatrix& anchor_x,
                                         const ComplexMatrix& partner_x,
                                         const ComplexMatrix& anchor_y,
                                         const ComplexMatrix& partner_y) {
  const int n = anchor_x.rows();
  const double scale = std::max(1.0, anchor_x.frobenius_norm() + partner_x.frobenius_norm());
  EigResult ex = hermitian_eig(anchor_x, 1e-7);
  EigResult ey = hermitian_eig(anchor_y, 1e-7);
  for (int k = 0; k < n; ++k)
    if (std::abs(ex.eigenvalues[k] - ey.eigenvalues[k]) > 1e-6 * scale) return std::nullopt;
  for (int k = 0; k + 1 < n; ++k)
    if (ex.eigenvalues[k + 1] - ex.eigenvalues[k] <= 1e-6 * scale) return std::nullopt;

  ComplexMatrix bx = ex.eigenvectors.adjoint() * partner_x * ex.eigenvectors;
  ComplexMatrix by = ey.eigenvectors.adjoint() * partner_y * ey.eigenvectors;
  for (int k = 0; k < n; ++k)
    if (std::abs(bx(k, k) - by(k, k)) > 1e-5 * scale) return std::nullopt;

  // theta_a bx_ab conj(theta_b) = by_ab along edges with usable weight.
  std::vector<cxd> theta(n, cxd(0.0));
  const double edge_floor = 1e-7 * scale;
  for (int root = 0; root < n; ++root) {
    if (theta[root] != cxd(0.0)) continue;
    theta[root] = 1.0;
    std::vector<int> queue = {root};
    while (!queue.empty()) {
      const int a = queue.back();
      queue.pop_back();
      for (int b = 0; b < n; ++b) {
        if (theta[b] != cxd(0.0) || b == a) continue;
        if (std::abs(bx(a, b)) <= edge_floor) continue;
        if (std::abs(std::abs(bx(a, b)) - std::abs(by(a, b))) > 1e-5 * scale)
          return std::nullopt;
        // by_ab = theta_a bx_ab conj(theta_b).
        cxd t = std::conj(by(a, b) / (theta[a] * bx(a, b)));
        theta[b] = t / std::abs(t);
        queue.push_back(b);
      }
    }
  }
  ComplexMatrix phases(n, n);
  for (int k = 0; k < n; ++k) phases(k, k) = theta[k];
  return ey.eigenvectors * phases * ex.eigenvectors.adjoint();
}

}  // namespace

FindUnitaryResult find_implementing_unitary(const ComplexMatrix& x, const ComplexMatrix& y,
                                            double tol, int restarts, uint64_t seed) {
  if (!x.is_square() || x.rows() != y.rows() || !y.is_square())
    throw DimensionMismatchError("elements must be square of equal size");
  const int n = x.rows();

  FindUnitaryResult best;
  best.u = ComplexMatrix::identity(n);
  best.residual = operator_norm(x - y);
  auto consider = [&](const ComplexMatrix& u) {
    const double r = operator_norm(u * x * u.adjoint() - y);
    if (!best.found || r < best.residual) {
      best.u = u;
      best.residual = r;
      best.found = r <= tol;
    }
    return best.found;
  };
  if (consider(ComplexMatrix::identity(n))) return best;

  // Normal elements: match spectra and transport eigenbases.
  auto nx = normal_eig(x);
  auto ny = normal_eig(y);
  if (nx && ny) {
    const double scale = std::max(1.0, x.frobenius_norm());
    if (auto match = match_values(nx->values, ny->values, 1e-6 * scale)) {
      ComplexMatrix vy_perm(n, n);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) vy_perm(i, k) = ny->vectors(i, (*match)[k]);
      if (consider(vy_perm * nx->vectors.adjoint())) return best;
    }
  }

  // Hermitian-pair phase matching along generic anchors.
  ComplexMatrix h1x = x.hermitian_part(), h2x = x.antihermitian_part();
  ComplexMatrix h1y = y.hermitian_part(), h2y = y.antihermitian_part();
  std::vector<ComplexMatrix> candidates;
  for (double gamma : {0.0, 0.7548776662466927, -1.3247179572447456, 2.104069})
  {
    ComplexMatrix ax = h1x + h2x * cxd(gamma);
    ComplexMatrix ay = h1y + h2y * cxd(gamma);
    const ComplexMatrix& px = (gamma == 0.0) ? h2x : h1x;
    const ComplexMatrix& py = (gamma == 0.0) ? h2y : h1y;
    if (auto u0 = phase_match(ax, px, ay, py)) {
      if (consider(*u0)) return best;
      candidates.push_back(*u0);
    }
  }

  // Projected gradient descent on ||u x u* - y||_F^2 with polar retraction.
  Rng rng(seed);
  auto descend = [&](ComplexMatrix u) {
    double f = (u * x * u.adjoint() - y).frobenius_norm();
    f = f * f;
    double eta = 0.1 / std::max(1.0, x.frobenius_norm() * x.frobenius_norm());
    for (int it = 0; it < 500; ++it) {
      ComplexMatrix r = u * x * u.adjoint() - y;
      ComplexMatrix grad = (r * u * x.adjoint() + r.adjoint() * u * x) * cxd(2.0);
      bool moved = false;
      for (int ls = 0; ls < 30; ++ls) {
        ComplexMatrix trial = polar_unitary(u - grad * cxd(eta));
        ComplexMatrix rt = trial * x * trial.adjoint() - y;
        const double ft = rt.frobenius_norm() * rt.frobenius_norm();
        if (ft < f - 1e-14) {
          u = trial;
          f = ft;
          eta *= 1.5;
          moved = true;
          break;
        }
        eta *= 0.4;
      }
      if (!moved || f < tol * tol * 1e-4) break;
    }
    return u;
  };

  int used = 0;
  for (const auto& u0 : candidates) {
    if (used >= restarts) break;
    ++used;
    if (consider(descend(u0))) {
      best.restarts_used = used;
      return best;
    }
  }
  while (used < restarts) {
    ++used;
    if (consider(descend(haar_unitary(rng, n)))) break;
  }
  best.restarts_used = used;
  return best;
}

// ---------------------------------------------------------------------------
// Paulsen embedding

namespace {

// Orthonormalize complex candidates against basis under the HS inner
// product, appending the survivors.
void complex_gs_append(std::vector<ComplexMatrix>& basis,
                       const std::vector<ComplexMatrix>& candidates) {
  for (const ComplexMatrix& cand : candidates) {
    ComplexMatrix v = cand;
    const double scale = std::max(1.0, v.frobenius_norm());
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) v -= b * hs_inner(b, v);
    const double norm = v.frobenius_norm();
    if (norm <= 1e-9 * scale) continue;
    basis.push_back(v * cxd(1.0 / norm));
  }
}

}  // namespace

PaulsenSystem paulsen_embed(const std::vector<ComplexMatrix>& m_generators, int m) {
  for (const auto& g : m_generators)
    if (g.rows() != m || g.cols() != m)
      throw DimensionMismatchError("generator is not m x m");

  auto e2 = [](int i, int j) { return ComplexMatrix::unit(2, i, j); };
  std::vector<ComplexMatrix> sys_gens = {kron(e2(0, 0), ComplexMatrix::identity(m)),
                                         kron(e2(1, 1), ComplexMatrix::identity(m))};
  for (const auto& g : m_generators) {
    sys_gens.push_back(kron(e2(0, 1), g));
    sys_gens.push_back(kron(e2(1, 0), g.adjoint()));
  }

  PaulsenSystem ps;
  ps.m = m;
  ps.system = make_operator_system(sys_gens, 2 * m);
  complex_gs_append(ps.mspace, m_generators);

  // Generated C*-algebra: close the complex span of the system under
  // products until the dimension stabilizes.
  complex_gs_append(ps.algebra, sys_gens);
  complex_gs_append(ps.algebra, {ComplexMatrix::identity(2 * m)});
  for (;;) {
    const size_t before = ps.algebra.size();
    std::vector<ComplexMatrix> products;
    for (size_t a = 0; a < before; ++a)
      for (size_t b = 0; b < before; ++b) products.push_back(ps.algebra[a] * ps.algebra[b]);
    complex_gs_append(ps.algebra, products);
    if (ps.algebra.size() == before || ps.algebra.size() >= static_cast<size_t>(4 * m * m))
      break;
  }

  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      std::vector<ComplexMatrix> blocks;
      for (const auto& a : ps.algebra) {
        ComplexMatrix blk(m, m);
        for (int r = 0; r < m; ++r)
          for (int c = 0; c < m; ++c) blk(r, c) = a(i * m + r, j * m + c);
        blocks.push_back(std::move(blk));
      }
      complex_gs_append(ps.corners[i][j], blocks);
    }
  return ps;
}

PaulsenIso paulsen_iso_from_two_sided(const ComplexMatrix& u, const ComplexMatrix& v) {
  PaulsenIso iso;
  iso.alpha1 = LinearMatrixMap::conjugation(u);
  iso.tau = LinearMatrixMap::two_sided(u, v);
  iso.alpha2 = LinearMatrixMap::conjugation(v);
  return iso;
}

namespace {

double corner_residual(const std::vector<ComplexMatrix>& corner, const ComplexMatrix& x) {
  ComplexMatrix r = x;
  for (const auto& b : corner) r -= b * hs_inner(b, x);
  return r.frobenius_norm();
}

}  // namespace

double cocycle_check(const PaulsenSystem& ps, const PaulsenIso& iso, const ComplexMatrix& a,
                     const ComplexMatrix& b, const ComplexMatrix& c, double tol) {
  const double scale = 1.0 + a.frobenius_norm() + b.frobenius_norm() + c.frobenius_norm();
  if (corner_residual(ps.corners[0][0], a) > tol * scale ||
      corner_residual(ps.corners[0][1], b) > tol * scale ||
      corner_residual(ps.corners[1][1], c) > tol * scale)
    throw CornerMembershipViolationError("triple escapes the corner algebras");
  ComplexMatrix lhs = iso.tau.apply(a * b * c);
  ComplexMatrix rhs = iso.alpha1.apply(a) * iso.tau.apply(b) * iso.alpha2.apply(c);
  return operator_norm(lhs - rhs);
}

UnitarityCertificate unitarity_certificate(const ComplexMatrix& x, double tol) {
  if (!x.is_square()) throw DimensionMismatchError("element must be square");
  UnitarityCertificate cert;
  const ComplexMatrix eye = ComplexMatrix::identity(x.rows());
  cert.defect = std::max(operator_norm(x.adjoint() * x - eye),
                         operator_norm(x * x.adjoint() - eye));
  cert.is_unitary = cert.defect <= tol;
  for (int k = 1; k <= 3; ++k) cert.xk0[k - 1] = invariant(x, k, cxd(0.0));
  return cert;
}

// ---------------------------------------------------------------------------
// Stone recovery

std::vector<std::vector<cxd>> permutation_images(const FunctionSystem& F,
                                                 const std::vector<int>& gamma) {
  std::vector<std::vector<cxd>> images;
  images.reserve(F.functions().size());
  for (const auto& f : F.functions()) {
    std::vector<cxd> img(gamma.size());
    for (size_t w = 0; w < gamma.size(); ++w) img[w] = f[gamma[w]];
    images.push_back(std::move(img));
  }
  return images;
}

std::vector<int> stone_recover_permutation(const FunctionSystem& F, const FunctionSystem& Fp,
                                           const std::vector<std::vector<cxd>>& images,
                                           double tol) {
  if (!separates_points(F)) throw NotSeparatingError("function system does not separate points");
  const int K = F.omega_size();
  if (Fp.omega_size() != K)
    throw DimensionMismatchError("point spaces have different sizes");
  if (images.size() != F.functions().size())
    throw DimensionMismatchError("one image per function required");
  for (const auto& img : images)
    if (static_cast<int>(img.size()) != K)
      throw DimensionMismatchError("image length does not match omega");

  double scale = 1.0;
  for (const auto& f : F.functions())
    for (const auto& v : f) scale = std::max(scale, std::abs(v));

  std::vector<int> gamma(K, -1);
  std::vector<bool> taken(K, false);
  for (int wp = 0; wp < K; ++wp) {
    int found = -1;
    for (int w = 0; w < K; ++w) {
      bool ok = true;
      for (size_t i = 0; i < images.size(); ++i)
        if (std::abs(images[i][wp] - F.functions()[i][w]) > tol * scale) {
          ok = false;
          break;
        }
      if (ok) {
        if (found >= 0)
          throw NoConsistentPermutationError("evaluation matches two points");
        found = w;
      }
    }
    if (found < 0 || taken[found])
      throw NoConsistentPermutationError("no point map reproduces the images");
    gamma[wp] = found;
    taken[found] = true;
  }

  // Re-apply the defining identity on every stored function.
  for (size_t i = 0; i < images.size(); ++i)
    for (int wp = 0; wp < K; ++wp)
      if (std::abs(images[i][wp] - F.functions()[i][gamma[wp]]) > tol * scale)
        throw NoConsistentPermutationError("verification pass failed");
  return gamma;
}

}  // namespace osk
