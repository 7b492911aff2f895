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

#include "osk/extend.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace osk {

void SdpProblem::add_real_constraint(int block, ComplexMatrix A, double rhs) {
  SdpConstraint c;
  c.blocks.reserve(block_dims.size());
  for (int d : block_dims) c.blocks.emplace_back(d, d);
  c.blocks[block] = std::move(A);
  c.rhs = rhs;
  constraints.push_back(std::move(c));
}

void SdpProblem::add_complex_constraint(
    const std::vector<std::pair<int, ComplexMatrix>>& terms, cxd v) {
  SdpConstraint re, im;
  re.blocks.reserve(block_dims.size());
  im.blocks.reserve(block_dims.size());
  for (int d : block_dims) {
    re.blocks.emplace_back(d, d);
    im.blocks.emplace_back(d, d);
  }
  double im_norm = 0.0;
  for (const auto& [block, K] : terms) {
    re.blocks[block] += K.hermitian_part();
    ComplexMatrix h2 = K.antihermitian_part();  // (K - K*)/(2i), Hermitian
    im.blocks[block] += h2;
    im_norm += h2.frobenius_norm();
  }
  re.rhs = v.real();
  constraints.push_back(std::move(re));
  if (im_norm > 1e-14 || std::abs(v.imag()) > 1e-14) {
    im.rhs = v.imag();
    constraints.push_back(std::move(im));
  }
}

namespace {

double blocks_inner(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += hs_inner(a[k], b[k]).real();
  return s;
}

double max_constraint_norm(const SdpProblem& p) {
  double m = 1e-300;
  for (const auto& c : p.constraints) {
    double s = 0.0;
    for (const auto& blk : c.blocks) {
      const double f = blk.frobenius_norm();
      s += f * f;
    }
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

std::vector<ComplexMatrix> zero_blocks(const std::vector<int>& dims) {
  std::vector<ComplexMatrix> X;
  X.reserve(dims.size());
  for (int d : dims) X.emplace_back(d, d);
  return X;
}

// Real coordinates over a per-block orthonormal Hermitian basis; the flat
// index runs block by block.
struct Coordinates {
  std::vector<int> dims;
  std::vector<std::vector<ComplexMatrix>> basis;  // per block
  std::vector<int> offset;
  int total = 0;

  explicit Coordinates(const std::vector<int>& block_dims) : dims(block_dims) {
    for (int d : dims) {
      offset.push_back(total);
      basis.push_back(hermitian_basis(d));
      total += d * d;
    }
  }

  std::vector<double> pack(const std::vector<ComplexMatrix>& X) const {
    std::vector<double> v(total);
    for (size_t b = 0; b < dims.size(); ++b)
      for (size_t a = 0; a < basis[b].size(); ++a)
        v[offset[b] + a] = hs_inner(basis[b][a], X[b]).real();
    return v;
  }

  std::vector<ComplexMatrix> unpack(const std::vector<double>& v) const {
    std::vector<ComplexMatrix> X = zero_blocks(dims);
    for (size_t b = 0; b < dims.size(); ++b)
      for (size_t a = 0; a < basis[b].size(); ++a)
        X[b] += basis[b][a] * cxd(v[offset[b] + a]);
    return X;
  }
};

struct AffineSystem {
  const SdpProblem& p;
  Coordinates coords;
  std::vector<double> b;
  ComplexMatrix rows;  // k x N, real entries: rows(i, alpha) = <A_i, E_alpha>
  EigResult gram_eig;  // of G = rows rows^T
  double gram_cutoff = 0.0;
  std::vector<std::vector<double>> null_combos;  // ker(G): sum y_i A_i = 0
  ComplexMatrix null_basis;                      // N x p, kernel of `rows`
  std::vector<ComplexMatrix> x0;                 // least-norm affine point

  explicit AffineSystem(const SdpProblem& prob)
      : p(prob), coords(prob.block_dims) {
    const int k = static_cast<int>(p.constraints.size());
    b.resize(k);
    rows = ComplexMatrix(k, coords.total);
    for (int i = 0; i < k; ++i) {
      b[i] = p.constraints[i].rhs;
      std::vector<double> r = coords.pack(p.constraints[i].blocks);
      for (int a = 0; a < coords.total; ++a) rows(i, a) = r[a];
    }
    ComplexMatrix G = rows * rows.adjoint();
    gram_eig = hermitian_eig(G, 1e-6);
    gram_cutoff = std::max(1e-12 * std::max(1e-30, gram_eig.eigenvalues.back()),
                           1e-13);
    for (int c = 0; c < k; ++c) {
      if (gram_eig.eigenvalues[c] > gram_cutoff) continue;
      std::vector<double> y(k);
      for (int i = 0; i < k; ++i) y[i] = gram_eig.eigenvectors(i, c).real();
      null_combos.push_back(std::move(y));
    }
    null_basis = null_space(rows, 1e-9);

    // x0 = rows^T G^+ b.
    std::vector<double> yb = gram_pinv_apply(b);
    std::vector<double> x0c(coords.total, 0.0);
    for (int i = 0; i < k; ++i)
      for (int a = 0; a < coords.total; ++a) x0c[a] += rows(i, a).real() * yb[i];
    x0 = coords.unpack(x0c);
  }

  int null_dim() const { return null_basis.cols(); }

  std::vector<double> gram_pinv_apply(const std::vector<double>& r) const {
    const int k = static_cast<int>(r.size());
    std::vector<double> y(k, 0.0);
    for (int c = 0; c < k; ++c) {
      if (gram_eig.eigenvalues[c] <= gram_cutoff) continue;
      double proj = 0.0;
      for (int i = 0; i < k; ++i) proj += gram_eig.eigenvectors(i, c).real() * r[i];
      proj /= gram_eig.eigenvalues[c];
      for (int i = 0; i < k; ++i) y[i] += proj * gram_eig.eigenvectors(i, c).real();
    }
    return y;
  }

  // Coefficients of the least-squares representation Z ~ sum y_i A_i.
  std::vector<double> span_coefficients(const std::vector<ComplexMatrix>& Z) const {
    const int k = static_cast<int>(p.constraints.size());
    std::vector<double> r(k);
    for (int i = 0; i < k; ++i) r[i] = blocks_inner(p.constraints[i].blocks, Z);
    return gram_pinv_apply(r);
  }

  std::optional<std::vector<double>> inconsistency_certificate() const {
    double bnorm = 0.0;
    for (double v : b) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    for (const auto& y : null_combos) {
      double yb = 0.0;
      for (size_t i = 0; i < y.size(); ++i) yb += y[i] * b[i];
      if (std::abs(yb) > 1e-9 * std::max(1.0, bnorm)) {
        std::vector<double> cert = y;
        for (auto& v : cert) v /= yb;
        return cert;
      }
    }
    return std::nullopt;
  }

  // X(theta) = x0 + sum theta_r B_r.
  std::vector<ComplexMatrix> point(const std::vector<double>& theta) const {
    std::vector<double> c(coords.total, 0.0);
    for (size_t a = 0; a < c.size(); ++a) {
      c[a] = 0.0;
      for (int r = 0; r < null_basis.cols(); ++r)
        c[a] += null_basis(static_cast<int>(a), r).real() * theta[r];
    }
    std::vector<ComplexMatrix> X = coords.unpack(c);
    for (size_t bidx = 0; bidx < X.size(); ++bidx) X[bidx] += x0[bidx];
    return X;
  }

  // Null-basis matrices for one coordinate direction r.
  std::vector<ComplexMatrix> direction(int r) const {
    std::vector<double> c(coords.total);
    for (int a = 0; a < coords.total; ++a) c[a] = null_basis(a, r).real();
    return coords.unpack(c);
  }
};

double certificate_slack_impl(const SdpProblem& p, const std::vector<double>& y) {
  double worst = -1e300;
  for (size_t blk = 0; blk < p.block_dims.size(); ++blk) {
    if (p.block_dims[blk] == 0) continue;
    ComplexMatrix H(p.block_dims[blk], p.block_dims[blk]);
    for (size_t i = 0; i < p.constraints.size(); ++i)
      H += p.constraints[i].blocks[blk] * cxd(y[i]);
    worst = std::max(worst, max_eigenvalue(H.hermitian_part(), 1e-6));
  }
  return worst;
}

// When the identity lies in the constraint span, a candidate certificate
// with a small positive slack can be repaired exactly: subtracting
// slack * (combination representing I) pushes sum y_i A_i below zero, and
// the normalization y . b = 1 survives a small correction.
void sharpen_certificate(const AffineSystem& sys, const SdpProblem& p,
                         std::vector<double>& y, double& slack) {
  if (slack <= 0.0) return;
  std::vector<ComplexMatrix> eye;
  eye.reserve(p.block_dims.size());
  for (int d : p.block_dims) eye.push_back(ComplexMatrix::identity(d));
  std::vector<double> e = sys.span_coefficients(eye);
  std::vector<ComplexMatrix> recon = zero_blocks(p.block_dims);
  for (size_t i = 0; i < p.constraints.size(); ++i)
    for (size_t blk = 0; blk < recon.size(); ++blk)
      recon[blk] += p.constraints[i].blocks[blk] * cxd(e[i]);
  double err = 0.0;
  for (size_t blk = 0; blk < recon.size(); ++blk) {
    const double d = (recon[blk] - eye[blk]).frobenius_norm();
    err += d * d;
  }
  if (std::sqrt(err) > 1e-8) return;
  const double mu = slack * 1.0001;
  double eb = 0.0;
  for (size_t i = 0; i < e.size(); ++i) eb += e[i] * sys.b[i];
  if (1.0 - mu * eb <= 1e-6) return;
  for (size_t i = 0; i < y.size(); ++i) y[i] = (y[i] - mu * e[i]) / (1.0 - mu * eb);
  slack = certificate_slack_impl(p, y);
}

// ---------------------------------------------------------------------------
// Log-barrier Newton solver on the affine-parameterized variable.
//
// Phase 1 minimizes s subject to X(theta) + s I >= 0; its sign decides
// feasibility and its dual multiplier is the Farkas certificate. Phase 2
// follows the central path of min tr(C X(theta)) over X >= -eps I, where
// eps > 0 only when the feasible set has no interior.

struct BarrierState {
  std::vector<ComplexMatrix> X;       // current blocks
  std::vector<ComplexMatrix> W;       // (X + shift I)^{-1}
  std::vector<double> logdet_terms;
  bool valid = false;
};

class BarrierSolver {
 public:
  BarrierSolver(const AffineSystem& sys) : sys_(sys), pdim_(sys.null_dim()) {
    directions_.reserve(pdim_);
    for (int r = 0; r < pdim_; ++r) directions_.push_back(sys.direction(r));
    nu_ = 0.0;
    for (int d : sys_.coords.dims) nu_ += d;
  }

  double nu() const { return nu_; }

  // Inverse and log det of X + shift I; false when not positive definite.
  bool factor(const std::vector<ComplexMatrix>& X, double shift, BarrierState& st) const {
    st.X = X;
    st.W.clear();
    st.logdet_terms.clear();
    for (const auto& blk : X) {
      const int d = blk.rows();
      if (d == 0) {
        st.W.emplace_back(0, 0);
        st.logdet_terms.push_back(0.0);
        continue;
      }
      ComplexMatrix shifted = blk;
      for (int i = 0; i < d; ++i) shifted(i, i) += shift;
      EigResult e = hermitian_eig(shifted.hermitian_part(), 1e-6);
      if (e.eigenvalues.front() <= 0.0) return false;
      ComplexMatrix w(d, d);
      double logdet = 0.0;
      for (int k = 0; k < d; ++k) {
        logdet += std::log(e.eigenvalues[k]);
        const double inv = 1.0 / e.eigenvalues[k];
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            w(i, j) += cxd(inv) * e.eigenvectors(i, k) * std::conj(e.eigenvectors(j, k));
      }
      st.W.push_back(std::move(w));
      st.logdet_terms.push_back(logdet);
    }
    st.valid = true;
    return true;
  }

  // Newton minimization of t <c, theta> - log det(X(theta) + shift I) plus
  // an optional slack variable with objective weight t (phase 1).
  //
  // The slack enters as X + s I, i.e. as an extra coordinate whose
  // direction is the identity on every block.
  struct NewtonResult {
    std::vector<double> theta;
    double s = 0.0;
    BarrierState state;
    bool converged = false;
  };

  NewtonResult minimize(double t, const std::vector<double>& c_lin, bool with_slack,
                        std::vector<double> theta, double s, double shift,
                        double* early_exit_s = nullptr) const {
    const int n = pdim_ + (with_slack ? 1 : 0);
    NewtonResult res;
    BarrierState st;
    for (int iter = 0; iter < 60; ++iter) {
      std::vector<ComplexMatrix> X = sys_.point(theta);
      const double total_shift = shift + (with_slack ? s : 0.0);
      if (!factor(X, total_shift, st)) {
        res.converged = false;
        return res;
      }
      // Gradient and Hessian over (theta [, s]).
      std::vector<double> g(n, 0.0);
      ComplexMatrix H(n, n);
      std::vector<std::vector<ComplexMatrix>> WB(pdim_);
      for (int r = 0; r < pdim_; ++r) {
        WB[r].reserve(st.W.size());
        double trace_wb = 0.0;
        for (size_t blk = 0; blk < st.W.size(); ++blk) {
          ComplexMatrix wb = st.W[blk] * directions_[r][blk];
          trace_wb += wb.trace().real();
          WB[r].push_back(std::move(wb));
        }
        g[r] = t * c_lin[r] - trace_wb;
      }
      double trace_w = 0.0, trace_w2 = 0.0;
      for (const auto& w : st.W) {
        trace_w += w.trace().real();
        trace_w2 += hs_inner(w, w).real();
      }
      if (with_slack) g[pdim_] = t - trace_w;
      for (int r = 0; r < pdim_; ++r)
        for (int q = r; q < pdim_; ++q) {
          double h = 0.0;
          for (size_t blk = 0; blk < st.W.size(); ++blk)
            h += (WB[r][blk] * WB[q][blk]).trace().real();
          H(r, q) = h;
          H(q, r) = h;
        }
      if (with_slack) {
        for (int r = 0; r < pdim_; ++r) {
          double h = 0.0;
          for (size_t blk = 0; blk < st.W.size(); ++blk)
            h += (st.W[blk] * WB[r][blk]).trace().real();
          H(r, pdim_) = h;
          H(pdim_, r) = h;
        }
        H(pdim_, pdim_) = trace_w2;
      }

      std::vector<cxd> rhs(n);
      for (int i = 0; i < n; ++i) rhs[i] = -g[i];
      std::vector<cxd> step;
      for (double damping = 0.0;; damping = std::max(1e-12, damping * 10.0)) {
        ComplexMatrix Hd = H;
        if (damping > 0.0)
          for (int i = 0; i < n; ++i) Hd(i, i) += damping;
        try {
          step = solve_linear(Hd, rhs);
          break;
        } catch (const SolverFailureError&) {
          if (damping > 1e3) {
            res.converged = false;
            return res;
          }
        }
      }

      // decrement = g^T H^{-1} g >= 0 up to damping.
      double decrement = 0.0;
      for (int i = 0; i < n; ++i) decrement -= g[i] * step[i].real();
      if (decrement < 1e-11 * std::max(1.0, std::abs(t))) {
        res.theta = theta;
        res.s = s;
        res.state = st;
        res.converged = true;
        return res;
      }

      // Backtracking line search on the barrier objective.
      auto objective = [&](const std::vector<double>& th, double sv,
                           BarrierState& out) -> std::optional<double> {
        std::vector<ComplexMatrix> Xn = sys_.point(th);
        const double sh = shift + (with_slack ? sv : 0.0);
        if (!factor(Xn, sh, out)) return std::nullopt;
        double obj = 0.0;
        for (int r = 0; r < pdim_; ++r) obj += t * c_lin[r] * th[r];
        if (with_slack) obj += t * sv;
        for (double ld : out.logdet_terms) obj -= ld;
        return obj;
      };
      BarrierState cur;
      double f0 = 0.0;
      for (int r = 0; r < pdim_; ++r) f0 += t * c_lin[r] * theta[r];
      if (with_slack) f0 += t * s;
      for (double ld : st.logdet_terms) f0 -= ld;

      double alpha = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 50; ++ls) {
        std::vector<double> th = theta;
        for (int r = 0; r < pdim_; ++r) th[r] += alpha * step[r].real();
        double sv = s + (with_slack ? alpha * step[pdim_].real() : 0.0);
        auto fn = objective(th, sv, cur);
        if (fn && *fn <= f0 - 0.25 * alpha * decrement) {
          theta = std::move(th);
          s = sv;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) {
        res.theta = theta;
        res.s = s;
        res.state = st;
        res.converged = true;
        return res;
      }
      if (early_exit_s && with_slack && s < *early_exit_s) {
        res.theta = theta;
        res.s = s;
        res.state = st;
        res.converged = true;
        return res;
      }
    }
    res.theta = theta;
    res.s = s;
    res.converged = true;
    return res;
  }

  const AffineSystem& sys_;
  int pdim_;
  std::vector<std::vector<ComplexMatrix>> directions_;
  double nu_ = 1.0;
};

struct Phase1Result {
  bool feasible = false;
  double s_star = 0.0;
  std::vector<double> theta;
  std::vector<ComplexMatrix> dual;  // approximate PSD dual matrix blocks
};

Phase1Result phase1(const BarrierSolver& solver, double target_gap) {
  const AffineSystem& sys = solver.sys_;
  Phase1Result out;
  std::vector<double> theta(solver.pdim_, 0.0);
  double lam_min = 0.0;
  for (const auto& blk : sys.x0)
    if (blk.rows() > 0) lam_min = std::min(lam_min, min_eigenvalue(blk.hermitian_part(), 1e-6));
  double s = -lam_min + 1.0;
  std::vector<double> c_lin(solver.pdim_, 0.0);

  double strict_exit = -1e-4;
  double t = 1.0;
  BarrierState last;
  for (int round = 0; round < 60; ++round) {
    BarrierSolver::NewtonResult nr =
        solver.minimize(t, c_lin, /*with_slack=*/true, theta, s, 0.0, &strict_exit);
    if (!nr.converged) break;
    theta = nr.theta;
    s = nr.s;
    last = nr.state;
    if (s < strict_exit) {
      out.feasible = true;
      out.s_star = s;
      out.theta = theta;
      return out;
    }
    const double gap = solver.nu() / t;
    if (gap <= target_gap) {
      out.s_star = s;
      out.theta = theta;
      out.feasible = (s - gap <= target_gap * 10.0);
      if (last.valid) {
        out.dual.clear();
        for (const auto& w : last.W) out.dual.push_back(w * cxd(1.0 / t));
      }
      return out;
    }
    t *= 12.0;
  }
  out.s_star = s;
  out.theta = theta;
  out.feasible = (s <= 1e-7);
  return out;
}

}  // namespace

SdpResult sdp_solve(const SdpProblem& p) {
  SdpResult res;
  if (p.constraints.empty()) {
    // The zero matrix is feasible; an objective with a negative direction
    // would be unbounded below.
    if (p.objective)
      for (const auto& cb : *p.objective)
        if (cb.rows() > 0 && min_eigenvalue(cb.hermitian_part(), 1e-6) < -1e-12) {
          res.status = SdpStatus::NumericalFailure;
          return res;
        }
    res.status = SdpStatus::Optimal;
    res.rho_blocks = zero_blocks(p.block_dims);
    return res;
  }
  AffineSystem sys(p);

  if (auto cert = sys.inconsistency_certificate()) {
    res.status = SdpStatus::Infeasible;
    res.certificate = *cert;
    res.certificate_slack = certificate_slack_impl(p, *cert);
    return res;
  }

  const double max_a = max_constraint_norm(p);

  // Fully pinned variable: classify the unique affine point directly.
  if (sys.null_dim() == 0) {
    double lam = 0.0;
    for (const auto& blk : sys.x0)
      if (blk.rows() > 0) lam = std::min(lam, min_eigenvalue(blk.hermitian_part(), 1e-6));
    if (lam >= -1e-8) {
      res.status = SdpStatus::Optimal;
      res.rho_blocks = sys.x0;
      if (p.objective) res.value = blocks_inner(*p.objective, res.rho_blocks);
      return res;
    }
    std::vector<ComplexMatrix> neg = zero_blocks(p.block_dims);
    for (size_t blk = 0; blk < sys.x0.size(); ++blk)
      neg[blk] = psd_projection(sys.x0[blk].hermitian_part()) - sys.x0[blk].hermitian_part();
    std::vector<double> y = sys.span_coefficients(neg);
    double yb = 0.0;
    for (size_t i = 0; i < y.size(); ++i) yb += y[i] * sys.b[i];
    if (yb > 1e-12) {
      for (auto& v : y) v /= yb;
      double slack = certificate_slack_impl(p, y);
      sharpen_certificate(sys, p, y, slack);
      double ynorm = 0.0;
      for (double v : y) ynorm += std::abs(v);
      if (slack <= 1e-6 * std::max(1.0, ynorm * max_a)) {
        res.status = SdpStatus::Infeasible;
        res.certificate = std::move(y);
        res.certificate_slack = slack;
        return res;
      }
    }
    res.status = SdpStatus::NumericalFailure;
    return res;
  }

  BarrierSolver solver(sys);
  const double gap_target = std::max(p.tolerance, 1e-11);
  Phase1Result ph1 = phase1(solver, gap_target);

  if (!ph1.feasible) {
    // Farkas certificate from the phase-1 dual.
    if (!ph1.dual.empty()) {
      std::vector<double> y = sys.span_coefficients(ph1.dual);
      double yb = 0.0;
      for (size_t i = 0; i < y.size(); ++i) yb += y[i] * sys.b[i];
      if (yb < -1e-14) {
        for (auto& v : y) v /= yb;  // now y.b = 1 and sum y_i A_i ~ -Z/|yb|
        double slack = certificate_slack_impl(p, y);
        sharpen_certificate(sys, p, y, slack);
        double ynorm = 0.0;
        for (double v : y) ynorm += std::abs(v);
        if (slack <= 1e-6 * std::max(1.0, ynorm * max_a)) {
          res.status = SdpStatus::Infeasible;
          res.certificate = std::move(y);
          res.certificate_slack = slack;
          return res;
        }
      }
    }
    res.status = SdpStatus::NumericalFailure;
    return res;
  }

  if (!p.objective) {
    res.status = SdpStatus::Optimal;
    res.rho_blocks = sys.point(ph1.theta);
    for (auto& blk : res.rho_blocks) blk = blk.hermitian_part();
    res.value = 0.0;
    return res;
  }

  // Phase 2: central path for the linear objective. When phase 1 ended on
  // the boundary the cone is relaxed by eps, which perturbs the optimal
  // value by O(eps).
  const double eps = (ph1.s_star < -1e-4) ? 0.0 : 2.0 * std::max(0.0, ph1.s_star) + 3e-9;
  std::vector<double> c_lin(solver.pdim_);
  for (int r = 0; r < solver.pdim_; ++r)
    c_lin[r] = blocks_inner(*p.objective, solver.directions_[r]);

  std::vector<double> theta = ph1.theta;
  double t = 1.0;
  const double phase2_gap = std::min(std::max(p.value_tolerance * 0.05, 1e-10), 1e-8);
  const bool debug = std::getenv("OSK_SDP_DEBUG") != nullptr;
  if (debug)
    std::fprintf(stderr, "phase2: s_star=%.3e eps=%.3e nu=%.1f\n", ph1.s_star, eps,
                 solver.nu());
  for (; solver.nu() / t > phase2_gap;) {
    BarrierSolver::NewtonResult nr =
        solver.minimize(t, c_lin, /*with_slack=*/false, theta, 0.0, eps);
    if (!nr.converged) {
      res.status = SdpStatus::NumericalFailure;
      return res;
    }
    theta = nr.theta;
    if (debug) {
      double val = 0.0;
      for (int r = 0; r < solver.pdim_; ++r) val += c_lin[r] * theta[r];
      std::fprintf(stderr, "  t=%.2e value_lin=%.10f\n", t, val);
    }
    t *= 12.0;
  }

  res.status = SdpStatus::Optimal;
  res.rho_blocks = sys.point(theta);
  for (auto& blk : res.rho_blocks) blk = blk.hermitian_part();
  res.value = blocks_inner(*p.objective, res.rho_blocks);
  return res;
}

// ---------------------------------------------------------------------------
// Minkowski functional

namespace {

void add_matrix_equality(SdpProblem& p, const std::vector<std::pair<int, double>>& block_signs,
                         const ComplexMatrix& target) {
  const int m = target.rows();
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      std::vector<std::pair<int, ComplexMatrix>> terms;
      for (const auto& [blk, sign] : block_signs)
        terms.emplace_back(blk, ComplexMatrix::unit(m, j, i) * cxd(sign));
      p.add_complex_constraint(terms, target(i, j));
    }
}

}  // namespace

MinkowskiResult minkowski_value(const OperatorSystem& S, const PositiveFunctional& f,
                                const ComplexMatrix& y) {
  const int m = S.ambient_dim();
  if (y.rows() != m || y.cols() != m) throw DimensionMismatchError("element is not m x m");
  if (!y.is_hermitian(1e-8)) throw NotHermitianError("Minkowski functional needs Hermitian input");
  if (f.level() != 1) throw LevelMismatchError("functional must live on S itself");

  const ComplexMatrix yh = y.hermitian_part();
  const double ynorm = operator_norm(yh);

  // Objective density of f inside S; the affine offset is added back.
  ComplexMatrix f_density(m, m);
  for (int k = 0; k < S.dim(); ++k) f_density += S.basis()[k] * cxd(f.value(k, 0, 0).real());
  const double offset = hs_inner(f_density, yh).real();

  // The infimum runs over all majorants y' >= y in S^h. The solve is
  // capped (variable blocks P = y' - y >= 0, Q = cap I - y' >= 0) and the
  // cap is enlarged until the optimal witness sits strictly inside it;
  // then the capped optimum is the unrestricted one. The first cap keeps
  // a solid margin above ||y|| so the feasible set has interior even when
  // ||y|| I - y is singular.
  double cap = ynorm + std::max(1.0, ynorm);
  for (int round = 0; round < 7; ++round, cap *= 8.0) {
    SdpProblem prob(std::vector<int>{m, m});
    add_matrix_equality(prob, {{0, 1.0}, {1, 1.0}},
                        ComplexMatrix::identity(m) * cxd(cap) - yh);
    // y' = P + y stays in S^h.
    for (const auto& d : S.hermitian_complement_basis())
      prob.add_real_constraint(0, d, -hs_inner(d, yh).real());
    prob.objective = std::vector<ComplexMatrix>{f_density, ComplexMatrix(m, m)};

    SdpResult r = sdp_solve(prob);
    if (r.status == SdpStatus::Infeasible)
      throw SolverFailureError(
          "Minkowski problem reported infeasible; ||y|| I is always feasible");
    if (r.status != SdpStatus::Optimal) throw SolverFailureError("Minkowski optimization failed");

    ComplexMatrix witness = (r.rho_blocks[0] + yh).hermitian_part();
    if (max_eigenvalue(witness) <= cap * (1.0 - 1e-6) || round == 6) {
      MinkowskiResult out;
      out.witness = std::move(witness);
      out.p_value = r.value + offset;
      return out;
    }
  }
  throw SolverFailureError("Minkowski cap escalation did not settle");
}

// ---------------------------------------------------------------------------
// Extension interval and extensions

namespace {

SdpProblem state_extension_problem(const OperatorSystem& S, const PositiveFunctional& f) {
  const int m = S.ambient_dim();
  if (f.level() != 1) throw LevelMismatchError("functional must live on S itself");
  SdpProblem prob(m);
  for (int k = 0; k < S.dim(); ++k)
    prob.add_real_constraint(0, S.basis()[k], f.value(k, 0, 0).real());
  return prob;
}

}  // namespace

ExtensionInterval extension_interval(const OperatorSystem& S, const PositiveFunctional& f,
                                     const ComplexMatrix& x) {
  const int m = S.ambient_dim();
  if (x.rows() != m || x.cols() != m) throw DimensionMismatchError("element is not m x m");
  const ComplexMatrix xh = x.hermitian_part();
  if ((x - xh).frobenius_norm() > 1e-8 * std::max(1.0, x.frobenius_norm()) ||
      min_eigenvalue(xh, 1e-8) < -1e-8)
    throw NotPositiveError("element must be PSD");
  if (xh.frobenius_norm() <= 1e-12) throw InvalidInputError("element must be nonzero");

  ExtensionInterval out;

  SdpProblem lo = state_extension_problem(S, f);
  lo.objective = std::vector<ComplexMatrix>{xh};
  SdpResult rlo = sdp_solve(lo);
  if (rlo.status == SdpStatus::Infeasible)
    throw InfeasibleError("functional is not the restriction of a state");
  if (rlo.status != SdpStatus::Optimal) throw SolverFailureError("interval optimization failed");
  out.beta1 = rlo.value;
  out.rho_min = rlo.rho();

  SdpProblem hi = state_extension_problem(S, f);
  hi.objective = std::vector<ComplexMatrix>{-xh};
  SdpResult rhi = sdp_solve(hi);
  if (rhi.status != SdpStatus::Optimal) throw SolverFailureError("interval optimization failed");
  out.beta2 = -rhi.value;
  out.rho_max = rhi.rho();

  if (out.beta1 < -1e-7 || out.beta1 > out.beta2 + 1e-7)
    throw SolverFailureError("interval ordering violated");
  out.beta1 = std::max(0.0, out.beta1);

  // Duality: the upper endpoint equals the Minkowski value.
  MinkowskiResult mk = minkowski_value(S, f, xh);
  if (std::abs(mk.p_value - out.beta2) > 1e-6)
    throw SolverFailureError("beta2 does not match the Minkowski functional");
  return out;
}

SdpResult state_extension_feasibility(const OperatorSystem& S, const PositiveFunctional& f) {
  return sdp_solve(state_extension_problem(S, f));
}

ComplexMatrix extend_functional(const OperatorSystem& S, const PositiveFunctional& f,
                                const ComplexMatrix& x, double alpha) {
  SdpProblem prob = state_extension_problem(S, f);
  prob.add_real_constraint(0, x.hermitian_part(), alpha);
  SdpResult r = sdp_solve(prob);
  if (r.status == SdpStatus::Optimal) return r.rho();
  if (r.status == SdpStatus::Infeasible) {
    // Distinguish a bad alpha from an inconsistent functional.
    SdpResult base = sdp_solve(state_extension_problem(S, f));
    if (base.status == SdpStatus::Optimal)
      throw AlphaOutOfRangeError("alpha is outside the extension interval");
    throw InfeasibleError("functional is not the restriction of a state");
  }
  throw SolverFailureError("extension solve failed");
}

// ---------------------------------------------------------------------------
// Faithful and invariance-constrained CP extensions

namespace {

// Agreement of the Choi variable (block `blk`) with tau on the system
// basis: tr(C (b^T (x) e_ji)) = tau(b)_ij.
void add_agreement_constraints(SdpProblem& prob, int blk, const CPMap& tau) {
  const OperatorSystem& S = tau.system();
  const int n = tau.output_dim();
  for (int k = 0; k < S.dim(); ++k) {
    const ComplexMatrix bt = S.basis()[k].transpose();
    const ComplexMatrix img = tau.basis_images()[k];
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        prob.add_complex_constraint({{blk, kron(bt, ComplexMatrix::unit(n, j, i))}},
                                    img(i, j));
  }
}

void add_unitality_constraints(SdpProblem& prob, int blk, int m, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      prob.add_complex_constraint(
          {{blk, kron(ComplexMatrix::identity(m), ComplexMatrix::unit(n, j, i))}},
          i == j ? 1.0 : 0.0);
}

}  // namespace

FaithfulExtension faithful_extension(const CPMap& tau, double tol) {
  if (tau.domain() == CPMap::Domain::Full) {
    if (!is_faithful(tau)) throw InvalidInputError("map is not faithful");
    return {tau, min_eigenvalue(
                     partial_trace(tau.choi(), tau.input_dim(), tau.output_dim(), Factor::Second)
                         .hermitian_part(),
                     1e-8)};
  }
  if (!tau.is_unital(1e-8)) throw NotUnitalError("map must be unital");
  if (!is_faithful_on_system(tau)) throw InvalidInputError("map is not faithful on S_+");

  const int m = tau.input_dim();
  const int n = tau.output_dim();

  // Blocks: Choi C, D = ptr_second(C) - t I >= 0, T = [t] >= 0.
  // Maximizing t pushes the reduced Choi to be positive definite.
  SdpProblem prob(std::vector<int>{m * n, m, 1});
  add_unitality_constraints(prob, 0, m, n);
  add_agreement_constraints(prob, 0, tau);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      std::vector<std::pair<int, ComplexMatrix>> terms;
      terms.emplace_back(1, ComplexMatrix::unit(m, b, a));
      terms.emplace_back(0, kron(ComplexMatrix::unit(m, b, a),
                                 ComplexMatrix::identity(n)) * cxd(-1.0));
      if (a == b) terms.emplace_back(2, ComplexMatrix::identity(1));
      prob.add_complex_constraint(terms, cxd(0.0));
    }
  std::vector<ComplexMatrix> objective = zero_blocks(prob.block_dims);
  objective[2](0, 0) = -1.0;
  prob.objective = objective;

  SdpResult r = sdp_solve(prob);
  if (r.status != SdpStatus::Optimal)
    throw NoFaithfulExtensionFoundError("no UCP extension found (inconclusive)");
  const ComplexMatrix& choi = r.rho_blocks[0];
  const double t_star =
      min_eigenvalue(partial_trace(choi, m, n, Factor::Second).hermitian_part(), 1e-8);
  if (t_star <= tol)
    throw NoFaithfulExtensionFoundError("reduced Choi not positive definite (inconclusive)");
  return {CPMap::from_choi(m, n, choi), t_star};
}

InvarianceExtensionResult invariance_constrained_extension(const CPMap& tau,
                                                           const ComplexMatrix& phi0_density) {
  const int m = tau.input_dim();
  const int n = tau.output_dim();
  if (phi0_density.rows() != m || phi0_density.cols() != m)
    throw DimensionMismatchError("state density is not m x m");

  InvarianceExtensionResult out;

  if (tau.domain() == CPMap::Domain::Full) {
    // Already defined everywhere; only the invariance property is checked.
    double worst = 0.0;
    for (const auto& h : hermitian_basis(m)) {
      const double lhs = normalized_trace(tau.apply(h)).real();
      const double rhs = hs_inner(phi0_density, h).real();
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    if (worst <= 1e-8) {
      out.status = SdpStatus::Optimal;
      out.eta = tau;
    } else {
      out.status = SdpStatus::Infeasible;
    }
    return out;
  }

  SdpProblem prob(m * n);
  add_unitality_constraints(prob, 0, m, n);
  add_agreement_constraints(prob, 0, tau);
  // Invariance: tr0(eta(h)) = phi0(h) on a Hermitian basis of M_m.
  for (const auto& h : hermitian_basis(m)) {
    ComplexMatrix A = kron(h.transpose(), ComplexMatrix::identity(n)) * cxd(1.0 / n);
    prob.add_real_constraint(0, A.hermitian_part(), hs_inner(phi0_density, h).real());
  }

  SdpResult r = sdp_solve(prob);
  out.status = r.status;
  if (r.status == SdpStatus::Optimal) {
    out.eta = CPMap::from_choi(m, n, r.rho());
  } else if (r.status == SdpStatus::Infeasible) {
    out.certificate = r.certificate;
    out.certificate_slack = r.certificate_slack;
  }
  return out;
}

bool is_faithful_on_system(const CPMap& tau, double tol) {
  const OperatorSystem& S = tau.system();
  const int m = S.ambient_dim();

  // T carries tr(tau(z)) = tr(z T) for z in S.
  ComplexMatrix T(m, m);
  for (int k = 0; k < S.dim(); ++k)
    T += S.basis()[k] * tau.basis_images()[k].trace();

  SdpProblem prob(m);
  prob.add_real_constraint(0, ComplexMatrix::identity(m), 1.0);
  prob.add_real_constraint(0, T.hermitian_part(), 0.0);
  for (const auto& d : S.hermitian_complement_basis()) prob.add_real_constraint(0, d, 0.0);
  prob.tolerance = std::min(1e-9, tol);

  SdpResult r = sdp_solve(prob);
  if (r.status == SdpStatus::NumericalFailure)
    throw SolverFailureError("faithfulness feasibility did not resolve");
  // A normalized positive z killed by tau exists iff the slice is feasible.
  return r.status == SdpStatus::Infeasible;
}

}  // namespace osk
