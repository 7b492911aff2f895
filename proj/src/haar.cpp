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

#include "osk/haar.hpp"

#include <cmath>

namespace osk {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Angular half-width of the window: |e^{i t} - 1| < delta iff
// |t| < 2 asin(delta / 2), the whole circle once delta >= 2.
double angle_window(double delta) {
  if (delta >= 2.0) return kPi;
  return 2.0 * std::asin(delta / 2.0);
}

// Eigenangles from the Weyl density prod |e^{i t_a} - e^{i t_b}|^2
// restricted to the window, by rejection against the uniform proposal.
// The acceptance ratio (mean over max of the squared Vandermonde) stays
// bounded below as the window shrinks, but decays with the dimension.
std::vector<double> sample_angles(Rng& rng, int n, double a, long long& attempts,
                                  long long& accepted) {
  const double pair_cap = 2.0 * std::sin(std::min(a, kPi / 2.0));
  std::vector<double> theta(n);
  for (;;) {
    ++attempts;
    if ((attempts & 0xfffff) == 0 && attempts > 4'000'000 &&
        static_cast<double>(accepted + 1) / attempts < 1e-5)
      throw RejectionBudgetExceededError("eigenangle acceptance rate below budget");
    for (int i = 0; i < n; ++i) theta[i] = rng.uniform(-a, a);
    double log_ratio = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double diff = 2.0 * std::abs(std::sin(0.5 * (theta[i] - theta[j])));
        if (diff <= 0.0) {
          log_ratio = -1e300;
          break;
        }
        log_ratio += 2.0 * (std::log(diff) - std::log(pair_cap));
      }
    if (std::log(std::max(rng.uniform(), 1e-300)) < log_ratio) {
      ++accepted;
      return theta;
    }
  }
}

}  // namespace

std::vector<ComplexMatrix> sample_neighborhood(const HaarNeighborhood& U, int count,
                                               uint64_t stream) {
  if (count < 1) throw InvalidInputError("count must be >= 1");
  Rng rng = Rng(U.seed).stream(stream);
  const double a = angle_window(U.delta);
  std::vector<ComplexMatrix> out;
  out.reserve(count);
  long long attempts = 0, accepted = 0;
  for (int s = 0; s < count; ++s) {
    std::vector<double> theta =
        (U.n == 1) ? std::vector<double>{rng.uniform(-a, a)}
                   : sample_angles(rng, U.n, a, attempts, accepted);
    ComplexMatrix v = haar_unitary(rng, U.n);
    // u = v diag(e^{i theta}) v*.
    ComplexMatrix u(U.n, U.n);
    for (int k = 0; k < U.n; ++k) {
      const cxd phase = std::polar(1.0, theta[k]);
      for (int i = 0; i < U.n; ++i)
        for (int j = 0; j < U.n; ++j)
          u(i, j) += phase * v(i, k) * std::conj(v(j, k));
    }
    out.push_back(std::move(u));
  }
  return out;
}

ComplexMatrix average_conjugation(const HaarNeighborhood& U, const ComplexMatrix& x,
                                  int samples, uint64_t stream) {
  if (x.rows() != U.n || x.cols() != U.n)
    throw DimensionMismatchError("element dimension does not match the neighborhood");
  ComplexMatrix acc(U.n, U.n);
  for (const auto& u : sample_neighborhood(U, samples, stream)) {
    acc += u * x * u.adjoint();
    acc += u.adjoint() * x * u;
  }
  return acc * cxd(1.0 / (2.0 * samples));
}

CFit fit_c(const HaarNeighborhood& U, int samples, uint64_t stream) {
  if (U.n < 2) throw DegenerateDimensionError("the depolarizing fit needs n >= 2");
  const auto basis = traceless_hermitian_basis(U.n);
  const int nb = static_cast<int>(basis.size());
  std::vector<ComplexMatrix> acc(nb, ComplexMatrix(U.n, U.n));

  // Per-sample statistic: the model projection
  // (1/nb) sum_a <t_a, u t_a u*> = (|tr u|^2 - 1) / (n^2 - 1),
  // accumulated via the explicit conjugations together with the averaged
  // matrices for the off-model residual.
  double mean = 0.0, m2 = 0.0;
  int count = 0;
  for (const auto& u : sample_neighborhood(U, samples, stream)) {
    double stat = 0.0;
    for (int a = 0; a < nb; ++a) {
      ComplexMatrix conj1 = u * basis[a] * u.adjoint();
      ComplexMatrix conj2 = u.adjoint() * basis[a] * u;
      acc[a] += conj1;
      acc[a] += conj2;
      stat += 0.5 * (hs_inner(basis[a], conj1).real() + hs_inner(basis[a], conj2).real());
    }
    stat /= nb;
    ++count;
    const double d = stat - mean;
    mean += d / count;
    m2 += d * (stat - mean);
  }
  const double var = (count > 1) ? m2 / (count - 1) : 0.0;

  CFit fit;
  fit.estimate.c = mean;
  fit.estimate.half_width = 3.0 * std::sqrt(var / count);
  double worst = 0.0;
  for (int a = 0; a < nb; ++a) {
    ComplexMatrix avg = acc[a] * cxd(1.0 / (2.0 * samples));
    worst = std::max(worst, (avg - basis[a] * cxd(mean)).frobenius_norm());
  }
  fit.max_rel_off_model = worst / std::max(std::abs(mean), 1e-12);
  return fit;
}

CEstimate estimate_c(HaarNeighborhood& U, int samples, uint64_t stream) {
  if (U.n < 2)
    throw DegenerateDimensionError("c is not identifiable on U_1(C)");
  CFit fit = fit_c(U, samples, stream);
  const CEstimate est = fit.estimate;
  if (est.c < -est.half_width || est.c > 1.0 + est.half_width)
    throw SolverFailureError("estimated c escapes [0, 1) beyond its confidence width");
  U.c_estimate = est;
  return est;
}

ComplexMatrix depolarize(const ComplexMatrix& x, double c) {
  if (!x.is_square()) throw DimensionMismatchError("depolarize needs a square matrix");
  if (c < -1e-12 || c > 1.0 + 1e-12)
    throw InvalidInputError("c must lie in [0, 1]");
  ComplexMatrix out = x * cxd(c);
  out += ComplexMatrix::identity(x.rows()) * ((1.0 - c) * normalized_trace(x));
  return out;
}

CPMap depolarizing_map(int n, double c) {
  std::vector<ComplexMatrix> images;
  images.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      images.push_back(depolarize(ComplexMatrix::unit(n, i, j), c));
  return CPMap::from_matrix_unit_images(n, n, images);
}

ComplexMatrix block_average(const ComplexMatrix& Y, int m, int n, double c) {
  if (Y.rows() != m * n || Y.cols() != m * n)
    throw ShapeMismatchError("element is not (m n) x (m n)");
  if (c < -1e-12 || c > 1.0 + 1e-12) throw InvalidInputError("c must lie in [0, 1]");

  ComplexMatrix ybar(m, m);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) ybar(a, b) += Y(a * n + i, b * n + i);
  ybar *= cxd(1.0 / n);

  ComplexMatrix out = Y * cxd(c);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        out(a * n + i, b * n + i) += (1.0 - c) * ybar(a, b);
  return out;
}

PositiveFunctional functional_transform(const PositiveFunctional& f, double c) {
  const int n = f.level();
  const size_t basis_dim = f.values().size() / (static_cast<size_t>(n) * n);
  std::vector<cxd> values(f.values().size());
  for (size_t k = 0; k < basis_dim; ++k) {
    cxd diag_sum = 0.0;
    for (int i = 0; i < n; ++i) diag_sum += f.value(static_cast<int>(k), i, i);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cxd v = c * f.value(static_cast<int>(k), i, j);
        if (i == j) v += (1.0 - c) / static_cast<double>(n) * diag_sum;
        values[(k * n + i) * n + j] = v;
      }
  }
  std::optional<OperatorSystem> sys;
  if (!f.on_full_algebra()) sys = f.system();
  return PositiveFunctional(n, f.ambient_dim(), std::move(sys), std::move(values));
}

PositiveFunctional invariant_state_series(const CPMap& tau, double c, double tol) {
  if (tau.domain() != CPMap::Domain::Full || tau.input_dim() != tau.output_dim())
    throw DomainNotFullAlgebraError("the series needs a map on M_m");
  if (c <= 0.0 || c >= 1.0) throw InvalidInputError("c must lie in (0, 1)");
  if (!tau.is_unital(1e-8)) throw NotUnitalError("the series needs a unital map");
  const int m = tau.input_dim();

  // phi(x) = (1-c) sum_k c^k tr0(tau^{k+1}(x)) carried by the density
  // rho = (1-c) sum_k c^k (tau*)^{k+1}(I/m).
  int K = static_cast<int>(std::ceil(std::log(tol * (1.0 - c)) / std::log(c)));
  K = std::max(K, 1);
  ComplexMatrix sigma = ComplexMatrix::identity(m) * cxd(1.0 / m);
  ComplexMatrix rho(m, m);
  double weight = 1.0 - c;
  for (int k = 0; k < K; ++k) {
    sigma = tau.apply_dual(sigma);
    rho += sigma * cxd(weight);
    weight *= c;
  }
  rho = rho.hermitian_part();
  rho *= cxd(1.0 / rho.trace().real());
  return PositiveFunctional::from_density(m, 1, rho);
}

}  // namespace osk
