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

#include <complex>
#include <vector>

#include "osk/errors.hpp"

namespace osk {

using cxd = std::complex<double>;

/// Dense complex matrix, row-major storage. The universal carrier for
/// elements of M_m(C) throughout the library. Values are immutable in
/// spirit: every operation returns a fresh matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() : rows_(0), cols_(0) {}
  ComplexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw InvalidInputError("negative dimension");
  }
  ComplexMatrix(int rows, int cols, std::vector<cxd> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != static_cast<size_t>(rows) * cols)
      throw DimensionMismatchError("entry count does not match shape");
  }

  static ComplexMatrix identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static ComplexMatrix zero(int rows, int cols) { return {rows, cols}; }

  /// Elementary matrix unit e_ij (1 at row i, column j).
  static ComplexMatrix unit(int n, int i, int j) {
    ComplexMatrix m(n, n);
    m(i, j) = 1.0;
    return m;
  }
  static ComplexMatrix diag(const std::vector<cxd>& d) {
    ComplexMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  size_t size() const { return data_.size(); }

  cxd& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const cxd& operator()(int i, int j) const {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }
  const std::vector<cxd>& data() const { return data_; }
  std::vector<cxd>& data() { return data_; }

  ComplexMatrix operator+(const ComplexMatrix& o) const;
  ComplexMatrix operator-(const ComplexMatrix& o) const;
  ComplexMatrix operator*(const ComplexMatrix& o) const;
  ComplexMatrix operator*(cxd s) const;
  ComplexMatrix operator-() const { return *this * cxd(-1.0); }
  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cxd s);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;

  cxd trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  /// || M - M* ||_F <= tol * max(1, ||M||_F)
  bool is_hermitian(double tol = 1e-10) const;

  /// Hermitian part (M + M*)/2.
  ComplexMatrix hermitian_part() const;
  /// Anti-Hermitian part as a Hermitian matrix: (M - M*)/(2i).
  ComplexMatrix antihermitian_part() const;

 private:
  int rows_, cols_;
  std::vector<cxd> data_;
};

inline ComplexMatrix operator*(cxd s, const ComplexMatrix& m) { return m * s; }

/// Hilbert-Schmidt inner product tr(a* b).
cxd hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace osk
