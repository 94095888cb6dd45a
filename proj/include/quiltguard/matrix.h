// Copyright 2026 The Quiltguard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUILTGUARD_MATRIX_H_
#define QUILTGUARD_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace quiltguard {

// Dense row-major matrix for the small (k <= ~50) state spaces this library
// handles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix Identity(std::size_t n);
  static Matrix FromRows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }

  Matrix Transposed() const;
  std::vector<std::vector<double>> ToRows() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& lhs, const Matrix& rhs);

// Row vector times matrix.
std::vector<double> VecMat(std::span<const double> v, const Matrix& m);

// P^exponent by repeated squaring. Entries are clamped to [0, 1] after each
// product so roundoff never produces negative probabilities.
Matrix StochasticPower(const Matrix& p, int exponent);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, iterated until
// the Frobenius norm of the off-diagonal part is at most `tolerance`. Returned
// in descending order.
std::vector<double> SymmetricEigenvalues(Matrix a, double tolerance = 1e-12);

// Solves a * x = b by Gaussian elimination with partial pivoting. Returns an
// empty vector if `a` is numerically singular.
std::vector<double> SolveLinearSystem(Matrix a, std::vector<double> b);

}  // namespace quiltguard

#endif  // QUILTGUARD_MATRIX_H_
