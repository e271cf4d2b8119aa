// SPDX-License-Identifier: Apache-2.0
#ifndef SPECMULT_LINALG_H_
#define SPECMULT_LINALG_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace specmult {

using Complex = std::complex<double>;

// Dense complex matrix, row-major.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static CMatrix Identity(std::size_t n);
  static CMatrix Diagonal(std::span<const Complex> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }
  std::span<const Complex> row(std::size_t i) const {
    return std::span<const Complex>(data_).subspan(i * cols_, cols_);
  }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(Complex scale);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(Complex scale, CMatrix a);
std::vector<Complex> operator*(const CMatrix& a, std::span<const Complex> x);

// Block-diagonal matrix with the given blocks in order.
CMatrix block_diagonal(std::span<const CMatrix> blocks);

// Singular values, non-increasing, length min(rows, cols).
using SingularValues = std::vector<double>;

// One-sided (Hestenes) Jacobi on the complex matrix. Converges when the
// off-diagonal Frobenius mass of A*A drops below 1e-14 * ||A||_F^2; throws
// ConvergenceError after 60 sweeps. Values below 1e-14 * s_max are clamped
// to exactly zero.
SingularValues svd(const CMatrix& a);

// (sum_k s_k^r)^(1/r) for r > 0. Use op_norm for r = infinity.
double schatten_q(const CMatrix& a, double r);
double schatten_q(const SingularValues& s, double r);

double op_norm(const CMatrix& a);

Complex mat_trace(const CMatrix& a);

}  // namespace specmult

#endif  // SPECMULT_LINALG_H_
