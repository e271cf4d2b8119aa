// SPDX-License-Identifier: Apache-2.0
#include "specmult/linalg.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "specmult/error.h"

namespace specmult {

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols,
                 std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw ValidationError("CMatrix: " + std::to_string(data_.size()) +
                          " entries given for a " + std::to_string(rows) +
                          "x" + std::to_string(cols) + " matrix");
  }
}

CMatrix CMatrix::Identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::Diagonal(std::span<const Complex> diag) {
  CMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  }
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  }
  return out;
}

double CMatrix::frobenius_norm() const {
  // Scaled accumulation, LAPACK-style, so tiny and huge entries survive.
  double scale = 0.0;
  double ssq = 1.0;
  auto update = [&](double v) {
    v = std::abs(v);
    if (v == 0.0) return;
    if (scale < v) {
      ssq = 1.0 + ssq * (scale / v) * (scale / v);
      scale = v;
    } else {
      ssq += (v / scale) * (v / scale);
    }
  };
  for (const Complex& z : data_) {
    update(z.real());
    update(z.imag());
  }
  return scale * std::sqrt(ssq);
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw ValidationError("CMatrix +=: shape mismatch");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw ValidationError("CMatrix -=: shape mismatch");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex scale) {
  for (Complex& z : data_) z *= scale;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ValidationError("CMatrix product: inner dimensions " +
                          std::to_string(a.cols()) + " and " +
                          std::to_string(b.rows()) + " differ");
  }
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(Complex scale, CMatrix a) { return a *= scale; }

std::vector<Complex> operator*(const CMatrix& a, std::span<const Complex> x) {
  if (a.cols() != x.size()) {
    throw ValidationError("matrix-vector product: size mismatch");
  }
  std::vector<Complex> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

CMatrix block_diagonal(std::span<const CMatrix> blocks) {
  std::size_t rows = 0;
  std::size_t cols = 0;
  for (const CMatrix& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  CMatrix out(rows, cols);
  std::size_t r0 = 0;
  std::size_t c0 = 0;
  for (const CMatrix& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i) {
      for (std::size_t j = 0; j < b.cols(); ++j) out(r0 + i, c0 + j) = b(i, j);
    }
    r0 += b.rows();
    c0 += b.cols();
  }
  return out;
}

namespace {

constexpr double kOffDiagonalTolerance = 1e-14;
constexpr int kMaxSweeps = 60;
constexpr double kClampRelative = 1e-14;

void require_finite(const CMatrix& a, const char* who) {
  if (!a.all_finite()) {
    throw ValidationError(std::string(who) + ": matrix has non-finite entries");
  }
}

}  // namespace

SingularValues svd(const CMatrix& a) {
  require_finite(a, "svd");
  // Work on the orientation with fewer columns so the result has exactly
  // min(rows, cols) values.
  const bool flip = a.rows() < a.cols();
  const std::size_t m = flip ? a.cols() : a.rows();
  const std::size_t n = flip ? a.rows() : a.cols();
  if (n == 0) return {};

  // Column-major working copy: cols[j] is column j, scaled to max entry 1
  // so the squared sums below cannot overflow or underflow.
  const double amax = a.max_abs();
  if (amax == 0.0) return SingularValues(n, 0.0);
  std::vector<std::vector<Complex>> cols(n, std::vector<Complex>(m));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (flip) {
        cols[i][j] = std::conj(a(i, j)) / amax;
      } else {
        cols[j][i] = a(i, j) / amax;
      }
    }
  }

  const double fro = a.frobenius_norm() / amax;
  const double target = kOffDiagonalTolerance * fro * fro;

  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    double off_sq = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        std::vector<Complex>& cp = cols[p];
        std::vector<Complex>& cq = cols[q];
        double alpha = 0.0;
        double beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += std::norm(cp[i]);
          beta += std::norm(cq[i]);
          gamma += std::conj(cp[i]) * cq[i];
        }
        const double g = std::abs(gamma);
        off_sq += 2.0 * g * g;
        if (g == 0.0 ||
            g <= std::numeric_limits<double>::epsilon() * std::sqrt(alpha * beta)) {
          continue;
        }
        // Rotate the phase out of column q, then apply a real Jacobi
        // rotation to the pair (cp, cq * conj(phase)).
        const Complex phase = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Complex conj_phase = std::conj(phase);
        for (std::size_t i = 0; i < m; ++i) {
          const Complex xp = cp[i];
          const Complex xq = cq[i] * conj_phase;
          cp[i] = c * xp - s * xq;
          cq[i] = s * xp + c * xq;
        }
      }
    }
    converged = std::sqrt(off_sq) < target;
  }
  if (!converged) {
    throw ConvergenceError("svd: one-sided Jacobi did not converge in " +
                           std::to_string(kMaxSweeps) + " sweeps");
  }

  SingularValues s(n);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (const Complex& z : cols[j]) acc += std::norm(z);
    s[j] = std::sqrt(acc) * amax;
  }
  std::sort(s.begin(), s.end(), std::greater<>());
  const double cutoff = kClampRelative * s.front();
  for (double& v : s) {
    if (v < cutoff) v = 0.0;
  }
  return s;
}

double schatten_q(const SingularValues& s, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw ValidationError("schatten_q: exponent r must be a finite positive "
                          "number (use op_norm for r = infinity)");
  }
  if (s.empty() || s.front() == 0.0) return 0.0;
  // Factor out s_max to keep small r from overflowing.
  const double smax = s.front();
  double acc = 0.0;
  for (double v : s) acc += std::pow(v / smax, r);
  return smax * std::pow(acc, 1.0 / r);
}

double schatten_q(const CMatrix& a, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw ValidationError("schatten_q: exponent r must be a finite positive "
                          "number (use op_norm for r = infinity)");
  }
  return schatten_q(svd(a), r);
}

double op_norm(const CMatrix& a) {
  const SingularValues s = svd(a);
  return s.empty() ? 0.0 : s.front();
}

Complex mat_trace(const CMatrix& a) {
  if (!a.is_square()) {
    throw ValidationError("mat_trace: matrix is " + std::to_string(a.rows()) +
                          "x" + std::to_string(a.cols()) + ", not square");
  }
  Complex t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

}  // namespace specmult
