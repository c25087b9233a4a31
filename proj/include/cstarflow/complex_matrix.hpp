#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "cstarflow/errors.hpp"

namespace cstarflow {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major storage. The single carrier for algebra
/// elements, module elements, and operators. Value semantics throughout.
class CMatrix {
public:
  CMatrix() = default;

  /// Zero matrix of the given shape.
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}

  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
      throw ShapeMismatch("CMatrix: entry count does not match shape");
  }

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  /// Matrix unit E_ij (1 at (i,j), 0 elsewhere).
  static CMatrix unit(std::size_t rows, std::size_t cols, std::size_t i,
                      std::size_t j) {
    CMatrix m(rows, cols);
    m(i, j) = 1.0;
    return m;
  }

  static CMatrix diagonal(const std::vector<Complex>& d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  const std::vector<Complex>& entries() const { return entries_; }

  bool same_shape(const CMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  CMatrix& operator+=(const CMatrix& rhs) {
    if (!same_shape(rhs)) throw ShapeMismatch("CMatrix: shape mismatch in +");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
    return *this;
  }

  CMatrix& operator-=(const CMatrix& rhs) {
    if (!same_shape(rhs)) throw ShapeMismatch("CMatrix: shape mismatch in -");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
    return *this;
  }

  CMatrix& operator*=(Complex scalar) {
    for (auto& e : entries_) e *= scalar;
    return *this;
  }

  friend CMatrix operator+(CMatrix lhs, const CMatrix& rhs) { return lhs += rhs; }
  friend CMatrix operator-(CMatrix lhs, const CMatrix& rhs) { return lhs -= rhs; }
  friend CMatrix operator*(CMatrix lhs, Complex scalar) { return lhs *= scalar; }
  friend CMatrix operator*(Complex scalar, CMatrix rhs) { return rhs *= scalar; }

  friend CMatrix operator-(const CMatrix& m) {
    CMatrix out(m.rows_, m.cols_);
    for (std::size_t i = 0; i < m.entries_.size(); ++i) out.entries_[i] = -m.entries_[i];
    return out;
  }

  /// Exact entrywise equality; used by determinism and oracle tests.
  friend bool operator==(const CMatrix& a, const CMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += std::norm(e);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e));
    return m;
  }

  bool is_zero() const {
    for (const auto& e : entries_)
      if (e != 0.0) return false;
    return true;
  }

  bool all_finite() const {
    for (const auto& e : entries_)
      if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
    return true;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

/// Conjugate transpose.
inline CMatrix adjoint(const CMatrix& a) {
  CMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

/// Standard complex matrix product. Throws DimensionMismatch when the inner
/// dimensions disagree.
inline CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionMismatch("matmul: inner dimensions disagree");
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) { return matmul(a, b); }

/// Row-major vectorization (used by the general linear test kinds and the
/// span-rank computation).
inline std::vector<Complex> vectorize(const CMatrix& m) { return m.entries(); }

inline CMatrix from_vector(std::size_t rows, std::size_t cols,
                           std::vector<Complex> v) {
  return CMatrix(rows, cols, std::move(v));
}

} // namespace cstarflow
