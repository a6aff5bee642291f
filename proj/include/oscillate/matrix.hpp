// Dense matrices over Q(i).
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "exact.hpp"
#include "poly.hpp"

namespace oscillate {

class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  ExactMatrix(std::size_t rows, std::size_t cols, std::vector<GaussianRational> row_major)
      : rows_(rows), cols_(cols), entries_(std::move(row_major)) {
    if (entries_.size() != rows_ * cols_) throw Error(ErrorCode::InvalidArgument, "matrix entry count mismatch");
  }
  ExactMatrix(std::initializer_list<std::initializer_list<GaussianRational>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(ErrorCode::InvalidArgument, "ragged matrix literal");
      entries_.insert(entries_.end(), r.begin(), r.end());
    }
  }

  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = GaussianRational(1);
    return m;
  }
  static ExactMatrix diagonal(const std::vector<GaussianRational>& d) {
    ExactMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  const std::vector<GaussianRational>& entries() const { return entries_; }

  GaussianRational& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const GaussianRational& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  bool is_zero() const {
    for (const auto& e : entries_)
      if (!e.is_zero()) return false;
    return true;
  }
  bool is_real() const {
    for (const auto& e : entries_)
      if (!e.is_real()) return false;
    return true;
  }

  GaussianRational trace() const {
    GaussianRational t(0);
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  ExactMatrix conj() const {
    ExactMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k) m.entries_[k] = entries_[k].conj();
    return m;
  }
  ExactMatrix transpose() const {
    ExactMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
    return m;
  }

  ExactMatrix operator-() const {
    ExactMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k) m.entries_[k] = -entries_[k];
    return m;
  }
  ExactMatrix& operator+=(const ExactMatrix& b) {
    check_same_shape(b);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += b.entries_[k];
    return *this;
  }
  ExactMatrix& operator-=(const ExactMatrix& b) {
    check_same_shape(b);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= b.entries_[k];
    return *this;
  }
  friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) { return a += b; }
  friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b) { return a -= b; }
  friend ExactMatrix operator*(const GaussianRational& s, ExactMatrix a) {
    for (auto& e : a.entries_) e = s * e;
    return a;
  }
  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorCode::InvalidArgument, "matrix product shape mismatch");
    ExactMatrix m(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const auto& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
      }
    return m;
  }
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }
  friend bool operator!=(const ExactMatrix& a, const ExactMatrix& b) { return !(a == b); }

 private:
  void check_same_shape(const ExactMatrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw Error(ErrorCode::InvalidArgument, "matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<GaussianRational> entries_;
};

/// Squared Frobenius norm, an exact rational.
inline Rational frobenius_norm2(const ExactMatrix& m) {
  Rational s = 0;
  for (const auto& e : m.entries()) s += e.norm2();
  return s;
}

/// Frobenius norm as an enclosure.
inline Enclosure matrix_norm(const ExactMatrix& m, unsigned bits = kDefaultSqrtBits) {
  if (!m.is_square()) throw Error(ErrorCode::InvalidArgument, "matrix_norm needs a square matrix");
  return sqrt_enclosure(frobenius_norm2(m), bits);
}

inline GaussianRational determinant(const ExactMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::InvalidArgument, "determinant of non-square matrix");
  std::vector<std::vector<GaussianRational>> rows(m.rows(), std::vector<GaussianRational>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) rows[r][c] = m(r, c);
  return determinant(std::move(rows));
}

/// Characteristic polynomial det(tI - A) by Faddeev-LeVerrier.
inline Poly characteristic_polynomial(const ExactMatrix& a) {
  if (!a.is_square()) throw Error(ErrorCode::InvalidArgument, "characteristic polynomial of non-square matrix");
  const std::size_t n = a.rows();
  std::vector<GaussianRational> c(n + 1);
  c[n] = GaussianRational(1);
  ExactMatrix m = ExactMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    ExactMatrix am = a * m;
    c[n - k] = -(am.trace() / GaussianRational(static_cast<long>(k)));
    m = am + c[n - k] * ExactMatrix::identity(n);
  }
  return Poly(std::move(c));
}

/// Inverse by Gauss-Jordan; throws InvalidArgument on singular input.
inline ExactMatrix inverse(const ExactMatrix& a) {
  if (!a.is_square()) throw Error(ErrorCode::InvalidArgument, "inverse of non-square matrix");
  const std::size_t n = a.rows();
  ExactMatrix m = a, inv = ExactMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m(pivot, col).is_zero()) ++pivot;
    if (pivot == n) throw Error(ErrorCode::InvalidArgument, "singular matrix");
    if (pivot != col)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(m(pivot, c), m(col, c));
        std::swap(inv(pivot, c), inv(col, c));
      }
    GaussianRational s = GaussianRational(1) / m(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      m(col, c) *= s;
      inv(col, c) *= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m(r, col).is_zero()) continue;
      GaussianRational f = m(r, col);
      for (std::size_t c = 0; c < n; ++c) {
        m(r, c) -= f * m(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

inline std::string to_string(const ExactMatrix& m) {
  std::string out = "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += r ? ", [" : "[";
    for (std::size_t c = 0; c < m.cols(); ++c) out += (c ? ", " : "") + to_string(m(r, c));
    out += "]";
  }
  return out + "]";
}

/// Square matrix of polynomials (the numerator matrix of a system).
using PolyMatrix = std::vector<std::vector<Poly>>;

inline Enclosure poly_matrix_norm(const PolyMatrix& p, unsigned bits = kDefaultSqrtBits) {
  Enclosure acc(Rational(0));
  for (const auto& row : p)
    for (const auto& e : row) acc += poly_norm(e, bits);
  return acc;
}

}  // namespace oscillate
