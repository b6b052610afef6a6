#pragma once

// Small dense integer and real matrices (row-major storage; lattice bases
// are stored column-wise, i.e. column j is the j-th basis vector).

#include <initializer_list>
#include <ostream>

#include "frobgeom/core.hpp"

namespace frobgeom {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, T fill = T{}) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != cols_) throw Error("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  static Matrix diagonal(std::span<const T> d) {
    Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const T& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  std::vector<T> column(int j) const {
    std::vector<T> c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  void set_column(int j, std::span<const T> v) {
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<T> apply(std::span<const T> x) const {
    if (static_cast<int>(x.size()) != cols_) throw Error("matrix-vector dimension mismatch");
    std::vector<T> y(rows_, T{});
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error("matrix product dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k)
        for (int j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
    return c;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << '[';
    for (int i = 0; i < m.rows_; ++i) {
      os << (i ? ",[" : "[");
      for (int j = 0; j < m.cols_; ++j) os << (j ? "," : "") << static_cast<long double>(m(i, j));
      os << ']';
    }
    return os << ']';
  }

  const std::vector<T>& data() const { return data_; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<i64>;
using RealMatrix = Matrix<Real>;

/// Exact determinant by fraction-free (Bareiss) elimination.
inline i64 determinant(const IntMatrix& m) {
  if (!m.square()) throw Error("determinant of a non-square matrix");
  const int n = m.rows();
  if (n == 0) return 1;
  std::vector<i128> a(m.data().begin(), m.data().end());
  auto at = [&](int i, int j) -> i128& { return a[static_cast<std::size_t>(i) * n + j]; };
  i128 prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      int p = k + 1;
      while (p < n && at(p, k) == 0) ++p;
      if (p == n) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
        // Bareiss keeps entries bounded by minors; guard the 128-bit range
        if (at(i, j) > (i128(1) << 100) || at(i, j) < -(i128(1) << 100)) throw Error("determinant overflow");
      }
    prev = at(k, k);
  }
  return narrow(sign * at(n - 1, n - 1));
}

/// Cofactor matrix C with C(i,j) = (-1)^{i+j} det(minor(i,j)); adj = C^T.
inline IntMatrix cofactor(const IntMatrix& m) {
  const int n = m.rows();
  if (!m.square()) throw Error("cofactor of a non-square matrix");
  IntMatrix c(n, n);
  if (n == 1) {
    c(0, 0) = 1;
    return c;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      IntMatrix minor(n - 1, n - 1);
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int s = 0, ss = 0; s < n; ++s) {
          if (s == j) continue;
          minor(rr, ss++) = m(r, s);
        }
        ++rr;
      }
      const i64 det = determinant(minor);
      c(i, j) = ((i + j) % 2 ? -det : det);
    }
  return c;
}

inline Real determinant(const RealMatrix& m) {
  if (!m.square()) throw Error("determinant of a non-square matrix");
  const int n = m.rows();
  RealMatrix a = m;
  Real det = 1;
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::fabs(a(i, k)) > std::fabs(a(p, k))) p = i;
    if (a(p, k) == 0) return 0;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      det = -det;
    }
    det *= a(k, k);
    for (int i = k + 1; i < n; ++i) {
      const Real f = a(i, k) / a(k, k);
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

/// Inverse by Gauss-Jordan with partial pivoting; throws when singular.
inline RealMatrix inverse(const RealMatrix& m) {
  const int n = m.rows();
  if (!m.square()) throw Error("inverse of a non-square matrix");
  RealMatrix a = m, inv = RealMatrix::identity(n);
  Real scale = 0;
  for (Real v : m.data()) scale = std::max(scale, std::fabs(v));
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::fabs(a(i, k)) > std::fabs(a(p, k))) p = i;
    if (std::fabs(a(p, k)) <= scale * 1e-30L) throw Error("singular matrix");
    for (int j = 0; j < n; ++j) {
      std::swap(a(k, j), a(p, j));
      std::swap(inv(k, j), inv(p, j));
    }
    const Real piv = a(k, k);
    for (int j = 0; j < n; ++j) {
      a(k, j) /= piv;
      inv(k, j) /= piv;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      const Real f = a(i, k);
      if (f == 0) continue;
      for (int j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

inline RealMatrix to_real(const IntMatrix& m) {
  RealMatrix r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = static_cast<Real>(m(i, j));
  return r;
}

}  // namespace frobgeom
