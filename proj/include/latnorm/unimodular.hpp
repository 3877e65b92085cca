#pragma once

#include <array>
#include <cstdlib>
#include <utility>

#include "latnorm/point.hpp"

namespace latnorm {

/// Integer n x n matrix, n <= 3, stored padded to 3 x 3 with identity in
/// the unused block.
class IntMatrix {
public:
  explicit IntMatrix(int dim = 3) : dim_(dim) {
    for (int i = 0; i < 3; ++i) m_[i][i] = 1;
  }

  static IntMatrix identity(int dim) { return IntMatrix(dim); }

  /// Rows given as points of dimension `dim`.
  static IntMatrix from_rows(const std::array<Point, 3>& rows, int dim) {
    IntMatrix m(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m.m_[i][j] = rows[i][j];
    return m;
  }

  int dim() const { return dim_; }
  Int operator()(int i, int j) const { return m_[i][j]; }
  Int& operator()(int i, int j) { return m_[i][j]; }

  Point row(int i) const {
    Point r(dim_);
    for (int j = 0; j < dim_; ++j) r[j] = m_[i][j];
    return r;
  }
  Point col(int j) const {
    Point r(dim_);
    for (int i = 0; i < dim_; ++i) r[i] = m_[i][j];
    return r;
  }

  Wide det() const {
    Point a = Point::from_array(m_[0], 3), b = Point::from_array(m_[1], 3),
          c = Point::from_array(m_[2], 3);
    return det3(a, b, c);
  }

  Point apply(const Point& p) const {
    if (p.dim() != dim_) throw GeometryError("matrix/point dimension mismatch");
    Point r(dim_);
    for (int i = 0; i < dim_; ++i) {
      Wide s = 0;
      for (int j = 0; j < dim_; ++j) s += Wide(m_[i][j]) * p[j];
      r[i] = narrow(s);
    }
    return r;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.dim_ != b.dim_) throw GeometryError("matrix dimension mismatch");
    IntMatrix r(a.dim_);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Wide s = 0;
        for (int k = 0; k < 3; ++k) s += Wide(a.m_[i][k]) * b.m_[k][j];
        r.m_[i][j] = narrow(s);
      }
    return r;
  }

  /// Inverse of a matrix with determinant +-1.
  IntMatrix unimodular_inverse() const {
    Wide d = det();
    if (d != 1 && d != -1) throw GeometryError("matrix is not unimodular");
    IntMatrix r(dim_);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
        int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
        Wide cof = Wide(m_[r0][c0]) * m_[r1][c1] - Wide(m_[r0][c1]) * m_[r1][c0];
        r.m_[i][j] = narrow(cof * d);
      }
    return r;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
  std::array<std::array<Int, 3>, 3> m_{};
  int dim_;
};

/// A unimodular integer matrix whose last column is the primitive vector v
/// (so its inverse sends v to the last unit vector).
inline IntMatrix complete_to_unimodular(const Point& v) {
  const int n = v.dim();
  if (v.is_zero() || v.content() != 1)
    throw GeometryError("unimodular completion needs a primitive vector");
  // Row-reduce the column v to e_n with unimodular row operations, recording
  // them in `ops`; then the answer is ops^{-1}.
  std::array<Int, 3> w = v.raw();
  IntMatrix ops(n);
  auto row_add = [&](int dst, int src, Int k) {  // row dst += k * row src
    w[dst] = checked_add(w[dst], checked_mul(k, w[src]));
    for (int j = 0; j < 3; ++j)
      ops(dst, j) = checked_add(ops(dst, j), checked_mul(k, ops(src, j)));
  };
  auto row_swap = [&](int a, int b) {
    std::swap(w[a], w[b]);
    for (int j = 0; j < 3; ++j) std::swap(ops(a, j), ops(b, j));
  };
  auto row_neg = [&](int a) {
    w[a] = -w[a];
    for (int j = 0; j < 3; ++j) ops(a, j) = -ops(a, j);
  };
  while (true) {
    int pivot = -1;
    for (int i = 0; i < n; ++i)
      if (w[i] != 0 && (pivot < 0 || std::llabs(w[i]) < std::llabs(w[pivot])))
        pivot = i;
    bool done = true;
    for (int i = 0; i < n; ++i)
      if (i != pivot && w[i] != 0) {
        row_add(i, pivot, -(w[i] / w[pivot]));
        done = false;
      }
    if (done) {
      if (pivot != n - 1) row_swap(pivot, n - 1);
      if (w[n - 1] < 0) row_neg(n - 1);
      break;
    }
  }
  return ops.unimodular_inverse();
}

/// x -> linear * x + translation with |det(linear)| = 1.
class AffineUnimodularMap {
public:
  explicit AffineUnimodularMap(int dim = 3)
      : linear_(IntMatrix::identity(dim)), translation_(dim) {}

  AffineUnimodularMap(IntMatrix linear, Point translation)
      : linear_(std::move(linear)), translation_(std::move(translation)) {
    Wide d = linear_.det();
    if (d != 1 && d != -1)
      throw GeometryError("affine map is not unimodular (|det| != 1)");
    if (translation_.dim() != linear_.dim())
      throw GeometryError("translation dimension mismatch");
  }

  static AffineUnimodularMap translation(const Point& t) {
    return {IntMatrix::identity(t.dim()), t};
  }

  int dim() const { return linear_.dim(); }
  const IntMatrix& linear() const { return linear_; }
  const Point& offset() const { return translation_; }

  Point operator()(const Point& p) const { return linear_.apply(p) + translation_; }

  /// (*this) after `first`.
  AffineUnimodularMap after(const AffineUnimodularMap& first) const {
    return {linear_ * first.linear_, linear_.apply(first.translation_) + translation_};
  }

  AffineUnimodularMap inverse() const {
    IntMatrix inv = linear_.unimodular_inverse();
    return {inv, -inv.apply(translation_)};
  }

  friend bool operator==(const AffineUnimodularMap&,
                         const AffineUnimodularMap&) = default;

private:
  IntMatrix linear_;
  Point translation_;
};

}  // namespace latnorm
