#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <string>

#include "latnorm/arith.hpp"

namespace latnorm {

/// A point of the lattice Z^n, n in {1,2,3}. Coordinates past `dim` are
/// kept at zero so that 3-vector formulas apply unchanged to lower
/// dimensions.
class Point {
public:
  Point() = default;

  explicit Point(int dim) : dim_(dim) { check_dim(dim); }

  Point(std::initializer_list<Int> coords) : dim_(int(coords.size())) {
    check_dim(dim_);
    std::size_t i = 0;
    for (Int c : coords) c_[i++] = c;
  }

  static Point from_array(const std::array<Int, 3>& a, int dim) {
    Point p(dim);
    for (int i = 0; i < dim; ++i) p.c_[i] = a[i];
    return p;
  }

  int dim() const { return dim_; }
  Int operator[](int i) const { return c_[i]; }
  Int& operator[](int i) { return c_[i]; }
  const std::array<Int, 3>& raw() const { return c_; }

  bool is_zero() const { return c_[0] == 0 && c_[1] == 0 && c_[2] == 0; }

  /// gcd of the entries; 0 for the zero vector.
  Int content() const { return gcd(gcd(c_[0], c_[1]), c_[2]); }

  Point primitive() const {
    Int g = content();
    if (g == 0) throw GeometryError("primitive() of zero vector");
    Point r(dim_);
    for (int i = 0; i < 3; ++i) r.c_[i] = c_[i] / g;
    return r;
  }

  /// Canonical representative of the line through the origin: first
  /// nonzero coordinate positive.
  Point sign_normalized() const {
    for (int i = 0; i < 3; ++i) {
      if (c_[i] > 0) return *this;
      if (c_[i] < 0) return -*this;
    }
    return *this;
  }

  Point operator-() const {
    Point r(dim_);
    for (int i = 0; i < 3; ++i) r.c_[i] = checked_sub(0, c_[i]);
    return r;
  }

  friend Point operator+(const Point& a, const Point& b) {
    a.check_same(b);
    Point r(a.dim_);
    for (int i = 0; i < 3; ++i) r.c_[i] = checked_add(a.c_[i], b.c_[i]);
    return r;
  }
  friend Point operator-(const Point& a, const Point& b) {
    a.check_same(b);
    Point r(a.dim_);
    for (int i = 0; i < 3; ++i) r.c_[i] = checked_sub(a.c_[i], b.c_[i]);
    return r;
  }
  friend Point operator*(Int k, const Point& a) {
    Point r(a.dim_);
    for (int i = 0; i < 3; ++i) r.c_[i] = checked_mul(k, a.c_[i]);
    return r;
  }
  Point& operator+=(const Point& o) { return *this = *this + o; }
  Point& operator-=(const Point& o) { return *this = *this - o; }

  friend bool operator==(const Point& a, const Point& b) = default;
  friend std::strong_ordering operator<=>(const Point& a, const Point& b) {
    if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
    return a.c_ <=> b.c_;
  }

  std::string str() const {
    std::string s = "(";
    for (int i = 0; i < dim_; ++i) {
      if (i) s += ",";
      s += std::to_string(c_[i]);
    }
    return s + ")";
  }

  friend std::ostream& operator<<(std::ostream& os, const Point& p) {
    return os << p.str();
  }

private:
  static void check_dim(int d) {
    if (d < 1 || d > 3) throw GeometryError("lattice dimension must be 1..3");
  }
  void check_same(const Point& o) const {
    if (dim_ != o.dim_) throw GeometryError("dimension mismatch");
  }

  std::array<Int, 3> c_{};
  int dim_ = 3;
};

/// Vectors and points share a representation.
using Vector = Point;

inline Wide dot_wide(const Point& a, const Point& b) {
  Wide s = 0;
  for (int i = 0; i < 3; ++i) s += Wide(a[i]) * b[i];
  return s;
}

inline Int dot(const Point& a, const Point& b) { return narrow(dot_wide(a, b)); }

inline Point cross(const Point& a, const Point& b) {
  Point r(3);
  r[0] = narrow(Wide(a[1]) * b[2] - Wide(a[2]) * b[1]);
  r[1] = narrow(Wide(a[2]) * b[0] - Wide(a[0]) * b[2]);
  r[2] = narrow(Wide(a[0]) * b[1] - Wide(a[1]) * b[0]);
  return r;
}

/// det[a b c] of three 3-vectors (rows).
inline Wide det3(const Point& a, const Point& b, const Point& c) {
  return Wide(a[0]) * (Wide(b[1]) * c[2] - Wide(b[2]) * c[1]) -
         Wide(a[1]) * (Wide(b[0]) * c[2] - Wide(b[2]) * c[0]) +
         Wide(a[2]) * (Wide(b[0]) * c[1] - Wide(b[1]) * c[0]);
}

inline Wide det2(const Point& a, const Point& b) {
  return Wide(a[0]) * b[1] - Wide(a[1]) * b[0];
}

/// Lift to Z^3 by zero padding (dimension tag only; coordinates are already
/// padded).
inline Point lift3(const Point& p) { return Point::from_array(p.raw(), 3); }

inline Point drop_to(const Point& p, int dim) {
  return Point::from_array(p.raw(), dim);
}

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept {
    std::size_t h = std::size_t(p.dim());
    for (int i = 0; i < 3; ++i)
      h = h * 1000003u ^ std::hash<Int>{}(p[i]);
    return h;
  }
};

}  // namespace latnorm
