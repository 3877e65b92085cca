#pragma once

// Checked 64-bit integer arithmetic and a small exact fraction type.

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace latnorm {

using Int = std::int64_t;
using Wide = __int128;

class OverflowError : public std::overflow_error {
public:
  explicit OverflowError(const std::string& what)
      : std::overflow_error("integer overflow in " + what) {}
};

/// Thrown when an operation's precondition does not hold for its input.
class GeometryError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("add");
  return r;
}

inline Int checked_sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("sub");
  return r;
}

inline Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("mul");
  return r;
}

inline Int narrow(Wide w) {
  if (w > Wide(std::numeric_limits<Int>::max()) ||
      w < Wide(std::numeric_limits<Int>::min()))
    throw OverflowError("narrow");
  return static_cast<Int>(w);
}

inline Int gcd(Int a, Int b) { return std::gcd(a, b); }

/// Largest integer <= a/b, b != 0.
inline Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Smallest integer >= a/b, b != 0.
inline Int ceil_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

/// Exact rational num/den with den > 0, kept reduced.
struct Fraction {
  Int num = 0;
  Int den = 1;

  Fraction() = default;
  Fraction(Int n) : num(n), den(1) {}  // NOLINT(google-explicit-constructor)
  Fraction(Int n, Int d) {
    if (d == 0) throw GeometryError("fraction with zero denominator");
    if (d < 0) {
      n = checked_sub(0, n);
      d = checked_sub(0, d);
    }
    Int g = gcd(n, d);
    if (g == 0) g = 1;
    num = n / g;
    den = d / g;
  }

  Int floor() const { return floor_div(num, den); }
  Int ceil() const { return ceil_div(num, den); }
  bool is_integer() const { return den == 1; }

  friend Fraction operator+(const Fraction& a, const Fraction& b) {
    return {narrow(Wide(a.num) * b.den + Wide(b.num) * a.den),
            narrow(Wide(a.den) * b.den)};
  }
  friend Fraction operator-(const Fraction& a, const Fraction& b) {
    return {narrow(Wide(a.num) * b.den - Wide(b.num) * a.den),
            narrow(Wide(a.den) * b.den)};
  }
  friend Fraction operator*(const Fraction& a, Int k) {
    return {checked_mul(a.num, k), a.den};
  }
  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend auto operator<=>(const Fraction& a, const Fraction& b) {
    return Wide(a.num) * b.den <=> Wide(b.num) * a.den;
  }
};

}  // namespace latnorm
