#ifndef HALFVAR_RATIONAL_HPP
#define HALFVAR_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace halfvar {

/// Exact rational with 64-bit numerator and positive denominator, always reduced.
/// Intermediate products go through __int128, so sums and comparisons of values
/// with denominators up to 3^38 stay exact.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num(n), den(1) {}
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational& x, const Rational& y) {
    return x.num == y.num && x.den == y.den;
  }
  friend bool operator<(const Rational& x, const Rational& y) {
    return static_cast<__int128>(x.num) * y.den < static_cast<__int128>(y.num) * x.den;
  }
  friend bool operator<=(const Rational& x, const Rational& y) { return !(y < x); }
  friend bool operator>(const Rational& x, const Rational& y) { return y < x; }
  friend bool operator>=(const Rational& x, const Rational& y) { return !(x < y); }

  friend Rational operator+(const Rational& x, const Rational& y) { return combine(x, y, 1); }
  friend Rational operator-(const Rational& x, const Rational& y) { return combine(x, y, -1); }
  friend Rational operator*(const Rational& x, std::int64_t k) {
    return from128(static_cast<__int128>(x.num) * k, x.den);
  }

 private:
  static Rational combine(const Rational& x, const Rational& y, int sign) {
    const __int128 n = static_cast<__int128>(x.num) * y.den + sign * static_cast<__int128>(y.num) * x.den;
    const __int128 d = static_cast<__int128>(x.den) * y.den;
    return from128(n, d);
  }
  static Rational from128(__int128 n, __int128 d) {
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      const __int128 r = a % b;
      a = b;
      b = r;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    constexpr __int128 lim = static_cast<__int128>(INT64_MAX);
    if (n > lim || -n > lim || d > lim) throw std::overflow_error("Rational: overflow");
    Rational r;
    r.num = static_cast<std::int64_t>(n);
    r.den = static_cast<std::int64_t>(d);
    return r;
  }
};

constexpr std::int64_t pow3(int e) {
  std::int64_t p = 1;
  for (int i = 0; i < e; ++i) p *= 3;
  return p;
}

}  // namespace halfvar

#endif
