#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace vclab {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Small exact rational. Enough for the eta / inner-product identities, whose
// numerators never leave [-4m, 4m]; intermediates go through __int128.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    require(den != 0, "Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;  // both normalized
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                   static_cast<__int128>(a.den) * b.den);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den,
                   static_cast<__int128>(a.den) * b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num) * b.num,
                   static_cast<__int128>(a.den) * b.den);
  }
  Rational operator-() const { return Rational(-num, den); }

  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }

 private:
  static Rational from128(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 an = n < 0 ? -n : n;
    __int128 g = gcd128(an, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    require(n <= INT64_MAX && n >= INT64_MIN && d <= INT64_MAX, "Rational: overflow");
    Rational r;
    r.num = static_cast<long long>(n);
    r.den = static_cast<long long>(d);
    if (r.num == 0) r.den = 1;
    return r;
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
};

}  // namespace vclab
