#ifndef EULAB_CORE_RATIONAL_HPP
#define EULAB_CORE_RATIONAL_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace core {

// Exact rational arithmetic for the small linear systems in the feasibility
// certificate. Intermediates use 128-bit products; inputs here are tiny.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n) : num(n), den(1) {}
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

  static Rational from_int128(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("Rational overflow");
    Rational r;
    r.num = static_cast<std::int64_t>(n);
    r.den = static_cast<std::int64_t>(d);
    return r;
  }

  // Exact conversion of a short decimal literal like "2.7" or "-1/3".
  static Rational parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos)
      return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::int64_t d = 1;
    for (size_t i = dot + 1; i < s.size(); ++i) d *= 10;
    return Rational(std::stoll(digits), d);
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_zero() const { return num == 0; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_int128(static_cast<__int128>(a.num) * b.den +
                           static_cast<__int128>(b.num) * a.den,
                       static_cast<__int128>(a.den) * b.den);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_int128(static_cast<__int128>(a.num) * b.den -
                           static_cast<__int128>(b.num) * a.den,
                       static_cast<__int128>(a.den) * b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_int128(static_cast<__int128>(a.num) * b.num,
                       static_cast<__int128>(a.den) * b.den);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw std::domain_error("Rational: division by zero");
    return from_int128(static_cast<__int128>(a.num) * b.den,
                       static_cast<__int128>(a.den) * b.num);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
};

}  // namespace core

#endif
