#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mono {

/// Exact nonnegative rational on int64 (normalized, den > 0). Comparisons
/// cross-multiply in 128 bits, so no overflow at the magnitudes the oracles
/// produce (numerators up to n*2^(n-1) with n <= 30).
struct Rational {
  int64_t num = 0;
  int64_t den = 1;

  static Rational of(int64_t num, int64_t den) {
    if (den <= 0) throw std::invalid_argument("Rational: den must be > 0");
    if (num < 0) throw std::invalid_argument("Rational: negative value");
    int64_t g = std::gcd(num, den);
    if (g == 0) g = 1;
    return Rational{num / g, den / g};
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
};

}  // namespace mono
