#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace expminor {

/// Exact rational number with normalized int64 parts.
///
/// Always normalized: gcd(num, den) == 1 and den > 0. Comparisons widen to
/// 128 bits, so any pair of int64 rationals compares exactly.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num) : num_(num), den_(1) {}  // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
    normalize();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  long double to_long_double() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }

  /// Largest rational with denominator `den` that does not exceed `x`.
  static Rational floor_of(double x, std::int64_t den) {
    auto num = static_cast<std::int64_t>(
        std::floor(static_cast<long double>(x) * den));
    return Rational(num, den);
  }

  /// Accepts "p/q", "p" (integer) or a plain decimal such as "0.125".
  static Rational parse(std::string_view text) {
    auto s = std::string(text);
    auto slash = s.find('/');
    try {
      if (slash != std::string::npos) {
        std::size_t used = 0;
        auto p = std::stoll(s.substr(0, slash), &used);
        if (used != slash) throw std::invalid_argument("bad numerator");
        auto rest = s.substr(slash + 1);
        auto q = std::stoll(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("bad denominator");
        return Rational(p, q);
      }
      auto dot = s.find('.');
      if (dot == std::string::npos) {
        std::size_t used = 0;
        auto p = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument("bad integer");
        return Rational(p);
      }
      auto int_part = s.substr(0, dot);
      auto frac_part = s.substr(dot + 1);
      if (frac_part.empty() || frac_part.size() > 15 ||
          frac_part.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("bad decimal");
      }
      std::int64_t den = 1;
      for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
      bool negative = !int_part.empty() && int_part[0] == '-';
      std::int64_t ip = 0;
      if (!int_part.empty() && int_part != "-" && int_part != "+") {
        std::size_t used = 0;
        ip = std::stoll(int_part, &used);
        if (used != int_part.size()) throw std::invalid_argument("bad decimal");
      }
      std::int64_t fp = std::stoll(frac_part);
      std::int64_t mag = (ip < 0 ? -ip : ip) * den + fp;
      return Rational(negative ? -mag : mag, den);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("cannot parse rational '" + s + "'");
    }
  }

  std::string str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make_wide(static_cast<__int128>(a.num_) * b.den_ +
                         static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make_wide(static_cast<__int128>(a.num_) * b.den_ -
                         static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make_wide(static_cast<__int128>(a.num_) * b.num_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return make_wide(static_cast<__int128>(a.num_) * b.den_,
                     static_cast<__int128>(a.den_) * b.num_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    auto lhs = static_cast<__int128>(a.num_) * b.den_;
    auto rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  static Rational make_wide(__int128 num, __int128 den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 a = num < 0 ? -num : num;
    __int128 b = den;
    while (b != 0) {
      auto t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    constexpr __int128 kMax = INT64_MAX;
    if (num > kMax || num < -kMax || den > kMax) {
      throw std::overflow_error("Rational: int64 overflow");
    }
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    auto g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace expminor
