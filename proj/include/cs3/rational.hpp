#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "cs3/errors.hpp"

namespace cs3 {

/// Exact rational number on int64 with gcd normalization.
///
/// Intermediates go through 128-bit integers; a result that does not fit
/// back into int64 throws. All structure constants, Gram matrices and form
/// coefficients in this library are small, so the headroom is generous.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_i128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                     i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_i128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                     i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error("rational division by zero");
    return from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    i128 lhs = i128(a.num_) * b.den_;
    i128 rhs = i128(b.num_) * a.den_;
    return lhs < rhs ? std::strong_ordering::less
           : lhs > rhs ? std::strong_ordering::greater
                       : std::strong_ordering::equal;
  }

  Rational abs() const { return num_ < 0 ? -*this : *this; }

  /// Largest integer <= value.
  std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  /// Accepts "p", "p/q" and plain decimals such as "1.5" or "-0.25".
  static Rational parse(const std::string& text);

  /// True when |value| is the square of a rational, i.e. both |num| and den
  /// are perfect squares. Used to decide whether a coframe rescale stays exact.
  bool abs_is_square() const {
    return is_perfect_square(num_ < 0 ? -num_ : num_) && is_perfect_square(den_);
  }

  /// Exact square root of |value|; caller must check abs_is_square() first.
  Rational abs_sqrt() const {
    return Rational(isqrt(num_ < 0 ? -num_ : num_), isqrt(den_));
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) {
    return os << q.str();
  }

 private:
  using i128 = __int128;

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;

  void assign(std::int64_t n, std::int64_t d) {
    if (d == 0) throw Error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    num_ = n;
    den_ = d;
  }

  static Rational from_i128(i128 n, i128 d) {
    if (d == 0) throw Error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    i128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr i128 lo = std::numeric_limits<std::int64_t>::min();
    constexpr i128 hi = std::numeric_limits<std::int64_t>::max();
    if (n < lo || n > hi || d > hi) throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static bool is_perfect_square(std::int64_t v) {
    if (v < 0) return false;
    auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
    for (std::int64_t c = r > 1 ? r - 1 : 0; c <= r + 1; ++c)
      if (c * c == v) return true;
    return false;
  }

  static std::int64_t isqrt(std::int64_t v) {
    auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
  }
};

inline Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw Error("empty rational literal");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::int64_t n = std::stoll(text.substr(0, slash));
    std::int64_t d = std::stoll(text.substr(slash + 1));
    return Rational(n, d);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::int64_t scale = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) scale *= 10;
    return Rational(std::stoll(digits), scale);
  }
  return Rational(std::stoll(text));
}

/// Scalar of the form q * pi^k with q rational and k a (small) integer.
///
/// This is the exact carrier for normalization constants: bilinear-form
/// scales like (1/16) pi^-2 and fundamental volumes like 2 pi^2 multiply to
/// plain rationals, so invariants that the theory asserts to be rational are
/// produced exactly. Addition requires matching pi powers (zero matches any).
class PiScalar {
 public:
  constexpr PiScalar() = default;
  PiScalar(std::int64_t n) : coeff_(n) {}  // NOLINT(google-explicit-constructor)
  PiScalar(Rational q) : coeff_(q) {}      // NOLINT(google-explicit-constructor)
  PiScalar(Rational q, int pi_pow) : coeff_(q), pi_pow_(q.is_zero() ? 0 : pi_pow) {}

  const Rational& coeff() const { return coeff_; }
  int pi_pow() const { return pi_pow_; }
  bool is_zero() const { return coeff_.is_zero(); }

  /// The value must be a plain rational (pi power zero).
  Rational as_rational() const {
    if (pi_pow_ != 0) throw Error("PiScalar is not rational: pi^" + std::to_string(pi_pow_));
    return coeff_;
  }

  double to_double() const {
    double v = coeff_.to_double();
    constexpr double pi = 3.14159265358979323846264338327950288;
    for (int k = 0; k < pi_pow_; ++k) v *= pi;
    for (int k = 0; k > pi_pow_; --k) v /= pi;
    return v;
  }

  PiScalar operator-() const { return PiScalar(-coeff_, pi_pow_); }

  friend PiScalar operator+(const PiScalar& a, const PiScalar& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.pi_pow_ != b.pi_pow_)
      throw Error("PiScalar addition with mismatched pi powers");
    return PiScalar(a.coeff_ + b.coeff_, a.pi_pow_);
  }
  friend PiScalar operator-(const PiScalar& a, const PiScalar& b) { return a + (-b); }
  friend PiScalar operator*(const PiScalar& a, const PiScalar& b) {
    return PiScalar(a.coeff_ * b.coeff_, a.pi_pow_ + b.pi_pow_);
  }
  friend PiScalar operator/(const PiScalar& a, const PiScalar& b) {
    return PiScalar(a.coeff_ / b.coeff_, a.pi_pow_ - b.pi_pow_);
  }

  PiScalar& operator+=(const PiScalar& o) { return *this = *this + o; }
  PiScalar& operator-=(const PiScalar& o) { return *this = *this - o; }
  PiScalar& operator*=(const PiScalar& o) { return *this = *this * o; }

  friend bool operator==(const PiScalar& a, const PiScalar& b) {
    return a.coeff_ == b.coeff_ && a.pi_pow_ == b.pi_pow_;
  }

  std::string str() const {
    if (pi_pow_ == 0) return coeff_.str();
    return coeff_.str() + "*pi^" + std::to_string(pi_pow_);
  }

  friend std::ostream& operator<<(std::ostream& os, const PiScalar& s) {
    return os << s.str();
  }

 private:
  Rational coeff_;
  int pi_pow_ = 0;
};

/// Uniform interface over the three coefficient backends: Rational and
/// PiScalar are exact, double is the tolerance-checked path.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static Rational from_rational(const Rational& q) { return q; }
  static bool is_zero(const Rational& v) { return v.is_zero(); }
  static double to_double(const Rational& v) { return v.to_double(); }
};

template <>
struct scalar_traits<PiScalar> {
  static constexpr bool exact = true;
  static PiScalar from_rational(const Rational& q) { return PiScalar(q); }
  static bool is_zero(const PiScalar& v) { return v.is_zero(); }
  static double to_double(const PiScalar& v) { return v.to_double(); }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static double from_rational(const Rational& q) { return q.to_double(); }
  static bool is_zero(double v) { return v == 0.0; }
  static double to_double(double v) { return v; }
};

}  // namespace cs3
