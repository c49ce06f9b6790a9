#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace qmech {

// Exact rational scalar. Always stored in canonical form (gcd 1, positive
// denominator); GMP keeps that invariant after every operation.
class Rational {
 public:
  using Integer = boost::multiprecision::mpz_int;

  Rational() = default;
  Rational(std::int64_t value);  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t numerator, std::int64_t denominator);
  Rational(const Integer& numerator, const Integer& denominator);

  // Accepts "p", "p/q", "-p/q" and finite decimals such as "1.25" or "-0.5".
  static Rational parse(std::string_view text);

  Integer numerator() const;
  Integer denominator() const;

  bool is_zero() const;
  bool is_integer() const;
  int sign() const;

  Rational abs() const;
  Rational reciprocal() const;
  Integer floor() const;
  Integer ceil() const;

  // 2^k for integer k (k may be negative).
  static Rational pow2(long exponent);
  Rational pow(unsigned exponent) const;

  // Smallest k with 2^k >= value. Requires value > 0.
  long ceil_log2() const;

  double to_double() const;
  // "p" when the denominator is 1, otherwise "p/q".
  std::string str() const;

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  std::size_t hash() const;

 private:
  using Value = boost::multiprecision::mpq_rational;
  explicit Rational(Value v) : value_(std::move(v)) {}
  Value value_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

}  // namespace qmech

template <>
struct std::hash<qmech::Rational> {
  std::size_t operator()(const qmech::Rational& r) const noexcept { return r.hash(); }
};
