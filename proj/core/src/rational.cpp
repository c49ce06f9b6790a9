#include "qmech/rational.hpp"

#include <cctype>
#include <ostream>

#include "qmech/errors.hpp"

namespace qmech {

namespace {

using Integer = Rational::Integer;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  if (!all_digits(s)) throw ParseError("not an integer: '" + std::string(s) + "'");
  return Integer(std::string(s));
}

Integer pow10(std::size_t k) {
  Integer r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= 10;
  return r;
}

}  // namespace

Rational::Rational(std::int64_t value) : value_(value) {}

Rational::Rational(std::int64_t numerator, std::int64_t denominator)
    : Rational(Integer(numerator), Integer(denominator)) {}

Rational::Rational(const Integer& numerator, const Integer& denominator) {
  if (denominator == 0) throw DomainError("rational with zero denominator");
  value_ = Value(numerator, denominator);
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw ParseError("empty rational");

  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational result;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(s.substr(0, slash));
    Integer den = parse_integer(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    result = Rational(num, den);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw ParseError("malformed decimal '" + std::string(text) + "'");
    Integer w = whole.empty() ? Integer(0) : parse_integer(whole);
    Integer f = frac.empty() ? Integer(0) : parse_integer(frac);
    Integer scale = pow10(frac.size());
    result = Rational(w * scale + f, scale);
  } else {
    result = Rational(parse_integer(s), Integer(1));
  }
  return negative ? -result : result;
}

Rational::Integer Rational::numerator() const { return boost::multiprecision::numerator(value_); }
Rational::Integer Rational::denominator() const { return boost::multiprecision::denominator(value_); }

bool Rational::is_zero() const { return value_ == 0; }
bool Rational::is_integer() const { return denominator() == 1; }
int Rational::sign() const { return value_.sign(); }

Rational Rational::abs() const { return Rational(boost::multiprecision::abs(value_)); }

Rational Rational::reciprocal() const {
  if (is_zero()) throw DomainError("reciprocal of zero");
  return Rational(Value(1) / value_);
}

Rational::Integer Rational::floor() const {
  Integer n = numerator();
  Integer d = denominator();
  Integer q = n / d;  // truncates toward zero
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

Rational::Integer Rational::ceil() const {
  Integer f = floor();
  return is_integer() ? f : f + 1;
}

Rational Rational::pow2(long exponent) {
  Integer p = 1;
  p <<= static_cast<unsigned>(exponent < 0 ? -exponent : exponent);
  return exponent < 0 ? Rational(Integer(1), p) : Rational(p, Integer(1));
}

Rational Rational::pow(unsigned exponent) const {
  Rational r(1);
  for (unsigned i = 0; i < exponent; ++i) r *= *this;
  return r;
}

long Rational::ceil_log2() const {
  if (sign() <= 0) throw DomainError("ceil_log2 of non-positive value " + str());
  // Bit lengths give the exponent to within one; settle the rest by exact comparison.
  auto bits = [](const Integer& v) { return static_cast<long>(boost::multiprecision::msb(v)) + 1; };
  long k = bits(numerator()) - bits(denominator());
  while (pow2(k) < *this) ++k;
  while (pow2(k - 1) >= *this) --k;
  return k;
}

double Rational::to_double() const { return value_.convert_to<double>(); }

std::string Rational::str() const {
  if (is_integer()) return numerator().str();
  return numerator().str() + "/" + denominator().str();
}

Rational& Rational::operator+=(const Rational& rhs) {
  value_ += rhs.value_;
  return *this;
}
Rational& Rational::operator-=(const Rational& rhs) {
  value_ -= rhs.value_;
  return *this;
}
Rational& Rational::operator*=(const Rational& rhs) {
  value_ *= rhs.value_;
  return *this;
}
Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw DomainError("division by zero");
  value_ /= rhs.value_;
  return *this;
}

Rational Rational::operator-() const { return Rational(Value(-value_)); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  int c = a.value_.compare(b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::size_t Rational::hash() const {
  std::size_t h1 = std::hash<std::string>{}(numerator().str());
  std::size_t h2 = std::hash<std::string>{}(denominator().str());
  return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace qmech
