#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmech/allocations.hpp"
#include "qmech/model.hpp"

namespace qmech {

// (a + b x) / (c + d x). Every expected-workload piece of the randomized
// binning rule has this shape: constants, k/x, affine a - x, and the
// prefix-capacity ratios S x / (D x + 1).
struct Mobius {
  Rational a{0}, b{0}, c{1}, d{0};

  static Mobius constant(const Rational& v) { return {v, 0, 1, 0}; }
  static Mobius linear(const Rational& slope) { return {0, slope, 1, 0}; }

  Rational operator()(const Rational& x) const;
  // Unique representative: constants as (v,0,1,0); otherwise c == 1, or
  // c == 0 and d == 1.
  Mobius normalized() const;
  bool is_zero() const;

  enum class Kind { kConst, kRecip, kAffine, kMobius };
  Kind kind() const;

  friend bool operator==(const Mobius& x, const Mobius& y) = default;
};

Mobius operator-(const Rational& k, const Mobius& f);
Mobius operator*(const Rational& k, const Mobius& f);
// f(x) / x; defined when f(0) == 0 or f is affine.
Mobius divide_by_x(const Mobius& f);

// Rational points in (lo, hi) where f == g. Throws ResolutionError when the
// crossing is irrational.
Rationals crossings(const Mobius& f, const Mobius& g, const Rational& lo, const std::optional<Rational>& hi);

struct RationalInterval {
  Rational lo;
  Rational hi;
  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

// Interval containing ln(r), r > 0, of width at most max_width. Uses
// ln r = k ln 2 + ln(r / 2^k) and the atanh series with its tail bound.
RationalInterval ln_enclosure(const Rational& r, const Rational& max_width);

// rational_part + sum coef * ln(arg). Arguments are kept >= 1 and terms with
// equal coefficients are folded into one logarithm.
struct LogLinear {
  Rational rational_part{0};
  std::map<Rational, Rational> log_terms;  // arg -> coefficient

  void add_log(const Rational& coefficient, const Rational& argument);
  LogLinear normalized() const;
  RationalInterval enclose(const Rational& max_width) const;
  double approx() const;
};

struct CurvePiece {
  Rational lo;
  std::optional<Rational> hi;  // nullopt: unbounded
  Mobius form;
};

// Exact piecewise description of an expected workload on (0, inf).
struct PiecewiseCurve {
  std::vector<CurvePiece> pieces;

  Rational value_at(const Rational& x) const;
  // The last piece is not identically zero.
  bool divergent() const;
};

LogLinear integrate(const PiecewiseCurve& curve, const Rational& lo, const std::optional<Rational>& hi);

// Symbolic expected workload of the machine at `position` under the
// randomized binning rule, as a function of its own bid. Regime boundaries are
// the rational crossings of all candidate lower-bound expressions.
PiecewiseCurve expected_workcurve(const AllocationRule& rule, std::span<const Rational> others_bids,
                                  std::span<const Rational> jobs, std::size_t position = 0);

std::string kind_name(Mobius::Kind kind);

}  // namespace qmech
