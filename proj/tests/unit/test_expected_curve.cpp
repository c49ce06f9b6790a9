#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qmech/errors.hpp"
#include "qmech/expected_curve.hpp"

using namespace qmech;
using oracle::q;

namespace {

const Rationals kJobs{2, 1};

// Midpoint sum of E[w(x, 1)] straight from the bin pouring.
double riemann_integral(double hi, int steps) {
  double total = 0;
  for (int k = 0; k < steps; ++k) {
    const Rational x = Rational(2 * k + 1, 2 * static_cast<std::int64_t>(steps)) * Rational(static_cast<std::int64_t>(hi));
    total += at_fractional(Instance(kJobs, {x, 1})).expected_workloads()[0].to_double();
  }
  return total * hi / steps;
}

}  // namespace

TEST_CASE("randomized binning curve against 1") {
  const PiecewiseCurve c = expected_workcurve(rules::at_expected(), Rationals{1}, kJobs);
  REQUIRE(c.pieces.size() == 6);
  const Rationals bounds{q("1/3"), q("1/2"), 1, 2, 3};
  for (std::size_t k = 0; k < 5; ++k) CHECK(*c.pieces[k].hi == bounds[k]);
  CHECK_FALSE(c.pieces[5].hi.has_value());
  CHECK(c.pieces[0].form.normalized() == Mobius::constant(3));
  CHECK(c.pieces[1].form.kind() == Mobius::Kind::kRecip);
  CHECK(c.pieces[1].form(q("2/5")) == q("5/2"));
  CHECK(c.pieces[2].form.normalized() == Mobius::constant(2));
  CHECK(c.pieces[3].form.normalized() == Mobius::constant(1));
  CHECK(c.pieces[4].form.kind() == Mobius::Kind::kAffine);
  CHECK(c.pieces[4].form(q("5/2")) == q("1/2"));
  CHECK(c.pieces[5].form.is_zero());
  CHECK_FALSE(c.divergent());
}

TEST_CASE("pieces agree with the bin pouring everywhere") {
  const PiecewiseCurve c = expected_workcurve(rules::at_expected(), Rationals{1}, kJobs);
  for (int k = 1; k <= 400; ++k) {
    const Rational x(k, 97);
    CHECK(c.value_at(x) == at_fractional(Instance(kJobs, {x, 1})).expected_workloads()[0]);
  }
}

TEST_CASE("integral is 7/2 + ln(3/2)") {
  const PiecewiseCurve c = expected_workcurve(rules::at_expected(), Rationals{1}, kJobs);
  const LogLinear v = integrate(c, 0, std::nullopt);
  CHECK(v.rational_part == q("7/2"));
  REQUIRE(v.log_terms.size() == 1);
  CHECK(v.log_terms.begin()->first == q("3/2"));
  CHECK(v.log_terms.begin()->second == 1);
  CHECK(std::abs(v.approx() - (3.5 + std::log(3.0) - std::log(2.0))) < 1e-12);
  CHECK(std::abs(riemann_integral(4, 40000) - v.approx()) < 1e-4);
}

TEST_CASE("more machines and jobs") {
  const Rationals others{q("3/2"), 4};
  const Rationals jobs{3, 2, 2, 1};
  const PiecewiseCurve c = expected_workcurve(rules::at_expected(), others, jobs, 1);
  for (int k = 1; k <= 300; ++k) {
    const Rational x(k, 31);
    CHECK(c.value_at(x) == at_fractional(Instance(jobs, {q("3/2"), x, 4})).expected_workloads()[1]);
  }
  CHECK_FALSE(c.divergent());
}

TEST_CASE("single machine diverges") {
  const PiecewiseCurve c = expected_workcurve(rules::at_expected(), Rationals{}, kJobs);
  CHECK(c.divergent());
  CHECK_THROWS_AS(integrate(c, 0, std::nullopt), DivergenceError);
}

TEST_CASE("other rules are rejected") {
  CHECK_THROWS_AS(expected_workcurve(rules::lpt_star(), Rationals{1}, kJobs), DomainError);
}

TEST_CASE("ln enclosure") {
  for (const Rational r : {q("3/2"), Rational(2), q("1/7"), Rational(1000), q("999/1000")}) {
    const RationalInterval box = ln_enclosure(r, q("1/1000000000"));
    CHECK(box.width() <= q("1/1000000000"));
    const double ln = std::log(r.to_double());
    CHECK(box.lo.to_double() <= ln + 1e-12);
    CHECK(box.hi.to_double() >= ln - 1e-12);
  }
  CHECK(ln_enclosure(1, q("1/10")).width() == 0);
  CHECK_THROWS_AS(ln_enclosure(0, q("1/10")), DomainError);
}

TEST_CASE("crossings are exact") {
  // 1/x meets 3 - x at (3 +- sqrt 5)/2: irrational.
  CHECK_THROWS_AS(crossings(Mobius{1, 0, 0, 1}, Mobius{3, -1, 1, 0}, 0, 10), ResolutionError);
  // 2/x meets 3 - x at 1 and 2.
  CHECK(crossings(Mobius{2, 0, 0, 1}, Mobius{3, -1, 1, 0}, 0, 10) == Rationals{1, 2});
  CHECK(crossings(Mobius::constant(2), Mobius::linear(4), 0, std::nullopt) == Rationals{q("1/2")});
}
