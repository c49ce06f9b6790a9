#include <doctest.h>

#include "oracles.hpp"
#include "qmech/errors.hpp"
#include "qmech/model.hpp"

using namespace qmech;
using oracle::q;

TEST_CASE("makespan") {
  CHECK(makespan(Rationals{3, 0}, Rationals{1, 2}) == 3);
  CHECK(makespan(Rationals{2, 1}, Rationals{1, 2}) == 2);
  // Lower-bound profile at m = 3, alpha = 1, one job per machine.
  CHECK(makespan(Rationals{1, 1, 3}, Rationals{3, 3, 1}) == 3);
  CHECK_THROWS_AS(makespan(Rationals{1, 2}, Rationals{1}), DimensionError);
}

TEST_CASE("makespan ignores a common relabelling") {
  CHECK(makespan(Rationals{q("5/2"), 1, 4}, Rationals{2, 7, q("1/3")}) ==
        makespan(Rationals{4, q("5/2"), 1}, Rationals{q("1/3"), 2, 7}));
}

TEST_CASE("utility") {
  CHECK(utility(2, 1, 2) == 0);
  CHECK(utility(3, 1, 2) == 1);
  CHECK(utility(9, 3, 0) == 9);
  CHECK(utility(1, 1, 2) == -1);
}

TEST_CASE("rounded_speed") {
  CHECK(rounded_speed(8) == 8);
  CHECK(rounded_speed(3) == 4);
  CHECK(rounded_speed(q("3/8")) == q("1/2"));
  CHECK_THROWS_AS(rounded_speed(0), DomainError);
  CHECK_THROWS_AS(rounded_speed(-1), DomainError);
  Rational prev(0);
  for (int num = 1; num <= 80; ++num) {
    Rational b(num, 7);
    Rational s = rounded_speed(b);
    CHECK(s / b >= 1);
    CHECK(s / b < 2);
    CHECK(s >= prev);
    prev = s;
  }
}

TEST_CASE("instance canonicalizes jobs and remembers their order") {
  Instance inst({1, 3, 2}, {1, 2});
  CHECK(inst.jobs() == Rationals{3, 2, 1});
  CHECK(inst.original_job_index(0) == 1);
  CHECK(inst.original_job_index(2) == 0);
  CHECK(inst.total_length() == 6);
  CHECK_THROWS_AS(Instance({}, {1}), DomainError);
  CHECK_THROWS_AS(Instance({1}, {0}), DomainError);
  CHECK_THROWS_AS(Instance({-1}, {1}), DomainError);
  CHECK(inst.with_bid(1, 5).bids() == Rationals{1, 5});
}

TEST_CASE("assignment conserves total length") {
  Rationals jobs{3, 2, 1};
  Assignment a(jobs, 3, {2, 0, 2});
  CHECK(a.workloads() == Rationals{2, 0, 4});
  CHECK(a.total() == 6);
}

TEST_CASE("expected allocation validates distributions") {
  Rationals jobs{2, 1};
  ExpectedAllocation e(jobs, 2, {{{0, q("1/2")}, {1, q("1/2")}}, {{1, 1}}});
  CHECK(e.expected_workloads() == Rationals{1, 2});
  CHECK_THROWS_AS(ExpectedAllocation(jobs, 2, {{{0, q("1/2")}}, {{1, 1}}}), InconsistencyError);
}

TEST_CASE("parse_rationals") {
  CHECK(parse_rationals("1, 3/2,0.5") == Rationals{1, q("3/2"), q("1/2")});
  CHECK_THROWS_AS(parse_rationals("1,,2"), ParseError);
}
