#include <doctest.h>

#include "oracles.hpp"
#include "qmech/simplex.hpp"

using namespace qmech;
using oracle::q;

namespace {

LinearConstraint row(std::map<std::size_t, Rational> c, Relation r, Rational rhs, std::string label = {}) {
  return {std::move(c), r, std::move(rhs), std::move(label)};
}

}  // namespace

TEST_CASE("feasible system returns a witness") {
  LpProblem lp;
  lp.variables = 2;
  lp.constraints = {row({{0, 1}, {1, 1}}, Relation::kEq, 3), row({{0, 1}, {1, -1}}, Relation::kGe, 1),
                    row({{1, 2}}, Relation::kGe, q("1/2"))};
  const LpResult r = solve_feasibility(lp);
  REQUIRE(r.feasible);
  CHECK(satisfies(lp, r.solution));
}

TEST_CASE("free variables may go negative") {
  LpProblem lp;
  lp.variables = 1;
  lp.constraints = {row({{0, 1}}, Relation::kLe, -5)};
  const LpResult r = solve_feasibility(lp);
  REQUIRE(r.feasible);
  CHECK(r.solution[0] <= -5);
  lp.free_variables = false;
  CHECK_FALSE(solve_feasibility(lp).feasible);
}

TEST_CASE("infeasible system yields an irreducible subset") {
  LpProblem lp;
  lp.variables = 3;
  lp.constraints = {row({{2, 1}}, Relation::kGe, -100, "slack"),
                    row({{0, 1}, {1, -1}}, Relation::kGe, 2, "x - y >= 2"),
                    row({{0, 1}}, Relation::kLe, 1, "x <= 1"),
                    row({{1, 1}}, Relation::kGe, 0, "y >= 0"),
                    row({{2, 1}, {0, 1}}, Relation::kLe, 50, "unrelated")};
  const LpResult r = solve_feasibility(lp);
  CHECK_FALSE(r.feasible);
  CHECK_FALSE(solve_feasibility(restrict_to(lp, r.farkas_support)).feasible);
  const auto iis = irreducible_infeasible_subset(lp);
  CHECK(iis == std::vector<std::size_t>{1, 2, 3});
  for (std::size_t drop = 0; drop < iis.size(); ++drop) {
    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < iis.size(); ++k) {
      if (k != drop) rest.push_back(iis[k]);
    }
    CHECK(solve_feasibility(restrict_to(lp, rest)).feasible);
  }
}

TEST_CASE("empty rows") {
  LpProblem lp;
  lp.variables = 1;
  lp.constraints = {row({}, Relation::kEq, 1, "0 == 1")};
  CHECK_FALSE(solve_feasibility(lp).feasible);
  CHECK(irreducible_infeasible_subset(lp) == std::vector<std::size_t>{0});
  lp.constraints = {row({}, Relation::kLe, 1)};
  CHECK(solve_feasibility(lp).feasible);
}

TEST_CASE("degenerate cycling-prone system terminates") {
  // Beale's example as a feasibility question with the objective as a cut.
  LpProblem lp;
  lp.variables = 4;
  lp.free_variables = false;
  lp.constraints = {row({{0, q("1/4")}, {1, -60}, {2, q("-1/25")}, {3, 9}}, Relation::kLe, 0),
                    row({{0, q("1/2")}, {1, -90}, {2, q("-1/50")}, {3, 3}}, Relation::kLe, 0),
                    row({{2, 1}}, Relation::kLe, 1),
                    row({{0, q("3/4")}, {1, -150}, {2, q("1/50")}, {3, -6}}, Relation::kGe, q("1/20"))};
  const LpResult r = solve_feasibility(lp);
  REQUIRE(r.feasible);
  CHECK(satisfies(lp, r.solution));
}
