#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qmech/model.hpp"
#include "qmech/properties.hpp"

namespace qmech {

// sum_j coefficients[j] * x_j  (relation)  rhs
struct LinearConstraint {
  std::map<std::size_t, Rational> coefficients;
  Relation relation = Relation::kGe;
  Rational rhs{0};
  std::string label;

  Rational lhs_at(const Rationals& x) const;
  bool satisfied_by(const Rationals& x) const { return holds(lhs_at(x), relation, rhs); }
};

struct LpProblem {
  std::size_t variables = 0;
  // Free variables are split internally into two nonnegative parts.
  bool free_variables = true;
  std::vector<LinearConstraint> constraints;
};

struct LpResult {
  bool feasible = false;
  Rationals solution;
  // Rows with a nonzero multiplier in the phase-1 dual. Together they are
  // infeasible, though not necessarily minimal.
  std::vector<std::size_t> farkas_support;
  std::size_t pivots = 0;
};

// Exact phase-1 simplex with Bland's rule.
LpResult solve_feasibility(const LpProblem& problem);

bool satisfies(const LpProblem& problem, const Rationals& x);

// Irreducible infeasible subset: drops rows from the Farkas support one at a
// time while the rest stays infeasible. Requires an infeasible problem.
std::vector<std::size_t> irreducible_infeasible_subset(const LpProblem& problem);

LpProblem restrict_to(const LpProblem& problem, const std::vector<std::size_t>& rows);

}  // namespace qmech
