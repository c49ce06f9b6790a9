#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qmech/allocations.hpp"
#include "qmech/simplex.hpp"

namespace qmech {

inline constexpr std::uint64_t kDefaultProfileBudget = 4096;

// Payments p_i(b) for every profile b in grid^m that satisfy grid
// truthfulness, envy-freeness, IR and anonymity for a fixed allocation rule.
// Feasibility on a grid is necessary, not sufficient, for the continuum
// properties; only an infeasible verdict carries over.
struct FeasibilityResult {
  bool feasible = false;
  std::vector<Rationals> profiles;
  std::vector<Rationals> workloads;  // per profile
  LpProblem problem;
  // p_i(profiles[k]) is witness[k * m + i].
  Rationals witness;
  // Indices into problem.constraints.
  std::vector<std::size_t> infeasible_subset;
  bool verified = false;

  std::size_t machines() const { return profiles.empty() ? 0 : profiles.front().size(); }
  Rationals payments_at(std::size_t profile) const;
  // Witness satisfies every constraint, or the subset re-solves infeasible.
  bool recheck() const;
};

FeasibilityResult payment_polytope_feasible(const AllocationRule& rule, std::span<const Rational> bid_grid,
                                            std::span<const Rational> jobs, std::size_t machines = 2,
                                            std::uint64_t profile_budget = kDefaultProfileBudget);

}  // namespace qmech
