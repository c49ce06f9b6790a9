#include "qmech/polytope.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "qmech/errors.hpp"

namespace qmech {

Rationals FeasibilityResult::payments_at(std::size_t profile) const {
  const std::size_t m = machines();
  if (!feasible || profile >= profiles.size()) throw PreconditionError("no witness for that profile");
  return Rationals(witness.begin() + static_cast<std::ptrdiff_t>(profile * m),
                   witness.begin() + static_cast<std::ptrdiff_t>((profile + 1) * m));
}

bool FeasibilityResult::recheck() const {
  if (feasible) return satisfies(problem, witness);
  if (infeasible_subset.empty()) return false;
  return !solve_feasibility(restrict_to(problem, infeasible_subset)).feasible;
}

namespace {

std::string profile_str(const Rationals& b) {
  std::string s = "(";
  for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + b[i].str();
  return s + ")";
}

}  // namespace

FeasibilityResult payment_polytope_feasible(const AllocationRule& rule, std::span<const Rational> bid_grid,
                                            std::span<const Rational> jobs, std::size_t machines,
                                            std::uint64_t profile_budget) {
  if (machines == 0) throw DomainError("at least one machine required");
  const std::set<Rational> unique(bid_grid.begin(), bid_grid.end());
  if (unique.empty()) throw DomainError("empty bid grid");
  const Rationals grid(unique.begin(), unique.end());

  std::uint64_t count = 1;
  for (std::size_t i = 0; i < machines; ++i) {
    count *= grid.size();
    if (count > profile_budget) {
      throw ResourceError("grid has more than " + std::to_string(profile_budget) + " profiles");
    }
  }

  FeasibilityResult result;
  std::map<Rationals, std::size_t> index;
  std::vector<std::size_t> digits(machines, 0);
  for (std::uint64_t k = 0; k < count; ++k) {
    Rationals profile(machines);
    for (std::size_t i = 0; i < machines; ++i) profile[i] = grid[digits[i]];
    index.emplace(profile, result.profiles.size());
    result.profiles.push_back(std::move(profile));
    for (std::size_t i = machines; i-- > 0;) {
      if (++digits[i] < grid.size()) break;
      digits[i] = 0;
    }
  }

  const Rationals job_vec(jobs.begin(), jobs.end());
  for (const auto& profile : result.profiles) result.workloads.push_back(rule.workloads(Instance(job_vec, profile)));

  const std::size_t m = machines;
  auto var = [m](std::size_t profile, std::size_t machine) { return profile * m + machine; };
  LpProblem& lp = result.problem;
  lp.variables = result.profiles.size() * m;
  lp.free_variables = true;

  for (std::size_t k = 0; k < result.profiles.size(); ++k) {
    const Rationals& b = result.profiles[k];
    const Rationals& w = result.workloads[k];
    const std::string at = profile_str(b);
    for (std::size_t i = 0; i < m; ++i) {
      // IR: p_i(b) >= b_i w_i(b)
      lp.constraints.push_back({{{var(k, i), Rational(1)}}, Relation::kGe, b[i] * w[i],
                                "ir machine " + std::to_string(i) + " at " + at});
      // Envy: p_i - p_j >= b_i (w_i - w_j)
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        lp.constraints.push_back({{{var(k, i), Rational(1)}, {var(k, j), Rational(-1)}},
                                  Relation::kGe,
                                  b[i] * (w[i] - w[j]),
                                  "envy " + std::to_string(i) + " of " + std::to_string(j) + " at " + at});
      }
      // Truthfulness with true speed b_i against each grid deviation d.
      for (const auto& d : grid) {
        if (d == b[i]) continue;
        Rationals lie = b;
        lie[i] = d;
        const std::size_t k2 = index.at(lie);
        lp.constraints.push_back({{{var(k, i), Rational(1)}, {var(k2, i), Rational(-1)}},
                                  Relation::kGe,
                                  b[i] * (w[i] - result.workloads[k2][i]),
                                  "truthful machine " + std::to_string(i) + " at " + at + " against " + d.str()});
      }
    }
    // Anonymity: a unique bid moved from k to l keeps its workload and payment.
    for (std::size_t u = 0; u < m; ++u) {
      if (std::count(b.begin(), b.end(), b[u]) != 1) continue;
      for (std::size_t l = 0; l < m; ++l) {
        if (l == u) continue;
        Rationals swapped = b;
        std::swap(swapped[u], swapped[l]);
        const std::size_t k2 = index.at(swapped);
        const std::string label = "anonymous bid " + b[u].str() + " from " + std::to_string(u) + " to " +
                                  std::to_string(l) + " at " + at;
        if (result.workloads[k2][l] != w[u]) {
          // The allocation itself breaks anonymity: record an unsatisfiable row.
          lp.constraints.push_back({{}, Relation::kEq, Rational(1), label + " (workload " +
                                                                        result.workloads[k2][l].str() + " vs " +
                                                                        w[u].str() + ")"});
          continue;
        }
        lp.constraints.push_back(
            {{{var(k2, l), Rational(1)}, {var(k, u), Rational(-1)}}, Relation::kEq, Rational(0), label});
      }
    }
  }

  LpResult solved = solve_feasibility(lp);
  result.feasible = solved.feasible;
  if (solved.feasible) {
    result.witness = std::move(solved.solution);
  } else {
    result.infeasible_subset = irreducible_infeasible_subset(lp);
  }
  result.verified = result.recheck();
  if (!result.verified) throw InternalError("payment polytope verdict failed its own recheck");
  return result;
}

}  // namespace qmech
