#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmech/allocations.hpp"
#include "qmech/model.hpp"
#include "qmech/payments.hpp"

namespace qmech {

// The relation that should hold between the two sides of a checked inequality.
enum class Relation { kGe, kLe, kEq, kGt, kLt };

bool holds(const Rational& lhs, Relation relation, const Rational& rhs);
std::string relation_symbol(Relation relation);

struct Counterexample {
  Rationals jobs;
  Rationals bids;
  Rationals workloads;
  Rationals payments;
  // Deviated or permuted profile, when the violation involves a second profile.
  std::optional<Rationals> other_bids;
  std::vector<std::size_t> permutation;
  std::size_t machine = 0;
  std::string description;
  Rational lhs;
  Relation required = Relation::kGe;
  Rational rhs;

  bool violated() const { return !holds(lhs, required, rhs); }
};

struct PropertyVerdict {
  std::string property;
  bool pass = true;
  std::optional<Counterexample> counterexample;
  std::uint64_t checks = 0;

  // A failing verdict must carry a counterexample that re-evaluates to a strict
  // violation; a passing one must carry none.
  bool recheck() const { return pass ? !counterexample : counterexample && counterexample->violated(); }
};

// b_i > b_k implies w_i <= w_k for all pairs. For m <= 6 the verdict is
// cross-checked against permutation enumeration; disagreement throws.
PropertyVerdict check_local_efficiency(std::span<const Rational> bids, std::span<const Rational> workloads);

// Permutation pi with sum b_i w_pi(i) < sum b_i w_i, if one exists. Factorial
// time; m <= 10.
std::optional<std::vector<std::size_t>> improving_permutation(std::span<const Rational> bids,
                                                              std::span<const Rational> workloads);

PropertyVerdict check_envy_free(std::span<const Rational> bids, std::span<const Rational> workloads,
                                std::span<const Rational> payments);
PropertyVerdict check_ir(std::span<const Rational> bids, std::span<const Rational> workloads,
                         std::span<const Rational> payments);

// Every machine, every unilateral deviation to a grid bid. The reported bids
// are taken as true speeds.
PropertyVerdict check_truthful(const Mechanism& mechanism, const Instance& instance,
                               std::span<const Rational> deviation_grid);

// Workload nonincreasing along the sorted grid (own bid varied, others fixed).
PropertyVerdict check_monotone(const AllocationRule& rule, const Instance& instance,
                               std::span<const Rational> deviation_grid);
// Same, on the exact workcurve of each machine up to `cap`.
PropertyVerdict check_monotone_exact(const AllocationRule& rule, const Instance& instance, const Rational& cap);

// Moving a unique bid to another position moves its workload and payment
// with it.
PropertyVerdict check_anonymous(const Mechanism& mechanism, const Instance& instance);

// Workloads unchanged under bids -> c * bids.
PropertyVerdict check_scalable(const AllocationRule& rule, const Instance& instance,
                               std::span<const Rational> scalars);

// makespan(rule(instance)) / OPT. Expected allocations use the exact expected
// makespan of the induced job distribution.
Rational approx_ratio(const AllocationRule& rule, const Instance& instance,
                      std::uint64_t node_budget = kDefaultOptBudget);

// E[max_i b_i w_i] with jobs placed independently.
Rational expected_makespan(const ExpectedAllocation& allocation, std::span<const Rational> jobs,
                           std::span<const Rational> speeds);

// {j/8 * max_bid : 1 <= j <= 64} together with the instance's own bids.
Rationals default_grid(const Instance& instance);

}  // namespace qmech
