#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <utility>

#include "qmech/model.hpp"

namespace qmech {

// Deterministic tie handling for the greedy rules.
struct TieBreakPolicy {
  enum class Argmin { kLowestIndex, kHighestIndex };
  // How LPT* pairs bundles with machines inside one rounded-speed class.
  enum class Regroup { kByWorkload, kByJobCount };

  Argmin argmin = Argmin::kLowestIndex;
  Regroup regroup = Regroup::kByWorkload;
};

class AllocationRule {
 public:
  using Fn = std::function<Allocation(const Instance&)>;

  AllocationRule(std::string name, Fn fn, bool randomized = false)
      : name_(std::move(name)), fn_(std::move(fn)), randomized_(randomized) {}

  const std::string& name() const { return name_; }
  bool randomized() const { return randomized_; }

  Allocation operator()(const Instance& instance) const { return fn_(instance); }
  Rationals workloads(const Instance& instance) const { return workloads_of(fn_(instance)); }

 private:
  std::string name_;
  Fn fn_;
  bool randomized_;
};

inline constexpr std::uint64_t kDefaultOptBudget = 10'000'000;

// Kovács-style LPT on rounded speeds, followed by the in-class regrouping.
Assignment lpt_star(const Instance& instance, const TieBreakPolicy& policy = {});

// max_j min_i max{ b_i l_j, (l_1+..+l_j) / (1/b_1+..+1/b_i) } over bids sorted
// nondecreasing.
Rational at_lower_bound(const Instance& instance);

// Bin pouring of the randomized Archer-Tardos rule. Bin sizes T_LB / b_i, bins
// visited in nondecreasing bid order (ties by index).
ExpectedAllocation at_fractional(const Instance& instance);

// Draws one job-to-machine map from at_fractional's distributions.
Assignment at_sample(const Instance& instance, std::mt19937_64& rng);

// Everything to the lowest bid (lowest index on ties).
Assignment vcg_allocate(const Instance& instance);

struct OptResult {
  Assignment assignment;
  Rational makespan;
};

// Exact minimum makespan by depth-first branch and bound. `node_budget` bounds
// the number of search nodes; exceeding it throws ResourceError.
OptResult opt_makespan(const Instance& instance, std::uint64_t node_budget = kDefaultOptBudget);

// Two machines only: minimum makespan, then minimum total running time
// sum_i b_i w_i, then the larger bundle on the lower machine index.
Assignment two_machine_opt(const Instance& instance);

namespace rules {

AllocationRule lpt_star(TieBreakPolicy policy = {});
AllocationRule at_expected();
// Shares one seeded engine across calls, so consecutive calls differ but a
// fixed seed replays the same sequence.
AllocationRule at_sample(std::uint64_t seed);
AllocationRule vcg();
AllocationRule opt(std::uint64_t node_budget = kDefaultOptBudget);
AllocationRule two_machine_opt();

// CLI names: lpt-star, at-expected, at-sample, vcg, opt, two-opt.
AllocationRule by_name(const std::string& name, std::uint64_t seed = 0,
                       std::uint64_t node_budget = kDefaultOptBudget);

}  // namespace rules

}  // namespace qmech
