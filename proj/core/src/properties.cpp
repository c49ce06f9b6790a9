#include "qmech/properties.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "qmech/errors.hpp"
#include "qmech/workcurve.hpp"

namespace qmech {

bool holds(const Rational& lhs, Relation relation, const Rational& rhs) {
  switch (relation) {
    case Relation::kGe:
      return lhs >= rhs;
    case Relation::kLe:
      return lhs <= rhs;
    case Relation::kEq:
      return lhs == rhs;
    case Relation::kGt:
      return lhs > rhs;
    case Relation::kLt:
      return lhs < rhs;
  }
  return false;
}

std::string relation_symbol(Relation relation) {
  switch (relation) {
    case Relation::kGe:
      return ">=";
    case Relation::kLe:
      return "<=";
    case Relation::kEq:
      return "==";
    case Relation::kGt:
      return ">";
    case Relation::kLt:
      return "<";
  }
  return "?";
}

namespace {

void require_same_length(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw DimensionError("vectors differ in length");
}

Rational dot(std::span<const Rational> bids, std::span<const Rational> workloads,
             const std::vector<std::size_t>& perm) {
  Rational total(0);
  for (std::size_t i = 0; i < bids.size(); ++i) total += bids[i] * workloads[perm[i]];
  return total;
}

PropertyVerdict fail(std::string property, Counterexample example, std::uint64_t checks) {
  return PropertyVerdict{std::move(property), false, std::move(example), checks};
}

Rationals to_vector(std::span<const Rational> v) { return Rationals(v.begin(), v.end()); }

}  // namespace

std::optional<std::vector<std::size_t>> improving_permutation(std::span<const Rational> bids,
                                                              std::span<const Rational> workloads) {
  require_same_length(bids, workloads);
  if (bids.size() > 10) throw ResourceError("permutation enumeration limited to 10 machines");
  std::vector<std::size_t> perm(bids.size());
  std::iota(perm.begin(), perm.end(), 0);
  const Rational base = dot(bids, workloads, perm);
  do {
    if (dot(bids, workloads, perm) < base) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

PropertyVerdict check_local_efficiency(std::span<const Rational> bids, std::span<const Rational> workloads) {
  require_same_length(bids, workloads);
  const std::size_t m = bids.size();
  PropertyVerdict verdict{"local-efficiency"};
  for (std::size_t i = 0; i < m && verdict.pass; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      ++verdict.checks;
      if (bids[i] > bids[k] && workloads[i] > workloads[k]) {
        std::vector<std::size_t> swap(m);
        std::iota(swap.begin(), swap.end(), 0);
        std::swap(swap[i], swap[k]);
        std::vector<std::size_t> identity(m);
        std::iota(identity.begin(), identity.end(), 0);
        Counterexample example;
        example.bids = to_vector(bids);
        example.workloads = to_vector(workloads);
        example.permutation = swap;
        example.machine = i;
        example.description = "machine " + std::to_string(i) + " bids more than machine " + std::to_string(k) +
                              " but carries more; swapping their bundles lowers the total running time";
        example.lhs = dot(bids, workloads, identity);
        example.required = Relation::kLe;
        example.rhs = dot(bids, workloads, swap);
        verdict = fail("local-efficiency", std::move(example), verdict.checks);
        break;
      }
    }
  }
  if (m <= 6) {
    const bool by_permutation = !improving_permutation(bids, workloads).has_value();
    if (by_permutation != verdict.pass) {
      throw InternalError("pairwise and permutation local-efficiency criteria disagree");
    }
  }
  return verdict;
}

PropertyVerdict check_envy_free(std::span<const Rational> bids, std::span<const Rational> workloads,
                                std::span<const Rational> payments) {
  require_same_length(bids, workloads);
  require_same_length(bids, payments);
  std::uint64_t checks = 0;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    const Rational own = payments[i] - bids[i] * workloads[i];
    for (std::size_t j = 0; j < bids.size(); ++j) {
      if (i == j) continue;
      ++checks;
      const Rational theirs = payments[j] - bids[i] * workloads[j];
      if (own < theirs) {
        Counterexample example;
        example.bids = to_vector(bids);
        example.workloads = to_vector(workloads);
        example.payments = to_vector(payments);
        example.machine = i;
        example.description = "machine " + std::to_string(i) + " envies machine " + std::to_string(j);
        example.lhs = own;
        example.rhs = theirs;
        return fail("envy-free", std::move(example), checks);
      }
    }
  }
  return PropertyVerdict{"envy-free", true, std::nullopt, checks};
}

PropertyVerdict check_ir(std::span<const Rational> bids, std::span<const Rational> workloads,
                         std::span<const Rational> payments) {
  require_same_length(bids, workloads);
  require_same_length(bids, payments);
  for (std::size_t i = 0; i < bids.size(); ++i) {
    const Rational u = payments[i] - bids[i] * workloads[i];
    if (u.sign() < 0) {
      Counterexample example;
      example.bids = to_vector(bids);
      example.workloads = to_vector(workloads);
      example.payments = to_vector(payments);
      example.machine = i;
      example.description = "machine " + std::to_string(i) + " has negative utility";
      example.lhs = u;
      example.rhs = Rational(0);
      return fail("individual-rationality", std::move(example), i + 1);
    }
  }
  return PropertyVerdict{"individual-rationality", true, std::nullopt, bids.size()};
}

PropertyVerdict check_truthful(const Mechanism& mechanism, const Instance& instance,
                               std::span<const Rational> deviation_grid) {
  const Outcome truthful = mechanism(instance);
  std::uint64_t checks = 0;
  for (std::size_t i = 0; i < instance.machine_count(); ++i) {
    const Rational& t = instance.bids()[i];
    const Rational honest = utility(truthful.payments[i], t, truthful.workloads()[i]);
    for (const auto& d : deviation_grid) {
      if (d == t || d.sign() <= 0) continue;
      ++checks;
      const Instance deviated = instance.with_bid(i, d);
      const Outcome lie = mechanism(deviated);
      const Rational gain = utility(lie.payments[i], t, lie.workloads()[i]);
      if (honest < gain) {
        Counterexample example;
        example.jobs = instance.jobs();
        example.bids = instance.bids();
        example.other_bids = deviated.bids();
        example.machine = i;
        example.description = "machine " + std::to_string(i) + " gains by bidding " + d.str() + " instead of " + t.str();
        example.lhs = honest;
        example.rhs = gain;
        return fail("truthful", std::move(example), checks);
      }
    }
  }
  return PropertyVerdict{"truthful", true, std::nullopt, checks};
}

PropertyVerdict check_monotone(const AllocationRule& rule, const Instance& instance,
                               std::span<const Rational> deviation_grid) {
  std::set<Rational> grid;
  for (const auto& d : deviation_grid) {
    if (d.sign() > 0) grid.insert(d);
  }
  std::uint64_t checks = 0;
  for (std::size_t i = 0; i < instance.machine_count(); ++i) {
    std::optional<Rational> prev_bid;
    Rational prev_load;
    for (const auto& d : grid) {
      const Instance probe = instance.with_bid(i, d);
      Rational load = rule.workloads(probe)[i];
      if (prev_bid) {
        ++checks;
        if (load > prev_load) {
          Counterexample example;
          example.jobs = instance.jobs();
          example.bids = instance.with_bid(i, *prev_bid).bids();
          example.other_bids = probe.bids();
          example.machine = i;
          example.description = "machine " + std::to_string(i) + " gets more work at bid " + d.str() + " than at " +
                                prev_bid->str();
          example.lhs = prev_load;
          example.rhs = load;
          return fail("monotone", std::move(example), checks);
        }
      }
      prev_bid = d;
      prev_load = std::move(load);
    }
  }
  return PropertyVerdict{"monotone", true, std::nullopt, checks};
}

PropertyVerdict check_monotone_exact(const AllocationRule& rule, const Instance& instance, const Rational& cap) {
  std::uint64_t checks = 0;
  for (std::size_t i = 0; i < instance.machine_count(); ++i) {
    Rationals others = instance.bids();
    others.erase(others.begin() + static_cast<std::ptrdiff_t>(i));
    const WorkCurve curve = build_workcurve(rule, others, instance.jobs(), cap, i);
    checks += curve.values().size();
    if (auto rise = curve.first_rise()) {
      Counterexample example;
      example.jobs = instance.jobs();
      example.bids = instance.with_bid(i, rise->lower_bid).bids();
      example.other_bids = instance.with_bid(i, rise->higher_bid).bids();
      example.machine = i;
      example.description = "workcurve of machine " + std::to_string(i) + " rises between bids " +
                            rise->lower_bid.str() + " and " + rise->higher_bid.str();
      example.lhs = rise->lower_value;
      example.rhs = rise->higher_value;
      return fail("monotone", std::move(example), checks);
    }
  }
  return PropertyVerdict{"monotone", true, std::nullopt, checks};
}

PropertyVerdict check_anonymous(const Mechanism& mechanism, const Instance& instance) {
  const auto& bids = instance.bids();
  const std::size_t m = bids.size();
  const Outcome base = mechanism(instance);
  std::uint64_t checks = 0;
  for (std::size_t k = 0; k < m; ++k) {
    if (std::count(bids.begin(), bids.end(), bids[k]) != 1) continue;
    for (std::size_t l = 0; l < m; ++l) {
      if (l == k) continue;
      Rationals swapped = bids;
      std::swap(swapped[k], swapped[l]);
      const Outcome moved = mechanism(instance.with_bids(swapped));
      const std::pair<const Rational*, const Rational*> sides[] = {
          {&moved.workloads()[l], &base.workloads()[k]},
          {&moved.payments[l], &base.payments[k]},
      };
      for (int what = 0; what < 2; ++what) {
        ++checks;
        if (*sides[what].first != *sides[what].second) {
          Counterexample example;
          example.jobs = instance.jobs();
          example.bids = bids;
          example.other_bids = swapped;
          example.machine = k;
          example.description = std::string(what == 0 ? "workload" : "payment") + " of unique bid " +
                                bids[k].str() + " changes when moved from position " + std::to_string(k) + " to " +
                                std::to_string(l);
          example.lhs = *sides[what].first;
          example.required = Relation::kEq;
          example.rhs = *sides[what].second;
          return fail("anonymous", std::move(example), checks);
        }
      }
    }
  }
  return PropertyVerdict{"anonymous", true, std::nullopt, checks};
}

PropertyVerdict check_scalable(const AllocationRule& rule, const Instance& instance,
                               std::span<const Rational> scalars) {
  const Rationals base = rule.workloads(instance);
  std::uint64_t checks = 0;
  for (const auto& c : scalars) {
    if (c.sign() <= 0) throw DomainError("scaling factors must be positive");
    Rationals scaled = instance.bids();
    for (auto& b : scaled) b *= c;
    const Rationals moved = rule.workloads(instance.with_bids(scaled));
    for (std::size_t i = 0; i < base.size(); ++i) {
      ++checks;
      if (moved[i] != base[i]) {
        Counterexample example;
        example.jobs = instance.jobs();
        example.bids = instance.bids();
        example.other_bids = scaled;
        example.machine = i;
        example.description = "workload of machine " + std::to_string(i) + " changes when all bids scale by " +
                              c.str();
        example.lhs = moved[i];
        example.required = Relation::kEq;
        example.rhs = base[i];
        return fail("scalable", std::move(example), checks);
      }
    }
  }
  return PropertyVerdict{"scalable", true, std::nullopt, checks};
}

Rational expected_makespan(const ExpectedAllocation& allocation, std::span<const Rational> jobs,
                           std::span<const Rational> speeds) {
  const auto& dists = allocation.job_distributions();
  if (dists.size() != jobs.size()) throw DimensionError("one distribution per job required");
  if (speeds.size() != allocation.machine_count()) throw DimensionError("one speed per machine required");
  constexpr std::uint64_t kMaxOutcomes = std::uint64_t{1} << 22;
  std::uint64_t outcomes = 1;
  for (const auto& d : dists) {
    outcomes *= d.size();
    if (outcomes > kMaxOutcomes) throw ResourceError("too many joint outcomes for an exact expected makespan");
  }

  Rationals loads(allocation.machine_count(), Rational(0));
  Rational total(0);
  auto walk = [&](auto&& self, std::size_t j, const Rational& prob) -> void {
    if (j == dists.size()) {
      total += prob * makespan(loads, speeds);
      return;
    }
    for (const auto& [machine, p] : dists[j]) {
      loads[machine] += jobs[j];
      self(self, j + 1, prob * p);
      loads[machine] -= jobs[j];
    }
  };
  walk(walk, 0, Rational(1));
  return total;
}

Rational approx_ratio(const AllocationRule& rule, const Instance& instance, std::uint64_t node_budget) {
  const Rational opt = opt_makespan(instance, node_budget).makespan;
  const Allocation allocation = rule(instance);
  if (const auto* expected = std::get_if<ExpectedAllocation>(&allocation)) {
    return expected_makespan(*expected, instance.jobs(), instance.bids()) / opt;
  }
  return makespan(std::get<Assignment>(allocation), instance.bids()) / opt;
}

Rationals default_grid(const Instance& instance) {
  const Rational top = *std::max_element(instance.bids().begin(), instance.bids().end());
  std::set<Rational> grid(instance.bids().begin(), instance.bids().end());
  for (int j = 1; j <= 64; ++j) grid.insert(Rational(j, 8) * top);
  return Rationals(grid.begin(), grid.end());
}

}  // namespace qmech
