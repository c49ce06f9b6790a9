#include "qmech/allocations.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "qmech/errors.hpp"

namespace qmech {

namespace {

// Machine indices ordered by nondecreasing bid, ties by index.
std::vector<std::size_t> bid_order(const Rationals& bids) {
  std::vector<std::size_t> order(bids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return bids[a] < bids[b]; });
  return order;
}

}  // namespace

Assignment lpt_star(const Instance& instance, const TieBreakPolicy& policy) {
  const auto& jobs = instance.jobs();
  const auto& bids = instance.bids();
  const std::size_t m = instance.machine_count();

  Rationals rounded(m);
  for (std::size_t i = 0; i < m; ++i) rounded[i] = rounded_speed(bids[i]);

  Rationals load(m, Rational(0));
  std::vector<std::size_t> owner(jobs.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    std::size_t best = 0;
    Rational best_cost = (load[0] + jobs[j]) * rounded[0];
    for (std::size_t i = 1; i < m; ++i) {
      Rational cost = (load[i] + jobs[j]) * rounded[i];
      bool take = policy.argmin == TieBreakPolicy::Argmin::kLowestIndex ? cost < best_cost : cost <= best_cost;
      if (take) {
        best = i;
        best_cost = std::move(cost);
      }
    }
    owner[j] = best;
    load[best] += jobs[j];
  }

  // Regroup bundles inside each rounded-speed class: lower bid, larger bundle.
  std::map<Rational, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < m; ++i) classes[rounded[i]].push_back(i);

  std::vector<std::size_t> relabel(m);
  std::iota(relabel.begin(), relabel.end(), std::size_t{0});
  for (auto& [speed, members] : classes) {
    if (members.size() < 2) continue;
    std::vector<std::size_t> count(m, 0);
    for (std::size_t i : owner) ++count[i];

    std::vector<std::size_t> bundles = members;  // bundle currently held by machine `members[k]`
    std::stable_sort(bundles.begin(), bundles.end(), [&](std::size_t a, std::size_t b) {
      if (policy.regroup == TieBreakPolicy::Regroup::kByJobCount && count[a] != count[b]) {
        return count[a] > count[b];
      }
      return load[a] > load[b];
    });
    std::vector<std::size_t> machines = members;
    std::stable_sort(machines.begin(), machines.end(),
                     [&](std::size_t a, std::size_t b) { return bids[a] < bids[b]; });
    for (std::size_t k = 0; k < members.size(); ++k) relabel[bundles[k]] = machines[k];
  }
  for (auto& i : owner) i = relabel[i];
  return Assignment(jobs, m, std::move(owner));
}

Rational at_lower_bound(const Instance& instance) {
  const auto& jobs = instance.jobs();
  const auto& bids = instance.bids();
  const auto order = bid_order(bids);

  Rationals inverse_prefix(order.size());
  Rational acc(0);
  for (std::size_t r = 0; r < order.size(); ++r) {
    acc += bids[order[r]].reciprocal();
    inverse_prefix[r] = acc;
  }

  Rational bound(0);
  Rational prefix(0);
  for (const auto& l : jobs) {
    prefix += l;
    Rational best;
    for (std::size_t r = 0; r < order.size(); ++r) {
      Rational candidate = max(bids[order[r]] * l, prefix / inverse_prefix[r]);
      if (r == 0 || candidate < best) best = std::move(candidate);
    }
    bound = max(bound, best);
  }
  return bound;
}

ExpectedAllocation at_fractional(const Instance& instance) {
  const auto& jobs = instance.jobs();
  const auto& bids = instance.bids();
  const std::size_t m = instance.machine_count();
  const auto order = bid_order(bids);
  const Rational bound = at_lower_bound(instance);

  std::vector<ExpectedAllocation::Distribution> dist(jobs.size());
  std::size_t bin = 0;
  Rational room = bound / bids[order[0]];
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    Rational left = jobs[j];
    while (left.sign() > 0) {
      if (room.is_zero()) {
        if (++bin >= m) throw InternalError("bins cannot hold every job; lower bound too small");
        room = bound / bids[order[bin]];
        continue;
      }
      Rational piece = min(left, room);
      dist[j][order[bin]] += piece / jobs[j];
      left -= piece;
      room -= piece;
    }
  }
  return ExpectedAllocation(jobs, m, std::move(dist));
}

Assignment at_sample(const Instance& instance, std::mt19937_64& rng) {
  const auto fractional = at_fractional(instance);
  const Rational::Integer scale = Rational::Integer(1) << 64;
  std::vector<std::size_t> owner;
  owner.reserve(instance.job_count());
  for (const auto& dist : fractional.job_distributions()) {
    Rational u(Rational::Integer(static_cast<unsigned long long>(rng())), scale);
    Rational cumulative(0);
    std::size_t chosen = dist.rbegin()->first;
    for (const auto& [machine, p] : dist) {
      cumulative += p;
      if (u < cumulative) {
        chosen = machine;
        break;
      }
    }
    owner.push_back(chosen);
  }
  return Assignment(instance.jobs(), instance.machine_count(), std::move(owner));
}

Assignment vcg_allocate(const Instance& instance) {
  const auto& bids = instance.bids();
  std::size_t fastest = static_cast<std::size_t>(std::min_element(bids.begin(), bids.end()) - bids.begin());
  return Assignment(instance.jobs(), instance.machine_count(),
                    std::vector<std::size_t>(instance.job_count(), fastest));
}

namespace {

class BranchAndBound {
 public:
  BranchAndBound(const Instance& instance, std::uint64_t budget)
      : jobs_(instance.jobs()), speeds_(instance.bids()), budget_(budget), load_(speeds_.size(), Rational(0)),
        current_(jobs_.size(), 0) {
    Rational inverse_sum(0);
    for (const auto& s : speeds_) inverse_sum += s.reciprocal();
    fluid_bound_ = instance.total_length() / inverse_sum;
    fastest_ = *std::min_element(speeds_.begin(), speeds_.end());
    seed_incumbent();
  }

  OptResult run() {
    if (best_ > max(fluid_bound_, jobs_[0] * fastest_)) search(0, Rational(0));
    return {Assignment(jobs_, speeds_.size(), best_assignment_), best_};
  }

 private:
  // Greedy earliest-finish schedule as the first incumbent.
  void seed_incumbent() {
    Rationals load(speeds_.size(), Rational(0));
    best_assignment_.assign(jobs_.size(), 0);
    for (std::size_t j = 0; j < jobs_.size(); ++j) {
      std::size_t pick = 0;
      for (std::size_t i = 1; i < speeds_.size(); ++i) {
        if ((load[i] + jobs_[j]) * speeds_[i] < (load[pick] + jobs_[j]) * speeds_[pick]) pick = i;
      }
      load[pick] += jobs_[j];
      best_assignment_[j] = pick;
    }
    best_ = makespan(load, speeds_);
  }

  void search(std::size_t j, const Rational& partial) {
    if (++nodes_ > budget_) {
      throw ResourceError("opt_makespan exceeded its budget of " + std::to_string(budget_) + " nodes");
    }
    if (j == jobs_.size()) {
      if (partial < best_) {
        best_ = partial;
        best_assignment_ = current_;
      }
      return;
    }
    if (max(partial, max(fluid_bound_, jobs_[j] * fastest_)) >= best_) return;

    for (std::size_t i = 0; i < speeds_.size(); ++i) {
      // Machines with equal speed and equal load are interchangeable.
      bool duplicate = false;
      for (std::size_t k = 0; k < i && !duplicate; ++k) {
        duplicate = speeds_[k] == speeds_[i] && load_[k] == load_[i];
      }
      if (duplicate) continue;

      Rational finish = (load_[i] + jobs_[j]) * speeds_[i];
      Rational next = max(partial, finish);
      if (next >= best_) continue;
      load_[i] += jobs_[j];
      current_[j] = i;
      search(j + 1, next);
      load_[i] -= jobs_[j];
    }
  }

  const Rationals& jobs_;
  const Rationals& speeds_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  Rationals load_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_assignment_;
  Rational best_;
  Rational fluid_bound_;
  Rational fastest_;
};

}  // namespace

OptResult opt_makespan(const Instance& instance, std::uint64_t node_budget) {
  return BranchAndBound(instance, node_budget).run();
}

Assignment two_machine_opt(const Instance& instance) {
  if (instance.machine_count() != 2) {
    throw DomainError("two_machine_opt needs exactly 2 machines, got " + std::to_string(instance.machine_count()));
  }
  const auto& jobs = instance.jobs();
  const auto& bids = instance.bids();
  const std::size_t n = jobs.size();
  if (n > 24) throw ResourceError("two_machine_opt enumerates 2^n splits; n = " + std::to_string(n) + " is too large");

  std::uint64_t best_mask = 0;
  Rational best_span, best_total, best_first;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    Rational first(0);  // bit j clear: job j on machine 0
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask >> j & 1U)) first += jobs[j];
    }
    Rational second = instance.total_length() - first;
    Rational span = max(first * bids[0], second * bids[1]);
    Rational total = first * bids[0] + second * bids[1];
    bool better = mask == 0 || span < best_span || (span == best_span && total < best_total) ||
                  (span == best_span && total == best_total && first > best_first);
    if (better) {
      best_mask = mask;
      best_span = std::move(span);
      best_total = std::move(total);
      best_first = std::move(first);
    }
  }
  std::vector<std::size_t> owner(n);
  for (std::size_t j = 0; j < n; ++j) owner[j] = best_mask >> j & 1U;
  return Assignment(jobs, 2, std::move(owner));
}

namespace rules {

AllocationRule lpt_star(TieBreakPolicy policy) {
  return AllocationRule("lpt-star", [policy](const Instance& inst) -> Allocation { return qmech::lpt_star(inst, policy); });
}

AllocationRule at_expected() {
  return AllocationRule(
      "at-expected", [](const Instance& inst) -> Allocation { return at_fractional(inst); }, true);
}

AllocationRule at_sample(std::uint64_t seed) {
  struct Engine {
    std::mutex mutex;
    std::mt19937_64 rng;
  };
  auto engine = std::make_shared<Engine>();
  engine->rng.seed(seed);
  return AllocationRule(
      "at-sample",
      [engine](const Instance& inst) -> Allocation {
        std::lock_guard lock(engine->mutex);
        return qmech::at_sample(inst, engine->rng);
      },
      true);
}

AllocationRule vcg() {
  return AllocationRule("vcg", [](const Instance& inst) -> Allocation { return vcg_allocate(inst); });
}

AllocationRule opt(std::uint64_t node_budget) {
  return AllocationRule("opt", [node_budget](const Instance& inst) -> Allocation {
    return opt_makespan(inst, node_budget).assignment;
  });
}

AllocationRule two_machine_opt() {
  return AllocationRule("two-opt", [](const Instance& inst) -> Allocation { return qmech::two_machine_opt(inst); });
}

AllocationRule by_name(const std::string& name, std::uint64_t seed, std::uint64_t node_budget) {
  if (name == "lpt-star") return lpt_star();
  if (name == "at-expected") return at_expected();
  if (name == "at-sample") return at_sample(seed);
  if (name == "vcg") return vcg();
  if (name == "opt") return opt(node_budget);
  if (name == "two-opt") return two_machine_opt();
  throw DomainError("unknown allocation rule '" + name + "'");
}

}  // namespace rules

}  // namespace qmech
