#include "qmech/payments.hpp"

#include <algorithm>
#include <numeric>

namespace qmech {

Outcome Mechanism::operator()(const Instance& instance) const {
  Allocation allocation = rule_(instance);
  Rationals payments = payments_(instance, allocation);
  if (payments.size() != instance.machine_count()) {
    throw InternalError("mechanism " + name_ + " returned the wrong number of payments");
  }
  return Outcome{std::move(allocation), std::move(payments)};
}

Rationals ef_chain_payments(std::span<const Rational> bids, std::span<const Rational> workloads) {
  if (bids.size() != workloads.size()) throw DimensionError("bids and workloads differ in length");
  const std::size_t m = bids.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      if (bids[i] > bids[k] && workloads[i] > workloads[k]) {
        throw PreconditionError("workloads are not locally efficient: machine " + std::to_string(i) + " bids " +
                                bids[i].str() + " > " + bids[k].str() + " but carries " + workloads[i].str() +
                                " > " + workloads[k].str());
      }
    }
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  // Equal bids go in nondecreasing workload order; the chain needs workloads
  // monotone along the sorted order.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (bids[x] != bids[y]) return bids[x] > bids[y];
    return workloads[x] < workloads[y];
  });

  Rationals payments(m);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t i = order[r];
    if (r == 0) {
      payments[i] = bids[i] * workloads[i];
    } else {
      const std::size_t prev = order[r - 1];
      payments[i] = payments[prev] + bids[i] * (workloads[i] - workloads[prev]);
    }
  }
  return payments;
}

Rational truthful_payment(const Rational& h_value, const Rational& bid, const Rational& workload,
                          const WorkCurve& curve) {
  if (bid.sign() <= 0) throw DomainError("bid must be positive");
  if (curve.value_at(bid) != workload && curve.left_limit(bid) != workload) {
    throw InconsistencyError("workload " + workload.str() + " does not match the curve value " +
                             curve.value_at(bid).str() + " at bid " + bid.str());
  }
  return h_value + bid * workload - integrate(curve, Rational(0), bid);
}

Rationals vcg_payments(const Instance& instance, const Assignment& assignment) {
  if (!(assignment == vcg_allocate(instance))) {
    throw PreconditionError("Clarke pivot payments are defined for the all-to-fastest allocation only");
  }
  const auto& bids = instance.bids();
  const std::size_t m = bids.size();
  const Rational& total = instance.total_length();
  if (m == 1) return {bids[0] * total};

  Rationals payments(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::optional<Rational> fastest_other;
    Rational others_cost(0);
    for (std::size_t k = 0; k < m; ++k) {
      if (k == i) continue;
      if (!fastest_other || bids[k] < *fastest_other) fastest_other = bids[k];
      others_cost += bids[k] * assignment.workloads()[k];
    }
    payments[i] = total * *fastest_other - others_cost;
  }
  return payments;
}

NotTruthfulEvidence::NotTruthfulEvidence(Rational probe_a, Rational h_a, Rational probe_b, Rational h_b)
    : Error("h differs between probes: h(" + probe_a.str() + ") = " + h_a.str() + " but h(" + probe_b.str() +
            ") = " + h_b.str()),
      probe_a_(std::move(probe_a)),
      h_a_(std::move(h_a)),
      probe_b_(std::move(probe_b)),
      h_b_(std::move(h_b)) {}

Rational extract_h(const Mechanism& mechanism, std::span<const Rational> others_bids, std::span<const Rational> jobs,
                   const Rational& probe, std::size_t position) {
  if (probe.sign() <= 0) throw DomainError("probe bid must be positive");
  if (mechanism.rule().randomized()) throw DomainError("extract_h needs a deterministic allocation rule");
  if (position > others_bids.size()) throw DimensionError("machine position beyond the bid vector");

  Rationals bids(others_bids.begin(), others_bids.end());
  bids.insert(bids.begin() + static_cast<std::ptrdiff_t>(position), probe);
  const Instance instance(Rationals(jobs.begin(), jobs.end()), std::move(bids));
  const Outcome outcome = mechanism(instance);

  const WorkCurve curve = build_workcurve(mechanism.rule(), others_bids, instance.jobs(), probe, position);
  return outcome.payments[position] - probe * outcome.workloads()[position] + integrate(curve, Rational(0), probe);
}

Rational extract_h_checked(const Mechanism& mechanism, std::span<const Rational> others_bids,
                           std::span<const Rational> jobs, const Rational& probe_a, const Rational& probe_b,
                           std::size_t position) {
  Rational h_a = extract_h(mechanism, others_bids, jobs, probe_a, position);
  Rational h_b = extract_h(mechanism, others_bids, jobs, probe_b, position);
  if (h_a != h_b) throw NotTruthfulEvidence(probe_a, std::move(h_a), probe_b, std::move(h_b));
  return h_a;
}

HFunction::HFunction(Eval eval, bool symmetric)
    : eval_(std::move(eval)), symmetric_(symmetric), state_(std::make_shared<State>()) {}

HFunction HFunction::from_mechanism(Mechanism mechanism, Rationals jobs) {
  return HFunction([mechanism = std::move(mechanism), jobs = std::move(jobs)](const Rationals& others) {
    if (others.empty()) throw DimensionError("h needs at least one other bid");
    const Rational low = *std::min_element(others.begin(), others.end());
    return extract_h_checked(mechanism, others, jobs, low / 2, low / 4);
  });
}

Rational HFunction::operator()(Rationals others) const {
  if (symmetric_) std::sort(others.begin(), others.end());
  {
    std::lock_guard lock(state_->mutex);
    auto it = state_->memo.find(others);
    if (it != state_->memo.end()) return it->second;
  }
  Rational value = eval_(others);
  std::lock_guard lock(state_->mutex);
  state_->memo.emplace(std::move(others), value);
  return value;
}

std::size_t HFunction::cached() const {
  std::lock_guard lock(state_->mutex);
  return state_->memo.size();
}

namespace mechanisms {

namespace {

// Past this bid the machine's workload is zero for every deterministic rule
// here: a job of length l_min alone costs more than the whole load elsewhere.
Rational zero_workload_bound(const Instance& instance, std::size_t position) {
  Rational highest(0);
  for (std::size_t k = 0; k < instance.machine_count(); ++k) {
    if (k != position) highest = max(highest, instance.bids()[k]);
  }
  return 4 * rounded_speed(highest) * instance.total_length() / instance.jobs().back();
}

}  // namespace

Mechanism vcg() {
  return Mechanism("vcg", rules::vcg(), [](const Instance& instance, const Allocation& allocation) {
    return vcg_payments(instance, std::get<Assignment>(allocation));
  });
}

Mechanism ef_chain(AllocationRule rule) {
  std::string name = rule.name();
  return Mechanism(std::move(name), std::move(rule), [](const Instance& instance, const Allocation& allocation) {
    return ef_chain_payments(instance.bids(), workloads_of(allocation));
  });
}

Mechanism pay_cost(AllocationRule rule) {
  std::string name = rule.name() + "-cost";
  return Mechanism(std::move(name), std::move(rule), [](const Instance& instance, const Allocation& allocation) {
    const auto& w = workloads_of(allocation);
    Rationals payments(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) payments[i] = instance.bids()[i] * w[i];
    return payments;
  });
}

Mechanism myerson(AllocationRule rule) {
  if (rule.randomized()) throw DomainError("myerson payments need a deterministic rule");
  std::string name = rule.name() + "-myerson";
  AllocationRule inner = rule;
  return Mechanism(std::move(name), std::move(rule),
                   [inner = std::move(inner)](const Instance& instance, const Allocation& allocation) {
                     const auto& w = workloads_of(allocation);
                     const std::size_t m = instance.machine_count();
                     Rationals payments(m);
                     for (std::size_t i = 0; i < m; ++i) {
                       if (m == 1) {
                         payments[i] = instance.bids()[i] * w[i];
                         continue;
                       }
                       Rationals others = instance.bids();
                       others.erase(others.begin() + static_cast<std::ptrdiff_t>(i));
                       const Rational cap = max(zero_workload_bound(instance, i), 2 * instance.bids()[i]);
                       const WorkCurve curve = build_workcurve(inner, others, instance.jobs(), cap, i);
                       if (curve.truncated()) {
                         throw DivergenceError("workload of machine " + std::to_string(i) +
                                               " never reaches zero; myerson payment is unbounded");
                       }
                       payments[i] = instance.bids()[i] * w[i] + integrate(curve, instance.bids()[i], std::nullopt);
                     }
                     return payments;
                   });
}

Mechanism by_name(const std::string& name) {
  if (name == "vcg") return vcg();
  if (name == "lpt-star") return ef_chain(rules::lpt_star());
  if (name == "two-opt") return ef_chain(rules::two_machine_opt());
  if (name == "at-expected") return ef_chain(rules::at_expected());
  if (name == "lpt-cost") return pay_cost(rules::lpt_star());
  if (name == "lpt-myerson") return myerson(rules::lpt_star());
  if (name == "two-opt-myerson") return myerson(rules::two_machine_opt());
  throw DomainError("unknown mechanism '" + name +
                    "' (known: vcg, lpt-star, two-opt, at-expected, lpt-cost, lpt-myerson, two-opt-myerson)");
}

}  // namespace mechanisms

}  // namespace qmech
