#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>

#include "qmech/allocations.hpp"
#include "qmech/errors.hpp"
#include "qmech/model.hpp"
#include "qmech/workcurve.hpp"

namespace qmech {

// An allocation rule paired with a payment rule.
class Mechanism {
 public:
  using PaymentFn = std::function<Rationals(const Instance&, const Allocation&)>;

  Mechanism(std::string name, AllocationRule rule, PaymentFn payments)
      : name_(std::move(name)), rule_(std::move(rule)), payments_(std::move(payments)) {}

  const std::string& name() const { return name_; }
  const AllocationRule& rule() const { return rule_; }

  Outcome operator()(const Instance& instance) const;

 private:
  std::string name_;
  AllocationRule rule_;
  PaymentFn payments_;
};

// Envy-free payments for a locally efficient allocation: with bids sorted
// b_1 >= ... >= b_m, p_1 = b_1 w_1 and p_i = p_{i-1} + b_i (w_i - w_{i-1}).
// Equal bids are chained in nondecreasing workload order. Throws PreconditionError if the workloads
// are not locally efficient.
Rationals ef_chain_payments(std::span<const Rational> bids, std::span<const Rational> workloads);

// h + bid * workload - integral_0^bid curve. `workload` must match the curve
// at `bid` (either one-sided limit at a breakpoint).
Rational truthful_payment(const Rational& h_value, const Rational& bid, const Rational& workload,
                          const WorkCurve& curve);

// Clarke pivot for the all-to-fastest allocation: the winner receives the
// second-lowest bid times L, everybody else nothing. A lone machine is paid
// its cost b * L.
Rationals vcg_payments(const Instance& instance, const Assignment& assignment);

// Two probes of the h term disagree: the payments are not of the truthful form.
class NotTruthfulEvidence : public Error {
 public:
  NotTruthfulEvidence(Rational probe_a, Rational h_a, Rational probe_b, Rational h_b);

  const Rational& probe_a() const { return probe_a_; }
  const Rational& h_a() const { return h_a_; }
  const Rational& probe_b() const { return probe_b_; }
  const Rational& h_b() const { return h_b_; }

 private:
  Rational probe_a_, h_a_, probe_b_, h_b_;
};

// h_i(b_-i) = p_i(b) - b_i w_i(b) + integral_0^{b_i} w_i(u, b_-i) du evaluated
// with machine `position` bidding `probe`.
Rational extract_h(const Mechanism& mechanism, std::span<const Rational> others_bids, std::span<const Rational> jobs,
                   const Rational& probe, std::size_t position = 0);

// Evaluates extract_h at two probes; throws NotTruthfulEvidence if they differ.
Rational extract_h_checked(const Mechanism& mechanism, std::span<const Rational> others_bids,
                           std::span<const Rational> jobs, const Rational& probe_a, const Rational& probe_b,
                           std::size_t position = 0);

// Extensional, memoized h function. Symmetric functions key on the sorted
// argument. Safe to call concurrently.
class HFunction {
 public:
  using Eval = std::function<Rational(const Rationals&)>;

  explicit HFunction(Eval eval, bool symmetric = true);

  // h of an anonymous mechanism, probed at min(others)/2 and min(others)/4.
  static HFunction from_mechanism(Mechanism mechanism, Rationals jobs);

  Rational operator()(Rationals others) const;
  std::size_t cached() const;

 private:
  struct State {
    std::mutex mutex;
    std::map<Rationals, Rational> memo;
  };
  Eval eval_;
  bool symmetric_;
  std::shared_ptr<State> state_;
};

namespace mechanisms {

// VCG allocation with Clarke pivot payments.
Mechanism vcg();
// `rule` with the envy-free chain payments.
Mechanism ef_chain(AllocationRule rule);
// Pays exactly the reported cost b_i w_i.
Mechanism pay_cost(AllocationRule rule);
// Truthful payments with the smallest IR-compatible h:
// p_i = b_i w_i + integral_{b_i}^inf w_i(u, b_-i) du. Deterministic rules only.
Mechanism myerson(AllocationRule rule);

// vcg, lpt-star, two-opt, at-expected (each with ef-chain payments unless
// stated), lpt-cost, lpt-myerson, two-opt-myerson.
Mechanism by_name(const std::string& name);

}  // namespace mechanisms

}  // namespace qmech
