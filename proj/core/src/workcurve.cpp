#include "qmech/workcurve.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "qmech/errors.hpp"

namespace qmech {

WorkCurve::WorkCurve(Rationals breakpoints, Rationals values, Rational tail, Rational cap, bool approximate)
    : breakpoints_(std::move(breakpoints)),
      values_(std::move(values)),
      tail_(std::move(tail)),
      cap_(std::move(cap)),
      approximate_(approximate) {
  if (breakpoints_.size() != values_.size()) throw DimensionError("one value per breakpoint interval required");
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    if (breakpoints_[k].sign() <= 0 || (k > 0 && breakpoints_[k] <= breakpoints_[k - 1])) {
      throw DomainError("breakpoints must be positive and strictly increasing");
    }
  }
}

Rational WorkCurve::value_at(const Rational& x) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  if (it == breakpoints_.end()) return tail_;
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

Rational WorkCurve::left_limit(const Rational& x) const {
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
  if (it == breakpoints_.end()) return tail_;
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

std::optional<WorkCurve::Rise> WorkCurve::first_rise() const {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const Rational& next = k + 1 < values_.size() ? values_[k + 1] : tail_;
    if (next > values_[k]) {
      Rational left = k == 0 ? breakpoints_[0] / 2 : (breakpoints_[k - 1] + breakpoints_[k]) / 2;
      Rational right = k + 1 < values_.size() ? (breakpoints_[k] + breakpoints_[k + 1]) / 2 : breakpoints_[k] + 1;
      return Rise{left, values_[k], right, next};
    }
  }
  return std::nullopt;
}

namespace {

Rational simplest_open(const Rational& lo, const std::optional<Rational>& hi) {
  Rational::Integer whole = lo.floor();
  Rational next(whole + 1, Rational::Integer(1));
  if (!hi || next < *hi) return next;
  Rational base(whole, Rational::Integer(1));
  Rational frac_lo = lo - base;
  Rational frac_hi = *hi - base;
  std::optional<Rational> upper;
  if (!frac_lo.is_zero()) upper = frac_lo.reciprocal();
  return base + simplest_open(frac_hi.reciprocal(), upper).reciprocal();
}

unsigned bit_length(const Rational::Integer& v) {
  return v == 0 ? 0U : static_cast<unsigned>(boost::multiprecision::msb(v)) + 1U;
}

// Number of consecutive cuts that must leave one end of a bracket in place
// before that end is accepted as the exact breakpoint. An irrational step
// keeps moving both ends (unless its continued fraction has a partial
// quotient this large).
constexpr std::size_t kConfirmCuts = 16;

class StepResolver {
 public:
  StepResolver(const BidResponse& response, const DiscoveryOptions& options)
      : response_(response), options_(options) {}

  Rational eval(const Rational& x) const { return response_(x); }

  // f(a) = fa != fb = f(b): at least one step lies in (a, b].
  void bracket(Rational a, Rational fa, Rational b, Rational fb, std::size_t depth) {
    std::size_t lo_still = 0;
    std::size_t hi_still = 0;
    while (true) {
      if (hi_still >= kConfirmCuts) return step(b, fa, fb);
      if (lo_still >= kConfirmCuts) return step(a, fa, fb);
      Rational c = simplest_between(a, b);
      if (depth >= options_.max_depth || bit_length(c.denominator()) > options_.max_denominator_bits) {
        approximate_ = true;
        return step((a + b) / 2, fa, fb);
      }
      ++depth;
      Rational fc = eval(c);
      if (fc == fa) {
        a = std::move(c);
        ++hi_still;
        lo_still = 0;
      } else if (fc == fb) {
        b = std::move(c);
        ++lo_still;
        hi_still = 0;
      } else {
        bracket(a, fa, c, fc, depth);
        bracket(std::move(c), std::move(fc), std::move(b), std::move(fb), depth);
        return;
      }
    }
  }

  WorkCurve finish(const Rational& first, const Rational& last, const Rational& cap) && {
    Rationals breakpoints;
    Rationals values;
    Rational current = first;
    for (auto& [x, left, right] : steps_) {
      breakpoints.push_back(x);
      values.push_back(std::move(left));
      current = std::move(right);
    }
    if (current != last) throw InternalError("step discovery lost track of the curve");
    return WorkCurve(std::move(breakpoints), std::move(values), last, cap, approximate_);
  }

 private:
  struct Step {
    Rational x;
    Rational left;
    Rational right;
  };

  void step(const Rational& x, const Rational& left, const Rational& right) {
    if (steps_.size() >= options_.max_breakpoints) {
      throw ResolutionError("more than " + std::to_string(options_.max_breakpoints) +
                            " steps; response does not look like a step function");
    }
    steps_.push_back({x, left, right});
  }

  const BidResponse& response_;
  const DiscoveryOptions& options_;
  std::vector<Step> steps_;
  bool approximate_ = false;
};

}  // namespace

Rational simplest_between(const Rational& lo, const Rational& hi) {
  if (lo.sign() < 0 || !(lo < hi)) throw DomainError("simplest_between needs 0 <= lo < hi");
  return simplest_open(lo, hi);
}

WorkCurve discover_steps(const BidResponse& response, Rationals seeds, const Rational& cap,
                         const DiscoveryOptions& options) {
  if (cap.sign() <= 0) throw DomainError("cap must be positive");
  std::set<Rational> anchors;
  for (auto& s : seeds) {
    if (s.sign() > 0 && s < cap) anchors.insert(std::move(s));
  }
  anchors.insert(cap);

  // Seeds plus a few interior points of every gap between them.
  static const Rational kFractions[] = {Rational(1, 16), Rational(1, 4), Rational(1, 2), Rational(3, 4),
                                        Rational(15, 16)};
  std::set<Rational> points(anchors);
  Rational lo(0);
  for (const auto& hi : anchors) {
    for (const auto& f : kFractions) points.insert(lo + (hi - lo) * f);
    lo = hi;
  }

  StepResolver resolver(response, options);
  std::optional<Rational> prev_x;
  Rational prev_v;
  Rational first;
  for (const auto& x : points) {
    Rational v = resolver.eval(x);
    if (!prev_x) {
      first = v;
    } else if (v != prev_v) {
      resolver.bracket(*prev_x, prev_v, x, v, 0);
    }
    prev_x = x;
    prev_v = std::move(v);
  }
  return std::move(resolver).finish(first, prev_v, cap);
}

Rationals default_seeds(std::span<const Rational> fixed_bids, std::span<const Rational> jobs, const Rational& cap) {
  constexpr std::size_t kMaxSubsetJobs = 16;
  constexpr std::size_t kMaxDistinctSums = 64;

  std::set<Rational> seeds;
  for (const auto& b : fixed_bids) seeds.insert(b);

  if (jobs.size() <= kMaxSubsetJobs) {
    std::set<Rational> sums;
    const std::size_t limit = std::size_t{1} << jobs.size();
    for (std::size_t mask = 1; mask < limit && sums.size() <= kMaxDistinctSums; ++mask) {
      Rational s(0);
      for (std::size_t j = 0; j < jobs.size(); ++j) {
        if (mask >> j & 1U) s += jobs[j];
      }
      sums.insert(std::move(s));
    }
    if (sums.size() <= kMaxDistinctSums) {
      for (const auto& num : sums) {
        for (const auto& den : sums) {
          Rational ratio = num / den;
          for (const auto& b : fixed_bids) {
            Rational seed = b * ratio;
            if (seed < cap) seeds.insert(std::move(seed));
          }
        }
      }
    }
  }

  Rational floor_point = seeds.empty() ? cap : *seeds.begin();
  long low = rounded_speed(floor_point).ceil_log2() - 3;
  long high = cap.ceil_log2();
  for (long e = low; e <= high; ++e) seeds.insert(Rational::pow2(e));

  return Rationals(seeds.begin(), seeds.end());
}

WorkCurve build_workcurve(const AllocationRule& rule, std::span<const Rational> others_bids,
                          std::span<const Rational> jobs, const Rational& cap, std::size_t position,
                          const DiscoveryOptions& options) {
  if (position > others_bids.size()) throw DimensionError("machine position beyond the bid vector");
  const Instance base(Rationals(jobs.begin(), jobs.end()), [&] {
    Rationals bids(others_bids.begin(), others_bids.end());
    bids.insert(bids.begin() + static_cast<std::ptrdiff_t>(position), cap);
    return bids;
  }());
  BidResponse response = [&](const Rational& x) { return rule.workloads(base.with_bid(position, x))[position]; };
  return discover_steps(response, default_seeds(others_bids, base.jobs(), cap), cap, options);
}

Rational integrate(const WorkCurve& curve, const Rational& lo, const std::optional<Rational>& hi) {
  if (lo.sign() < 0 || (hi && *hi < lo)) throw DomainError("integrate needs 0 <= lo <= hi");
  if (!hi && !curve.tail().is_zero()) {
    throw DivergenceError("integral to infinity diverges: tail value " + curve.tail().str());
  }
  if (hi && *hi > curve.cap() && curve.truncated()) {
    throw PreconditionError("integration bound " + hi->str() + " lies beyond the resolved cap " + curve.cap().str());
  }

  Rational total(0);
  Rational start(0);
  auto add = [&](const Rational& a, const std::optional<Rational>& b, const Rational& value) {
    Rational from = max(a, lo);
    if (!b) {
      if (!value.is_zero()) total += (*hi - from) * value;  // tail with finite hi
      return;
    }
    Rational to = hi ? min(*b, *hi) : *b;
    if (to > from) total += (to - from) * value;
  };
  for (std::size_t k = 0; k < curve.breakpoints().size(); ++k) {
    add(start, curve.breakpoints()[k], curve.values()[k]);
    start = curve.breakpoints()[k];
  }
  if (hi && *hi > max(start, lo)) add(start, std::nullopt, curve.tail());
  return total;
}

}  // namespace qmech
