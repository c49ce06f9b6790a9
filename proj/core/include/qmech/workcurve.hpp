#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

#include "qmech/allocations.hpp"
#include "qmech/model.hpp"

namespace qmech {

// Right-continuous step function of one machine's own bid.
//
// values()[k] holds on the open interval (breakpoints()[k-1], breakpoints()[k])
// with an implicit breakpoint 0 in front; tail() holds after the last
// breakpoint. At a breakpoint the value from the right is reported.
class WorkCurve {
 public:
  WorkCurve(Rationals breakpoints, Rationals values, Rational tail, Rational cap, bool approximate = false);

  const Rationals& breakpoints() const { return breakpoints_; }
  const Rationals& values() const { return values_; }
  const Rational& tail() const { return tail_; }
  // Largest argument the curve was resolved for.
  const Rational& cap() const { return cap_; }
  // The value at cap is nonzero, so the curve past cap is an extrapolation.
  bool truncated() const { return !tail_.is_zero(); }
  // A breakpoint could not be pinned to an exact rational within the depth
  // budget. Certificates refuse approximate curves.
  bool approximate() const { return approximate_; }

  Rational value_at(const Rational& x) const;
  Rational left_limit(const Rational& x) const;

  struct Rise {
    Rational lower_bid;
    Rational lower_value;
    Rational higher_bid;
    Rational higher_value;
  };
  // First place where the curve increases, if any.
  std::optional<Rise> first_rise() const;
  bool nonincreasing() const { return !first_rise().has_value(); }

  friend bool operator==(const WorkCurve&, const WorkCurve&) = default;

 private:
  Rationals breakpoints_;
  Rationals values_;
  Rational tail_;
  Rational cap_;
  bool approximate_;
};

struct DiscoveryOptions {
  std::size_t max_depth = 96;
  // Split points with larger denominators mark the curve approximate.
  unsigned max_denominator_bits = 64;
  std::size_t max_breakpoints = 4096;
};

using BidResponse = std::function<Rational(const Rational&)>;

// Resolves `response` on (0, cap] as an exact step function. The seeds and a
// few points inside each gap between them are sampled; neighbouring samples
// that disagree are narrowed by cutting at the simplest rational between them
// until one end stops moving. Steps that cancel out between two samples are
// not seen.
WorkCurve discover_steps(const BidResponse& response, Rationals seeds, const Rational& cap,
                         const DiscoveryOptions& options = {});

// Candidate breakpoints for the rules in this library: the fixed bids, fixed
// bids times ratios of job subset sums, and powers of two up to cap.
Rationals default_seeds(std::span<const Rational> fixed_bids, std::span<const Rational> jobs, const Rational& cap);

// Workload of the machine at `position` as a function of its own bid, all
// other bids fixed to `others_bids` (in order, around `position`).
WorkCurve build_workcurve(const AllocationRule& rule, std::span<const Rational> others_bids,
                          std::span<const Rational> jobs, const Rational& cap, std::size_t position = 0,
                          const DiscoveryOptions& options = {});

// Exact integral over [lo, hi]; hi == nullopt means infinity.
Rational integrate(const WorkCurve& curve, const Rational& lo, const std::optional<Rational>& hi);

// Simplest rational strictly inside (lo, hi), 0 <= lo < hi.
Rational simplest_between(const Rational& lo, const Rational& hi);

}  // namespace qmech
