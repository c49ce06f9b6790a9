#include "qmech/random_instances.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "qmech/errors.hpp"

namespace qmech {

std::uint64_t InstanceSampler::below(std::uint64_t n) {
  if (n == 0) throw DomainError("below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng_();
  } while (x >= limit);
  return x % n;
}

Rational InstanceSampler::positive_rational(std::uint64_t max_numerator, std::uint64_t max_denominator) {
  const auto p = static_cast<std::int64_t>(between(1, max_numerator));
  const auto q = static_cast<std::int64_t>(between(1, max_denominator));
  return Rational(p, q);
}

Rational InstanceSampler::straddling_bid() {
  const long e = static_cast<long>(between(0, 7)) - 2;
  const Rational power = Rational::pow2(e);
  const auto k = static_cast<std::int64_t>(between(2, 16));
  switch (below(3)) {
    case 0:
      return power * Rational(k - 1, k);
    case 1:
      return power;
    default:
      return power * Rational(k + 1, k);
  }
}

Rationals InstanceSampler::bids(std::size_t m, const SampleOptions& options) {
  Rationals out(m);
  for (auto& b : out) {
    b = options.straddle_powers_of_two && below(2) == 0 ? straddling_bid()
                                                        : positive_rational(options.max_numerator, options.max_denominator);
  }
  return out;
}

Instance InstanceSampler::instance(const SampleOptions& options) {
  const auto m = static_cast<std::size_t>(between(options.min_machines, options.max_machines));
  const auto n = static_cast<std::size_t>(between(options.min_jobs, options.max_jobs));
  Rationals jobs(n);
  for (auto& l : jobs) l = positive_rational(options.max_numerator, options.max_denominator);
  return Instance(std::move(jobs), bids(m, options));
}

Rationals InstanceSampler::locally_efficient_workloads(const Rationals& bids, std::uint64_t max_numerator) {
  Rationals loads(bids.size());
  for (auto& w : loads) w = below(4) == 0 ? Rational(0) : positive_rational(max_numerator, 4);
  std::sort(loads.begin(), loads.end());
  std::vector<std::size_t> order(bids.size());
  std::iota(order.begin(), order.end(), 0);
  // Fastest first; shuffle equal bids so ties carry arbitrary loads.
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[below(i)]);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return bids[x] < bids[y]; });
  Rationals out(bids.size());
  for (std::size_t r = 0; r < order.size(); ++r) out[order[r]] = loads[loads.size() - 1 - r];
  return out;
}

}  // namespace qmech
