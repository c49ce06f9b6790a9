#pragma once

#include <cstdint>
#include <random>

#include "qmech/model.hpp"

namespace qmech {

struct SampleOptions {
  std::size_t min_machines = 2;
  std::size_t max_machines = 4;
  std::size_t min_jobs = 1;
  std::size_t max_jobs = 6;
  // Job lengths and bids are p/q with 1 <= p <= max_numerator, 1 <= q <= max_denominator.
  std::uint64_t max_numerator = 12;
  std::uint64_t max_denominator = 4;
  // Draw bids just below, at, and just above powers of two.
  bool straddle_powers_of_two = false;
};

// Seeded instance generator. Draws use only the engine's raw output, so a seed
// replays identically on every platform.
class InstanceSampler {
 public:
  explicit InstanceSampler(std::uint64_t seed) : rng_(seed) {}

  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  Rational positive_rational(std::uint64_t max_numerator, std::uint64_t max_denominator);
  Rational straddling_bid();

  Rationals bids(std::size_t m, const SampleOptions& options);
  Instance instance(const SampleOptions& options = {});
  // Nonnegative workloads with b_i > b_k => w_i <= w_k.
  Rationals locally_efficient_workloads(const Rationals& bids, std::uint64_t max_numerator = 12);

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace qmech
