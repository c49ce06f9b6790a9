#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <variant>
#include <vector>

#include "qmech/rational.hpp"

namespace qmech {

using Rationals = std::vector<Rational>;

// Jobs (canonicalized to nonincreasing length) and one bid per machine.
// Immutable after construction.
class Instance {
 public:
  Instance(Rationals jobs, Rationals bids);

  const Rationals& jobs() const { return jobs_; }
  const Rationals& bids() const { return bids_; }
  const Rational& total_length() const { return total_length_; }
  std::size_t job_count() const { return jobs_.size(); }
  std::size_t machine_count() const { return bids_.size(); }

  // Position of sorted job j in the caller's original job list.
  std::size_t original_job_index(std::size_t j) const { return original_index_[j]; }

  // Same jobs, new bid profile.
  Instance with_bids(Rationals bids) const;
  Instance with_bid(std::size_t machine, const Rational& bid) const;

 private:
  Instance() = default;
  static void validate_bids(const Rationals& bids);

  Rationals jobs_;
  Rationals bids_;
  std::vector<std::size_t> original_index_;
  Rational total_length_;
};

// Deterministic job-to-machine map. Job indices refer to the instance's sorted
// job order.
class Assignment {
 public:
  Assignment(std::span<const Rational> jobs, std::size_t machine_count,
             std::vector<std::size_t> job_to_machine);

  const std::vector<std::size_t>& job_to_machine() const { return job_to_machine_; }
  const Rationals& workloads() const { return workloads_; }
  std::size_t machine_count() const { return workloads_.size(); }
  Rational total() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::size_t> job_to_machine_;
  Rationals workloads_;
};

// Per-job machine distributions and the induced expected workloads.
class ExpectedAllocation {
 public:
  using Distribution = std::map<std::size_t, Rational>;

  ExpectedAllocation(std::span<const Rational> jobs, std::size_t machine_count,
                     std::vector<Distribution> job_distributions);

  const Rationals& expected_workloads() const { return expected_workloads_; }
  const std::vector<Distribution>& job_distributions() const { return job_distributions_; }
  std::size_t machine_count() const { return expected_workloads_.size(); }

  friend bool operator==(const ExpectedAllocation&, const ExpectedAllocation&) = default;

 private:
  std::vector<Distribution> job_distributions_;
  Rationals expected_workloads_;
};

using Allocation = std::variant<Assignment, ExpectedAllocation>;

const Rationals& workloads_of(const Allocation& allocation);

struct Outcome {
  Allocation allocation;
  Rationals payments;

  const Rationals& workloads() const { return workloads_of(allocation); }
};

// max_i workloads_i * speeds_i
Rational makespan(std::span<const Rational> workloads, std::span<const Rational> speeds);
Rational makespan(const Assignment& assignment, std::span<const Rational> speeds);

// payment - true_speed * workload
Rational utility(const Rational& payment, const Rational& true_speed, const Rational& workload);

// 2^ceil(log2 b), computed exactly.
Rational rounded_speed(const Rational& bid);

Rationals parse_rationals(std::string_view csv);

}  // namespace qmech
