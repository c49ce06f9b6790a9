#include "qmech/model.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "qmech/errors.hpp"

namespace qmech {

Instance::Instance(Rationals jobs, Rationals bids) {
  if (jobs.empty()) throw DomainError("instance needs at least one job");
  for (const auto& l : jobs) {
    if (l.sign() <= 0) throw DomainError("job length must be positive, got " + l.str());
  }
  validate_bids(bids);

  original_index_.resize(jobs.size());
  std::iota(original_index_.begin(), original_index_.end(), std::size_t{0});
  std::stable_sort(original_index_.begin(), original_index_.end(),
                   [&](std::size_t a, std::size_t b) { return jobs[a] > jobs[b]; });
  jobs_.reserve(jobs.size());
  for (std::size_t idx : original_index_) jobs_.push_back(jobs[idx]);
  total_length_ = std::accumulate(jobs_.begin(), jobs_.end(), Rational(0));
  bids_ = std::move(bids);
}

void Instance::validate_bids(const Rationals& bids) {
  if (bids.empty()) throw DomainError("instance needs at least one machine");
  for (const auto& b : bids) {
    if (b.sign() <= 0) throw DomainError("bid must be positive, got " + b.str());
  }
}

Instance Instance::with_bids(Rationals bids) const {
  validate_bids(bids);
  Instance copy;
  copy.jobs_ = jobs_;
  copy.original_index_ = original_index_;
  copy.total_length_ = total_length_;
  copy.bids_ = std::move(bids);
  return copy;
}

Instance Instance::with_bid(std::size_t machine, const Rational& bid) const {
  if (machine >= bids_.size()) throw DimensionError("machine index out of range");
  Rationals b = bids_;
  b[machine] = bid;
  return with_bids(std::move(b));
}

Assignment::Assignment(std::span<const Rational> jobs, std::size_t machine_count,
                       std::vector<std::size_t> job_to_machine)
    : job_to_machine_(std::move(job_to_machine)), workloads_(machine_count, Rational(0)) {
  if (job_to_machine_.size() != jobs.size()) {
    throw DimensionError("assignment covers " + std::to_string(job_to_machine_.size()) + " of " +
                         std::to_string(jobs.size()) + " jobs");
  }
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (job_to_machine_[j] >= machine_count) throw DimensionError("job assigned to unknown machine");
    workloads_[job_to_machine_[j]] += jobs[j];
  }
}

Rational Assignment::total() const {
  return std::accumulate(workloads_.begin(), workloads_.end(), Rational(0));
}

ExpectedAllocation::ExpectedAllocation(std::span<const Rational> jobs, std::size_t machine_count,
                                       std::vector<Distribution> job_distributions)
    : job_distributions_(std::move(job_distributions)), expected_workloads_(machine_count, Rational(0)) {
  if (job_distributions_.size() != jobs.size()) throw DimensionError("one distribution per job required");
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    Rational mass(0);
    for (const auto& [machine, p] : job_distributions_[j]) {
      if (machine >= machine_count) throw DimensionError("distribution names unknown machine");
      if (p.sign() < 0) throw DomainError("negative probability");
      mass += p;
      expected_workloads_[machine] += p * jobs[j];
    }
    if (mass != Rational(1)) throw InconsistencyError("job distribution sums to " + mass.str());
  }
}

const Rationals& workloads_of(const Allocation& allocation) {
  if (const auto* a = std::get_if<Assignment>(&allocation)) return a->workloads();
  return std::get<ExpectedAllocation>(allocation).expected_workloads();
}

Rational makespan(std::span<const Rational> workloads, std::span<const Rational> speeds) {
  if (workloads.size() != speeds.size()) {
    throw DimensionError("makespan: " + std::to_string(workloads.size()) + " workloads vs " +
                         std::to_string(speeds.size()) + " speeds");
  }
  Rational best(0);
  for (std::size_t i = 0; i < workloads.size(); ++i) best = max(best, workloads[i] * speeds[i]);
  return best;
}

Rational makespan(const Assignment& assignment, std::span<const Rational> speeds) {
  return makespan(assignment.workloads(), speeds);
}

Rational utility(const Rational& payment, const Rational& true_speed, const Rational& workload) {
  return payment - true_speed * workload;
}

Rational rounded_speed(const Rational& bid) {
  if (bid.sign() <= 0) throw DomainError("rounded_speed needs a positive bid, got " + bid.str());
  return Rational::pow2(bid.ceil_log2());
}

Rationals parse_rationals(std::string_view csv) {
  Rationals out;
  if (csv.empty()) return out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t comma = csv.find(',', start);
    if (comma == std::string_view::npos) comma = csv.size();
    std::string_view item = csv.substr(start, comma - start);
    if (item.empty()) throw ParseError("empty entry in list '" + std::string(csv) + "'");
    out.push_back(Rational::parse(item));
    start = comma + 1;
  }
  return out;
}

}  // namespace qmech
