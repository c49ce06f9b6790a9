#pragma once

// Brute-force reference implementations used only by the tests. They share
// the Rational type with the library and nothing else.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "qmech/rational.hpp"

namespace oracle {

using qmech::Rational;
using Vec = std::vector<Rational>;

inline Rational q(const char* text) { return Rational::parse(text); }

inline Rational makespan(const Vec& loads, const Vec& speeds) {
  Rational best(0);
  for (std::size_t i = 0; i < loads.size(); ++i) best = std::max(best, loads[i] * speeds[i]);
  return best;
}

// Calls visit(loads) for every one of the m^n job placements.
template <typename Visit>
void for_each_placement(const Vec& jobs, std::size_t m, Visit visit) {
  std::vector<std::size_t> digit(jobs.size(), 0);
  while (true) {
    Vec loads(m, Rational(0));
    for (std::size_t j = 0; j < jobs.size(); ++j) loads[digit[j]] += jobs[j];
    visit(loads);
    std::size_t j = 0;
    while (j < jobs.size() && ++digit[j] == m) digit[j++] = 0;
    if (j == jobs.size()) return;
  }
}

inline Rational opt(const Vec& jobs, const Vec& speeds) {
  std::optional<Rational> best;
  for_each_placement(jobs, speeds.size(), [&](const Vec& loads) {
    Rational v = makespan(loads, speeds);
    if (!best || v < *best) best = v;
  });
  return *best;
}

// Minimum makespan, then minimum sum b_i w_i, then the larger first workload.
inline Vec two_opt(const Vec& jobs, const Vec& bids) {
  std::optional<Vec> best;
  Rational best_ms, best_cost;
  for_each_placement(jobs, 2, [&](const Vec& loads) {
    Rational ms = makespan(loads, bids);
    Rational cost = loads[0] * bids[0] + loads[1] * bids[1];
    bool better = !best || ms < best_ms || (ms == best_ms && cost < best_cost) ||
                  (ms == best_ms && cost == best_cost && loads[0] > (*best)[0]);
    if (better) {
      best = loads;
      best_ms = ms;
      best_cost = cost;
    }
  });
  return *best;
}

// Definition by permutations: no relabelling of bundles lowers sum b_i w_i.
inline bool locally_efficient(const Vec& bids, const Vec& loads) {
  std::vector<std::size_t> perm(bids.size());
  std::iota(perm.begin(), perm.end(), 0);
  Rational base(0);
  for (std::size_t i = 0; i < bids.size(); ++i) base += bids[i] * loads[i];
  do {
    Rational v(0);
    for (std::size_t i = 0; i < bids.size(); ++i) v += bids[i] * loads[perm[i]];
    if (v < base) return false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return true;
}

// max_j min_i max{ b_i l_j, (l_1+..+l_j) / (1/b_1+..+1/b_i) }, straight from
// the formula.
inline Rational t_lb(Vec jobs, Vec bids) {
  std::sort(jobs.rbegin(), jobs.rend());
  std::sort(bids.begin(), bids.end());
  Rational result(0);
  Rational prefix(0);
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    prefix += jobs[j];
    std::optional<Rational> inner;
    Rational inv(0);
    for (std::size_t i = 0; i < bids.size(); ++i) {
      inv += bids[i].reciprocal();
      Rational v = std::max(bids[i] * jobs[j], prefix / inv);
      if (!inner || v < *inner) inner = v;
    }
    result = std::max(result, *inner);
  }
  return result;
}

// Clarke pivot from its definition: optimal total running time without i
// minus the others' running time in the all-to-fastest allocation.
inline Vec clarke_pivot(const Vec& jobs, const Vec& bids, const Vec& loads) {
  Vec pay(bids.size());
  for (std::size_t i = 0; i < bids.size(); ++i) {
    Vec rest;
    for (std::size_t k = 0; k < bids.size(); ++k) {
      if (k != i) rest.push_back(bids[k]);
    }
    std::optional<Rational> best;
    for_each_placement(jobs, rest.size(), [&](const Vec& l) {
      Rational c(0);
      for (std::size_t k = 0; k < rest.size(); ++k) c += rest[k] * l[k];
      if (!best || c < *best) best = c;
    });
    Rational others(0);
    for (std::size_t k = 0; k < bids.size(); ++k) {
      if (k != i) others += bids[k] * loads[k];
    }
    pay[i] = *best - others;
  }
  return pay;
}

}  // namespace oracle
