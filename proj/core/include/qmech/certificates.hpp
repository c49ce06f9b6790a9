#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qmech/expected_curve.hpp"
#include "qmech/payments.hpp"
#include "qmech/polytope.hpp"
#include "qmech/properties.hpp"

namespace qmech {

struct CheckedInequality {
  std::string label;
  Rational lhs;
  Relation relation = Relation::kGe;
  Rational rhs;

  bool holds() const { return qmech::holds(lhs, relation, rhs); }
};

struct CertificateReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::pair<std::string, Rational>> constants;
  // Exact values with logarithmic terms.
  std::vector<std::pair<std::string, LogLinear>> symbolic;
  std::vector<CheckedInequality> inequalities;
  std::vector<std::string> notes;
  bool verified = false;

  const Rational& constant(const std::string& key) const;
  // Every inequality holds exactly when the report claims to be verified.
  bool recheck() const;
};

std::string render_text(const CertificateReport& report);

// LPT* on jobs (2,1) against another bid a: the workcurve is 3, 2, 1 on
// (0, a/4), (a/4, a), (a, 2a) and 0 after, so the IR lower bound on h(a) is
// 13a/4, which outgrows the envy upper bound h(1) + 3a once a > 4 h(1).
// Each a must be a power of two, at least 8.
CertificateReport theorem5_certificate(std::span<const Rational> a_values);

// Randomized binning on jobs (2,1) against another bid 1: the expected
// workload integrates to 7/2 + ln(3/2), which exceeds the envy slope 3.
// `tolerance` bounds the width of the numeric enclosure.
CertificateReport theorem7_certificate(const Rational& tolerance);

struct Theorem1Params {
  std::size_t m = 0;
  Rational c;
  Rational epsilon;
  Rational total_length;  // 2m - 1
  Rational gamma;         // c L + epsilon
  Rational f;             // gamma^(m-1) L + h(gamma^(m-2), ..., gamma, 1)
  Rational alpha;         // L c f / (m - 1)
};

// Runs `mechanism` on jobs (1,...,1,m) with speeds (m alpha, ..., m alpha,
// alpha), with alpha derived from the mechanism's own h. Requires
// 1 <= c < 2 - 1/m and 0 < epsilon < 1.
CertificateReport theorem1_harness(const Mechanism& mechanism, std::size_t m, const Rational& c,
                                   const Rational& epsilon = Rational(1, 2), Theorem1Params* params = nullptr);

// g(k) = (4k^2/(k+1)^2 - 1) * integral_{1/k}^{(k+1)/(2k)} w(1, y) dy for a
// scalable two-machine rule, with the integral inequality checked at each
// sample a.
std::pair<Rational, CertificateReport> lemma6_g(const AllocationRule& rule, const Rational& k,
                                                std::span<const Rational> jobs,
                                                std::span<const Rational> samples = {});

// Two-machine min-makespan / min-total-time rule on random instances: local
// efficiency, monotonicity, scalability and anonymity, and a profile where it
// differs from VCG.
CertificateReport prop12_verify(std::size_t samples, std::uint64_t seed = 1);

CertificateReport polytope_report(const AllocationRule& rule, std::span<const Rational> grid,
                                  std::span<const Rational> jobs, std::size_t machines = 2,
                                  FeasibilityResult* result = nullptr);

}  // namespace qmech
