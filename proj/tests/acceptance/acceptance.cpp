// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qmech/allocations.hpp"
#include "qmech/certificates.hpp"
#include "qmech/errors.hpp"
#include "qmech/expected_curve.hpp"
#include "qmech/payments.hpp"
#include "qmech/polytope.hpp"
#include "qmech/properties.hpp"
#include "qmech/random_instances.hpp"
#include "qmech/workcurve.hpp"

using namespace qmech;
using oracle::q;

namespace {

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << what;
    pass = pass && ok;
  }
};

int failed = 0;

void criterion(int number, const std::string& title, double seconds_limit, const std::function<void(Check&)>& body) {
  Check o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (seconds_limit > 0) {
    std::ostringstream limit;
    limit << "took " << elapsed << " s, limit " << seconds_limit << " s";
    o.require(elapsed < seconds_limit, limit.str());
  }
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << number << ": " << title << " (" << elapsed << " s)";
  if (!o.pass) std::cout << " -- " << o.detail.str();
  std::cout << std::endl;
  failed += !o.pass;
}

const Rationals kJobs{2, 1};

}  // namespace

int main() {
  criterion(1, "LPT* workcurve integral equals 13a/4 for a in {8,16,32}", 1.0, [](Check& o) {
    for (const Rational a : {8, 16, 32}) {
      const WorkCurve curve = build_workcurve(rules::lpt_star(), Rationals{a}, kJobs, 4 * a);
      o.require(!curve.truncated() && !curve.approximate(), "curve not exact at a = " + a.str());
      const Rational area = integrate(curve, 0, std::nullopt);
      o.require(area == Rational(13, 4) * a, "integral " + area.str() + " at a = " + a.str());
    }
  });

  criterion(2, "LPT* anchors w(a/4,a) = 3 and w(2a,a) = 1", 0, [](Check& o) {
    for (const Rational a : {8, 16, 32, 64, 1024, 1 << 20}) {
      o.require(lpt_star(Instance(kJobs, {a / 4, a})).workloads()[0] == 3, "w(a/4,a) at a = " + a.str());
      o.require(lpt_star(Instance(kJobs, {2 * a, a})).workloads()[0] == 1, "w(2a,a) at a = " + a.str());
    }
  });

  criterion(3, "randomized binning curve pieces and integral 7/2 + ln(3/2)", 1.0, [](Check& o) {
    const PiecewiseCurve c = expected_workcurve(rules::at_expected(), Rationals{1}, kJobs);
    const std::vector<std::optional<Rational>> bounds{q("1/3"), q("1/2"), 1, 2, 3, std::nullopt};
    const std::vector<Mobius> forms{Mobius::constant(3), Mobius{1, 0, 0, 1},     Mobius::constant(2),
                                    Mobius::constant(1), Mobius{3, -1, 1, 0}, Mobius::constant(0)};
    o.require(c.pieces.size() == 6, "piece count " + std::to_string(c.pieces.size()));
    for (std::size_t k = 0; k < std::min<std::size_t>(6, c.pieces.size()); ++k) {
      o.require(c.pieces[k].hi == bounds[k], "boundary of piece " + std::to_string(k));
      o.require(c.pieces[k].form.normalized() == forms[k].normalized(), "form of piece " + std::to_string(k));
    }
    const LogLinear v = integrate(c, 0, std::nullopt);
    o.require(v.rational_part == q("7/2"), "rational part " + v.rational_part.str());
    o.require(v.log_terms.size() == 1 && v.log_terms.begin()->first == q("3/2") && v.log_terms.begin()->second == 1,
              "log part is not ln(3/2)");
    const RationalInterval box = v.enclose(q("1/1000000000"));
    const double reference = 3.5 + std::log(3.0) - std::log(2.0);
    o.require(std::abs(box.lo.to_double() - reference) < 1e-6 && std::abs(box.hi.to_double() - reference) < 1e-6,
              "numeric total off");
  });

  criterion(4, "theorem-1 harness on VCG gives ratio (2m-1)/m for m = 2..6", 5.0, [](Check& o) {
    const Mechanism vcg = mechanisms::vcg();
    for (std::int64_t m = 2; m <= 6; ++m) {
      Theorem1Params p;
      const CertificateReport r = theorem1_harness(vcg, static_cast<std::size_t>(m), 1, q("1/2"), &p);
      const std::string tag = "m = " + std::to_string(m) + ": ";
      o.require(r.verified, tag + "report not verified");
      o.require(r.constant("ratio") == Rational(2 * m - 1, m), tag + "ratio " + r.constant("ratio").str());
      oracle::Vec jobs(static_cast<std::size_t>(m - 1), Rational(1));
      jobs.push_back(m);
      oracle::Vec speeds(static_cast<std::size_t>(m - 1), m * p.alpha);
      speeds.push_back(p.alpha);
      o.require(oracle::opt(jobs, speeds) == r.constant("OPT"), tag + "OPT disagrees with brute force");
    }
  });

  criterion(5, "VCG passes truthful, EF, IR, anonymous, monotone on 1000 instances", 60.0, [](Check& o) {
    const Mechanism vcg = mechanisms::vcg();
    InstanceSampler sampler(2024);
    SampleOptions options;
    options.max_machines = 4;
    options.max_jobs = 6;
    std::size_t failures = 0;
    for (int k = 0; k < 1000; ++k) {
      const Instance inst = sampler.instance(options);
      const Rationals grid = default_grid(inst);
      const auto out = vcg(inst);
      const bool ok = check_truthful(vcg, inst, grid).pass && check_envy_free(inst.bids(), out.workloads(), out.payments).pass &&
                      check_ir(inst.bids(), out.workloads(), out.payments).pass && check_anonymous(vcg, inst).pass &&
                      check_monotone(vcg.rule(), inst, grid).pass;
      failures += !ok;
    }
    o.require(failures == 0, std::to_string(failures) + " failing instances");
  });

  criterion(6, "envy-free chain payments pass the EF checker on 1000 vectors", 0, [](Check& o) {
    InstanceSampler sampler(6);
    std::size_t failures = 0;
    for (int k = 0; k < 1000; ++k) {
      const Rationals bids = sampler.bids(sampler.between(1, 6), SampleOptions{});
      const Rationals w = sampler.locally_efficient_workloads(bids);
      failures += !check_envy_free(bids, w, ef_chain_payments(bids, w)).pass;
    }
    o.require(failures == 0, std::to_string(failures) + " failures");
  });

  criterion(7, "pairwise local efficiency agrees with permutation enumeration", 0, [](Check& o) {
    InstanceSampler sampler(7);
    std::size_t disagreements = 0, fails = 0;
    for (int k = 0; k < 1000; ++k) {
      const std::size_t m = sampler.between(1, 6);
      Rationals bids(m), w(m);
      for (std::size_t i = 0; i < m; ++i) {
        bids[i] = sampler.positive_rational(4, 2);
        w[i] = Rational(static_cast<std::int64_t>(sampler.between(0, 4)));
      }
      const bool pairwise = check_local_efficiency(bids, w).pass;
      disagreements += pairwise != oracle::locally_efficient(bids, w);
      fails += !pairwise;
    }
    o.require(disagreements == 0, std::to_string(disagreements) + " disagreements");
    o.require(fails > 0 && fails < 1000, "sample does not exercise both outcomes");
  });

  criterion(8, "LPT* is locally efficient on 1000 instances with power-of-two bids", 0, [](Check& o) {
    InstanceSampler sampler(8);
    SampleOptions options;
    options.max_machines = 6;
    options.straddle_powers_of_two = true;
    std::size_t failures = 0;
    for (int k = 0; k < 1000; ++k) {
      const Instance inst = sampler.instance(options);
      failures += !oracle::locally_efficient(inst.bids(), lpt_star(inst).workloads());
    }
    o.require(failures == 0, std::to_string(failures) + " failures");
  });

  criterion(9, "T_LB is homogeneous of degree 1 in the bids", 0, [](Check& o) {
    InstanceSampler sampler(9);
    for (int k = 0; k < 100; ++k) {
      const Instance inst = sampler.instance();
      const Rational c = sampler.positive_rational(20, 7);
      Rationals scaled = inst.bids();
      for (auto& b : scaled) b *= c;
      const Rational base = at_lower_bound(inst);
      o.require(at_lower_bound(inst.with_bids(scaled)) == c * base, "instance " + std::to_string(k));
      o.require(base == oracle::t_lb(inst.jobs(), inst.bids()), "T_LB oracle mismatch");
    }
  });

  criterion(10, "g(3) = 5/12 on the two-machine rule and the inequality at a = 1, 2, 5", 0, [](Check& o) {
    // Oracle: w(1, y) is constant between consecutive ratios of job subset
    // sums, so midpoint values integrate exactly.
    const Rational k(3);
    const Rational lo = k.reciprocal(), hi = (k + 1) / (2 * k);
    Rationals cuts{lo, hi};
    for (const Rational num : {1, 2, 3}) {
      for (const Rational den : {1, 2, 3}) {
        const Rational r = num / den;
        if (lo < r && r < hi) cuts.push_back(r);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    Rational inner(0);
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const Rational mid = (cuts[s] + cuts[s + 1]) / 2;
      inner += (cuts[s + 1] - cuts[s]) * oracle::two_opt(kJobs, {1, mid})[0];
    }
    const Rational expected = (4 * k * k / ((k + 1) * (k + 1)) - 1) * inner;
    o.require(expected == q("5/12"), "oracle gives " + expected.str());

    const Rationals samples{1, 2, 5};
    const auto [g, report] = lemma6_g(rules::two_machine_opt(), k, kJobs, samples);
    o.require(g == expected, "g(3) = " + g.str());
    o.require(report.verified && report.recheck(), "inequality fails at some sample");
  });

  criterion(11, "two-machine rule passes all four properties on 1000 samples and differs from VCG", 0,
            [](Check& o) {
              const CertificateReport r = prop12_verify(1000, 1);
              o.require(r.verified && r.recheck(), "property failures");
              const Instance witness(kJobs, {1, q("3/2")});
              o.require(two_machine_opt(witness).workloads() == oracle::two_opt(kJobs, witness.bids()),
                        "witness disagrees with brute force");
              o.require(two_machine_opt(witness).workloads() != vcg_allocate(witness).workloads(),
                        "rules agree on the witness");
            });

  criterion(12, "polytope verdicts re-verify on 100 random small grids", 0, [](Check& o) {
    InstanceSampler sampler(12);
    const std::vector<AllocationRule> rules{rules::vcg(), rules::lpt_star(), rules::two_machine_opt()};
    std::size_t feasible = 0, infeasible = 0;
    for (int k = 0; k < 100; ++k) {
      const AllocationRule& rule = rules[sampler.below(rules.size())];
      Rationals grid(sampler.between(1, 4));
      for (auto& g : grid) g = sampler.positive_rational(16, 2);
      Rationals jobs(sampler.between(1, 3));
      for (auto& j : jobs) j = Rational(static_cast<std::int64_t>(sampler.between(1, 3)));
      const FeasibilityResult r = payment_polytope_feasible(rule, grid, jobs);
      if (r.feasible) {
        ++feasible;
        for (const auto& c : r.problem.constraints) {
          Rational lhs(0);
          for (const auto& [var, coef] : c.coefficients) lhs += coef * r.witness.at(var);
          o.require(holds(lhs, c.relation, c.rhs), "witness violates " + c.label);
        }
      } else {
        ++infeasible;
        o.require(!r.infeasible_subset.empty(), "empty infeasible subset");
        o.require(!solve_feasibility(restrict_to(r.problem, r.infeasible_subset)).feasible,
                  "subset is feasible on its own");
      }
    }
    std::cout << "  polytope grids: " << feasible << " feasible, " << infeasible << " infeasible" << std::endl;
  });

  return failed;
}
