#include <doctest.h>

#include "oracles.hpp"
#include "qmech/errors.hpp"
#include "qmech/payments.hpp"
#include "qmech/properties.hpp"
#include "qmech/random_instances.hpp"

using namespace qmech;
using oracle::q;

TEST_CASE("local efficiency") {
  CHECK(check_local_efficiency(Rationals{2, 8}, Rationals{3, 0}).pass);
  CHECK(check_local_efficiency(Rationals{1, 7, 3}, Rationals{2, 2, 2}).pass);

  const PropertyVerdict v = check_local_efficiency(Rationals{1, 2}, Rationals{1, 2});
  CHECK_FALSE(v.pass);
  REQUIRE(v.counterexample);
  CHECK(v.counterexample->lhs == 5);
  CHECK(v.counterexample->rhs == 4);
  CHECK(v.counterexample->permutation == std::vector<std::size_t>{1, 0});
  CHECK(v.recheck());
}

TEST_CASE("pairwise criterion agrees with permutations") {
  InstanceSampler sampler(31);
  for (int k = 0; k < 300; ++k) {
    const std::size_t m = sampler.between(1, 6);
    Rationals bids(m), w(m);
    for (std::size_t i = 0; i < m; ++i) {
      bids[i] = Rational(static_cast<std::int64_t>(sampler.between(1, 4)));
      w[i] = Rational(static_cast<std::int64_t>(sampler.between(0, 3)));
    }
    const PropertyVerdict v = check_local_efficiency(bids, w);
    CHECK(v.pass == oracle::locally_efficient(bids, w));
    CHECK(v.pass == !improving_permutation(bids, w).has_value());
    CHECK(v.recheck());
  }
}

TEST_CASE("envy freeness and IR") {
  CHECK(check_envy_free(Rationals{2, 1}, Rationals{1, 2}, Rationals{2, 3}).pass);
  CHECK(check_envy_free(Rationals{1, 3}, Rationals{3, 0}, Rationals{9, 0}).pass);
  const PropertyVerdict envy = check_envy_free(Rationals{1, 1}, Rationals{2, 1}, Rationals{0, 0});
  CHECK_FALSE(envy.pass);
  CHECK(envy.recheck());
  CHECK(envy.counterexample->machine == 0);

  CHECK(check_ir(Rationals{2, 1}, Rationals{1, 2}, Rationals{2, 3}).pass);
  CHECK(check_ir(Rationals{2, 1}, Rationals{0, 0}, Rationals{0, 0}).pass);
  const PropertyVerdict ir = check_ir(Rationals{2, 1}, Rationals{1, 2}, Rationals{1, 3});
  CHECK_FALSE(ir.pass);
  CHECK(ir.recheck());
  CHECK_THROWS_AS(check_ir(Rationals{2, 1}, Rationals{1}, Rationals{1, 3}), DimensionError);
}

TEST_CASE("truthfulness") {
  InstanceSampler sampler(32);
  for (int k = 0; k < 20; ++k) {
    const Instance inst = sampler.instance();
    CHECK(check_truthful(mechanisms::vcg(), inst, default_grid(inst)).pass);
  }
  // Overbidding 3 -> 4 stays in the same rounded class and raises the payment.
  const Instance inst({2, 1}, {3, 8});
  const PropertyVerdict v = check_truthful(mechanisms::by_name("lpt-cost"), inst, default_grid(inst));
  CHECK_FALSE(v.pass);
  CHECK(v.recheck());
  REQUIRE(v.counterexample->other_bids);

  // A lone machine paid its reported cost gains by overbidding.
  const Instance lone({2, 1}, {3});
  const PropertyVerdict alone = check_truthful(mechanisms::pay_cost(rules::vcg()), lone, default_grid(lone));
  CHECK_FALSE(alone.pass);
  CHECK(alone.recheck());
}

TEST_CASE("monotonicity") {
  const Instance inst({2, 1}, {1, 8});
  CHECK(check_monotone(rules::lpt_star(), inst, default_grid(inst)).pass);
  CHECK(check_monotone_exact(rules::lpt_star(), inst, 64).pass);
  CHECK(check_monotone(rules::vcg(), inst, default_grid(inst)).pass);

  const AllocationRule backwards("backwards", [](const Instance& x) -> Allocation {
    const std::size_t slow = x.bids()[0] > x.bids()[1] ? 0 : 1;
    std::vector<std::size_t> map(x.job_count(), 1 - slow);
    map[0] = slow;
    return Assignment(x.jobs(), 2, map);
  });
  const PropertyVerdict v = check_monotone(backwards, inst, default_grid(inst));
  CHECK_FALSE(v.pass);
  CHECK(v.recheck());
  CHECK_FALSE(check_monotone_exact(backwards, inst, 64).pass);
}

TEST_CASE("anonymity") {
  InstanceSampler sampler(33);
  for (int k = 0; k < 20; ++k) CHECK(check_anonymous(mechanisms::vcg(), sampler.instance()).pass);

  const Mechanism biased("biased", rules::vcg(), [](const Instance& x, const Allocation& a) {
    Rationals p = vcg_payments(x, std::get<Assignment>(a));
    p[0] += 1;
    return p;
  });
  const PropertyVerdict v = check_anonymous(biased, Instance({2, 1}, {1, 3}));
  CHECK_FALSE(v.pass);
  CHECK(v.recheck());
  CHECK(check_anonymous(biased, Instance({2, 1}, {1})).pass);
}

TEST_CASE("scalability") {
  const Rationals scalars{2, q("1/3"), q("7/5")};
  InstanceSampler sampler(34);
  SampleOptions two;
  two.max_machines = 2;
  for (int k = 0; k < 30; ++k) {
    CHECK(check_scalable(rules::two_machine_opt(), sampler.instance(two), scalars).pass);
    CHECK(check_scalable(rules::vcg(), sampler.instance(), scalars).pass);
  }
  const Rationals two_thirds{q("2/3")};
  const PropertyVerdict v = check_scalable(rules::lpt_star(), Instance({2, 1}, {3, 8}), two_thirds);
  CHECK_FALSE(v.pass);
  CHECK(v.recheck());
}

TEST_CASE("approximation ratio") {
  // m = 3, alpha = 1: speeds (3,3,1), jobs (1,1,3).
  CHECK(approx_ratio(rules::vcg(), Instance({1, 1, 3}, {3, 3, 1})) == q("5/3"));
  CHECK(approx_ratio(rules::lpt_star(), Instance({2, 1}, {5})) == 1);
  CHECK(approx_ratio(rules::lpt_star(), Instance({2, 1}, {1, 2})) == 1);
  // The randomized rule is scored on its exact expected makespan.
  CHECK(approx_ratio(rules::at_expected(), Instance({2, 1}, {1, 2})) == 1);
}

TEST_CASE("expected makespan") {
  // Job 2 lands on either machine with probability 1/2.
  const Rationals jobs{2, 1};
  const std::vector<ExpectedAllocation::Distribution> dists{{{0, Rational(1)}}, {{0, q("1/2")}, {1, q("1/2")}}};
  const ExpectedAllocation x(jobs, 2, dists);
  CHECK(expected_makespan(x, Rationals{2, 1}, Rationals{1, 1}) == q("5/2"));
}

TEST_CASE("default grid") {
  const Rationals g = default_grid(Instance({1}, {q("3/5"), 8}));
  CHECK(g.size() == 65);
  CHECK(g.front() == q("3/5"));
  CHECK(g.back() == 64);
}
