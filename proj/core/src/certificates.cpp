#include "qmech/certificates.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "qmech/errors.hpp"
#include "qmech/random_instances.hpp"
#include "qmech/workcurve.hpp"

namespace qmech {

const Rational& CertificateReport::constant(const std::string& key) const {
  for (const auto& [name, value] : constants) {
    if (name == key) return value;
  }
  throw DomainError("report " + name + " has no constant '" + key + "'");
}

bool CertificateReport::recheck() const {
  const bool all = std::all_of(inequalities.begin(), inequalities.end(), [](const auto& q) { return q.holds(); });
  return all == verified;
}

namespace {

std::string log_linear_str(const LogLinear& v) {
  std::string s = v.rational_part.str();
  for (const auto& [arg, coef] : v.log_terms) {
    s += coef.sign() < 0 ? " - " : " + ";
    if (coef.abs() != Rational(1)) s += coef.abs().str() + "*";
    s += "ln(" + arg.str() + ")";
  }
  return s;
}

void finish(CertificateReport& report) {
  report.verified = std::all_of(report.inequalities.begin(), report.inequalities.end(),
                                [](const auto& q) { return q.holds(); });
}

std::string join(std::span<const Rational> values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + values[i].str();
  return s;
}

bool is_power_of_two(const Rational& a) { return a.sign() > 0 && Rational::pow2(a.ceil_log2()) == a; }

Rational count_of(std::size_t n) { return Rational(static_cast<std::int64_t>(n)); }

}  // namespace

std::string render_text(const CertificateReport& report) {
  std::ostringstream out;
  out << report.name << ": " << (report.verified ? "verified" : "NOT verified") << "\n";
  for (const auto& [k, v] : report.inputs) out << "  input " << k << " = " << v << "\n";
  for (const auto& [k, v] : report.constants) out << "  " << k << " = " << v.str() << "\n";
  for (const auto& [k, v] : report.symbolic) {
    out << "  " << k << " = " << log_linear_str(v) << " ~ " << v.approx() << "\n";
  }
  for (const auto& q : report.inequalities) {
    out << "  [" << (q.holds() ? "ok" : "FAIL") << "] " << q.label << ": " << q.lhs.str() << " "
        << relation_symbol(q.relation) << " " << q.rhs.str() << "\n";
  }
  for (const auto& n : report.notes) out << "  note: " << n << "\n";
  return out.str();
}

CertificateReport theorem5_certificate(std::span<const Rational> a_values) {
  if (a_values.empty()) throw PreconditionError("at least one value of a required");
  for (const auto& a : a_values) {
    if (!is_power_of_two(a) || a < Rational(8)) {
      throw PreconditionError("a = " + a.str() + " must be a power of two no smaller than 8");
    }
  }
  const Rationals jobs{Rational(2), Rational(1)};
  const Rational total(3);
  const AllocationRule rule = rules::lpt_star();

  CertificateReport report;
  report.name = "theorem5";
  report.inputs = {{"a", join(a_values)}, {"jobs", "2,1"}, {"rule", rule.name()}};

  for (const auto& a : a_values) {
    const std::string tag = "[a=" + a.str() + "] ";
    const Rationals others{a};
    const WorkCurve curve = build_workcurve(rule, others, jobs, 4 * a);

    const Rationals want_bp{a / 4, a, 2 * a};
    const Rationals want_values{Rational(3), Rational(2), Rational(1)};
    const bool shape = curve.breakpoints() == want_bp && curve.values() == want_values && curve.tail().is_zero() &&
                       !curve.approximate();
    if (!shape) {
      report.notes.push_back(tag + "workcurve shape differs: breakpoints " + join(curve.breakpoints()) + " values " +
                             join(curve.values()) + " tail " + curve.tail().str() + "; expected breakpoints " +
                             join(want_bp) + " values 3,2,1 tail 0");
    }
    report.inequalities.push_back({tag + "workcurve has the three-step shape", count_of(shape), Relation::kEq,
                                   Rational(1)});

    const Rational integral = integrate(curve, Rational(0), std::nullopt);
    report.constants.emplace_back(tag + "integral", integral);
    report.inequalities.push_back({tag + "integral of w(x,a) over (0,inf) equals 13a/4", integral, Relation::kEq,
                                   Rational(13, 4) * a});

    const Rational low_anchor = rule.workloads(Instance(jobs, {a / 4, a}))[0];
    const Rational high_anchor = rule.workloads(Instance(jobs, {2 * a, a}))[0];
    report.inequalities.push_back({tag + "w(a/4, a)", low_anchor, Relation::kEq, Rational(3)});
    report.inequalities.push_back({tag + "w(2a, a)", high_anchor, Relation::kEq, Rational(1)});

    // Envy bound with speeds (1, a): h(a) - h(1) <= L * 1 + (a - 1) * w_1.
    const Rational w_fast = rule.workloads(Instance(jobs, {Rational(1), a}))[0];
    const Rational slope = total + (a - 1) * w_fast;
    report.constants.emplace_back(tag + "envy bound on h(a) - h(1)", slope);
    report.inequalities.push_back({tag + "envy bound equals 3a", slope, Relation::kEq, 3 * a});

    const Rational threshold = integral - slope;
    report.constants.emplace_back(tag + "contradiction for every h(1) below", threshold);
    report.inequalities.push_back({tag + "IR lower bound exceeds the envy slope", integral, Relation::kGt, slope});
    report.inequalities.push_back({tag + "threshold is a/4", threshold, Relation::kEq, a / 4});
  }
  report.notes.push_back("13a/4 > 3a + h(1) holds exactly when a > 4 h(1); no h(1) >= 0 survives every a");
  finish(report);
  return report;
}

CertificateReport theorem7_certificate(const Rational& tolerance) {
  if (tolerance.sign() <= 0) throw DomainError("tolerance must be positive");
  const Rationals jobs{Rational(2), Rational(1)};
  const AllocationRule rule = rules::at_expected();
  const Rationals others{Rational(1)};

  CertificateReport report;
  report.name = "theorem7";
  report.inputs = {{"jobs", "2,1"}, {"other bid", "1"}, {"tolerance", tolerance.str()}, {"rule", rule.name()}};

  const PiecewiseCurve curve = expected_workcurve(rule, others, jobs);
  const std::vector<CurvePiece> want{
      {Rational(0), Rational(1, 3), Mobius::constant(3)},
      {Rational(1, 3), Rational(1, 2), Mobius{1, 0, 0, 1}},
      {Rational(1, 2), Rational(1), Mobius::constant(2)},
      {Rational(1), Rational(2), Mobius::constant(1)},
      {Rational(2), Rational(3), Mobius{3, -1, 1, 0}},
      {Rational(3), std::nullopt, Mobius::constant(0)},
  };
  std::size_t matching = 0;
  for (std::size_t k = 0; k < want.size(); ++k) {
    if (k < curve.pieces.size() && curve.pieces[k].lo == want[k].lo && curve.pieces[k].hi == want[k].hi &&
        curve.pieces[k].form == want[k].form.normalized()) {
      ++matching;
    } else {
      report.notes.push_back("piece " + std::to_string(k) + " differs from the expected regime starting at " +
                             want[k].lo.str());
    }
  }
  report.inequalities.push_back({"pieces matching the six expected regimes", count_of(matching), Relation::kEq,
                                 count_of(want.size())});
  report.inequalities.push_back({"number of pieces", count_of(curve.pieces.size()), Relation::kEq,
                                 count_of(want.size())});

  const LogLinear integral = integrate(curve, Rational(0), std::nullopt);
  report.symbolic.emplace_back("integral of E[w(x,1)] over (0,inf)", integral);
  report.constants.emplace_back("rational part", integral.rational_part);
  report.inequalities.push_back({"rational part", integral.rational_part, Relation::kEq, Rational(7, 2)});
  const auto log_it = integral.log_terms.find(Rational(3, 2));
  const Rational log_coefficient = log_it == integral.log_terms.end() ? Rational(0) : log_it->second;
  report.inequalities.push_back({"coefficient of ln(3/2)", log_coefficient, Relation::kEq, Rational(1)});
  report.inequalities.push_back({"number of logarithmic terms", count_of(integral.log_terms.size()), Relation::kEq,
                                 Rational(1)});

  const RationalInterval box = integral.enclose(tolerance);
  report.constants.emplace_back("enclosure low", box.lo);
  report.constants.emplace_back("enclosure high", box.hi);
  report.inequalities.push_back({"enclosure width", box.width(), Relation::kLe, tolerance});
  // 3.5 + ln 3 - ln 2 to 24 decimals.
  const Rational reference = Rational::parse("3.905465108108164381978013");
  report.inequalities.push_back({"enclosure low vs 3.9054651081", box.lo, Relation::kGe, reference - tolerance});
  report.inequalities.push_back({"enclosure high vs 3.9054651081", box.hi, Relation::kLe, reference + tolerance});
  report.inequalities.push_back({"IR lower bound slope exceeds the envy slope 3", box.lo, Relation::kGt, Rational(3)});
  report.constants.emplace_back("slope gap lower bound", box.lo - 3);
  report.notes.push_back("h(a) >= (3.5 + ln 3 - ln 2) a exceeds h(1) + 3a once a > h(1) / (0.5 + ln 3 - ln 2)");

  // The expected allocation is locally efficient, and every filled bin holds
  // exactly T_LB / b_i.
  const Rationals probes{Rational(1, 6), Rational(5, 12), Rational(3, 4), Rational(3, 2), Rational(5, 2), Rational(4)};
  for (const auto& x : probes) {
    const Instance inst(jobs, {x, Rational(1)});
    const ExpectedAllocation alloc = at_fractional(inst);
    const Rationals& ew = alloc.expected_workloads();
    const PropertyVerdict le = check_local_efficiency(inst.bids(), ew);
    report.inequalities.push_back({"[x=" + x.str() + "] expected allocation locally efficient", count_of(le.pass),
                                   Relation::kEq, Rational(1)});
    const Rational t_lb = at_lower_bound(inst);
    std::vector<std::size_t> order{0, 1};
    std::stable_sort(order.begin(), order.end(), [&](auto p, auto q) { return inst.bids()[p] < inst.bids()[q]; });
    std::size_t last = 0;
    for (std::size_t r = 0; r < order.size(); ++r) {
      if (ew[order[r]].sign() > 0) last = r;
    }
    for (std::size_t r = 0; r < last; ++r) {
      const std::size_t i = order[r];
      report.inequalities.push_back({"[x=" + x.str() + "] E[w_" + std::to_string(i) + "] = T_LB / b_" +
                                         std::to_string(i),
                                     ew[i], Relation::kEq, t_lb / inst.bids()[i]});
    }
  }
  finish(report);
  return report;
}

CertificateReport theorem1_harness(const Mechanism& mechanism, std::size_t m, const Rational& c,
                                   const Rational& epsilon, Theorem1Params* params_out) {
  if (m < 2) throw PreconditionError("at least two machines required");
  const Rational mm = count_of(m);
  const Rational bound = 2 - Rational(1) / mm;
  if (c < Rational(1) || !(c < bound)) {
    throw PreconditionError("c = " + c.str() + " must satisfy 1 <= c < 2 - 1/m = " + bound.str());
  }
  if (epsilon.sign() <= 0 || !(epsilon < Rational(1))) throw PreconditionError("epsilon must lie in (0, 1)");

  Theorem1Params p;
  p.m = m;
  p.c = c;
  p.epsilon = epsilon;
  p.total_length = 2 * mm - 1;
  p.gamma = c * p.total_length + epsilon;

  Rationals jobs(m - 1, Rational(1));
  jobs.push_back(mm);
  const HFunction h = HFunction::from_mechanism(mechanism, jobs);

  Rationals chain;  // (gamma^(m-2), ..., gamma, 1)
  for (std::size_t e = m - 1; e-- > 0;) chain.push_back(p.gamma.pow(static_cast<unsigned>(e)));
  const Rational h_chain = h(chain);
  p.f = p.gamma.pow(static_cast<unsigned>(m - 1)) * p.total_length + h_chain;
  p.alpha = p.total_length * c / (mm - 1) * p.f;
  if (params_out) *params_out = p;

  CertificateReport report;
  report.name = "theorem1";
  report.inputs = {{"mechanism", mechanism.name()}, {"m", std::to_string(m)}, {"c", c.str()},
                   {"epsilon", epsilon.str()}};
  report.constants = {{"L", p.total_length}, {"gamma", p.gamma}, {"h(gamma^(m-2),...,gamma,1)", h_chain},
                      {"f(m,c)", p.f}, {"alpha", p.alpha}};

  Rationals speeds(m - 1, mm * p.alpha);
  speeds.push_back(p.alpha);
  const Instance t(jobs, speeds);

  const PropertyVerdict truthful = check_truthful(mechanism, t, default_grid(t));
  if (!truthful.pass) {
    throw PreconditionError("mechanism " + mechanism.name() + " fails grid truthfulness: " +
                            truthful.counterexample->description);
  }

  const Outcome outcome = mechanism(t);
  const Rationals& w = outcome.workloads();
  const Rational achieved = makespan(w, t.bids());
  const Rational opt = opt_makespan(t).makespan;
  const Rational ratio = achieved / opt;
  report.constants.emplace_back("makespan", achieved);
  report.constants.emplace_back("OPT", opt);
  report.constants.emplace_back("ratio", ratio);

  report.inequalities.push_back({"workload of the fastest machine equals L", w[m - 1], Relation::kEq, p.total_length});
  report.inequalities.push_back({"OPT equals m alpha", opt, Relation::kEq, mm * p.alpha});
  report.inequalities.push_back({"ratio is at least 2 - 1/m", ratio, Relation::kGe, bound});

  Rationals t_minus_1(speeds.begin() + 1, speeds.end());
  const Rational h_t = h(t_minus_1);
  report.constants.emplace_back("h(t_-1)", h_t);

  const bool spread = std::any_of(w.begin(), w.end() - 1, [](const Rational& v) { return v >= Rational(1); });
  if (spread) {
    report.inequalities.push_back({"h(t_-1) >= (L + (m-1)/(L c)) alpha", h_t, Relation::kGe,
                                   (p.total_length + (mm - 1) / (p.total_length * c)) * p.alpha});
  } else {
    report.notes.push_back("lower bound on h(t_-1) not applicable: no slow machine receives a job");
  }
  report.inequalities.push_back({"h(t_-1) < L alpha + f(m,c)", h_t, Relation::kLt,
                                 p.total_length * p.alpha + p.f});

  // IR lower bound h >= integral of the workcurve, when that integral is finite.
  const Rational cap = 4 * rounded_speed(mm * p.alpha) * p.total_length;
  if (!mechanism.rule().randomized()) {
    const WorkCurve curve = build_workcurve(mechanism.rule(), t_minus_1, jobs, cap);
    if (curve.truncated()) {
      report.notes.push_back("workcurve against t_-1 does not vanish; the IR bound on h is vacuous");
    } else {
      const Rational area = integrate(curve, Rational(0), std::nullopt);
      report.constants.emplace_back("integral of w(x, t_-1)", area);
      report.inequalities.push_back({"h(t_-1) >= integral of w(x, t_-1)", h_t, Relation::kGe, area});
    }
  }
  finish(report);
  return report;
}

std::pair<Rational, CertificateReport> lemma6_g(const AllocationRule& rule, const Rational& k,
                                                std::span<const Rational> jobs, std::span<const Rational> samples) {
  if (!(k > Rational(1))) throw PreconditionError("k must exceed 1");
  const Rationals job_vec(jobs.begin(), jobs.end());
  const Rationals default_samples{Rational(1), Rational(2), Rational(5)};
  const Rationals a_values = samples.empty() ? default_samples : Rationals(samples.begin(), samples.end());

  const Rationals scalars{Rational(2), Rational(1, 3), Rational(7, 5)};
  for (const auto& a : a_values) {
    for (const Rationals& bids : {Rationals{Rational(1), a}, Rationals{a, Rational(1)}, Rationals{k * a, a}}) {
      const PropertyVerdict v = check_scalable(rule, Instance(job_vec, bids), scalars);
      if (!v.pass) throw PreconditionError("rule is not scalable: " + v.counterexample->description);
    }
  }

  // w(x, a) as a function of the first machine's bid x.
  auto own_curve = [&](const Rational& a, const Rational& cap) {
    return build_workcurve(rule, Rationals{a}, job_vec, cap, 0);
  };
  // w(b, y): first machine bids b, the other's bid y varies.
  auto other_curve = [&](const Rational& b, const Rational& cap) {
    const Instance base(job_vec, {b, cap});
    BidResponse response = [&](const Rational& y) { return rule.workloads(base.with_bid(1, y))[0]; };
    return discover_steps(response, default_seeds(Rationals{b}, base.jobs(), cap), cap);
  };

  for (const auto& a : a_values) {
    const WorkCurve curve = own_curve(a, k * a);
    // Only (0, k a) matters; the curve may drop to zero exactly at k a.
    const bool reaches_cap = !curve.breakpoints().empty() && curve.breakpoints().back() >= k * a;
    const bool positive = std::all_of(curve.values().begin(), curve.values().end(),
                                      [](const Rational& v) { return v.sign() > 0; }) &&
                          (reaches_cap || curve.tail().sign() > 0);
    if (!positive) {
      throw PreconditionError("w(x, a) vanishes for some x < k a at sample a = " + a.str());
    }
  }

  const Rational lo = k.reciprocal();
  const Rational hi = (k + 1) / (2 * k);
  const WorkCurve unit = other_curve(Rational(1), Rational(1));
  const Rational inner = integrate(unit, lo, hi);
  const Rational factor = 4 * k * k / ((k + 1) * (k + 1)) - 1;
  const Rational g = factor * inner;

  CertificateReport report;
  report.name = "lemma6";
  report.inputs = {{"rule", rule.name()}, {"k", k.str()}, {"jobs", join(jobs)}, {"a", join(a_values)}};
  report.constants = {{"4k^2/(k+1)^2 - 1", factor}, {"integral of w(1,y) over (1/k, (k+1)/(2k))", inner},
                      {"g(k)", g}};
  report.inequalities.push_back({"g(k) > 0", g, Relation::kGt, Rational(0)});
  for (const auto& a : a_values) {
    const std::string tag = "[a=" + a.str() + "] ";
    const Rational lhs = integrate(own_curve(a, k * a), a, k * a);
    const Rational rhs = integrate(other_curve(a, a), a / k, a) + g * a;
    report.inequalities.push_back({tag + "integral_a^{ka} w(x,a) >= integral_{a/k}^a w(a,x) + g(k) a", lhs,
                                   Relation::kGe, rhs});
  }
  finish(report);
  return {g, std::move(report)};
}

CertificateReport prop12_verify(std::size_t samples, std::uint64_t seed) {
  const AllocationRule rule = rules::two_machine_opt();
  const Mechanism allocation_only("two-opt-allocation", rule, [](const Instance& inst, const Allocation&) {
    return Rationals(inst.machine_count(), Rational(0));
  });

  InstanceSampler sampler(seed);
  SampleOptions options;
  options.min_machines = options.max_machines = 2;
  options.max_jobs = 6;
  const Rationals scalars{Rational(2), Rational(1, 3), Rational(7, 5)};

  std::map<std::string, std::size_t> failures{{"local-efficiency", 0}, {"monotone", 0}, {"scalable", 0},
                                              {"anonymous", 0}};
  CertificateReport report;
  report.name = "prop12";
  report.inputs = {{"samples", std::to_string(samples)}, {"seed", std::to_string(seed)}, {"rule", rule.name()}};

  auto record = [&](const PropertyVerdict& v) {
    if (v.pass) return;
    if (failures[v.property]++ == 0) report.notes.push_back(v.property + ": " + v.counterexample->description);
  };
  for (std::size_t s = 0; s < samples; ++s) {
    const Instance inst = sampler.instance(options);
    record(check_local_efficiency(inst.bids(), rule.workloads(inst)));
    record(check_monotone(rule, inst, default_grid(inst)));
    record(check_scalable(rule, inst, scalars));
    record(check_anonymous(allocation_only, inst));
  }
  for (const auto& [property, count] : failures) {
    report.inequalities.push_back({property + " failures", count_of(count), Relation::kEq, Rational(0)});
  }

  const Instance witness({Rational(2), Rational(1)}, {Rational(1), Rational(3, 2)});
  const Rationals ours = rule.workloads(witness);
  const Rationals theirs = vcg_allocate(witness).workloads();
  report.constants.emplace_back("two-opt w_1 at jobs (2,1), bids (1,3/2)", ours[0]);
  report.constants.emplace_back("vcg w_1 at jobs (2,1), bids (1,3/2)", theirs[0]);
  report.inequalities.push_back({"two-opt differs from VCG at jobs (2,1), bids (1,3/2)", ours[0], Relation::kLt,
                                 theirs[0]});
  report.inequalities.push_back({"two-opt makespan there", makespan(ours, witness.bids()), Relation::kEq,
                                 Rational(2)});
  finish(report);
  return report;
}

CertificateReport polytope_report(const AllocationRule& rule, std::span<const Rational> grid,
                                  std::span<const Rational> jobs, std::size_t machines, FeasibilityResult* out) {
  FeasibilityResult result = payment_polytope_feasible(rule, grid, jobs, machines);
  CertificateReport report;
  report.name = "polytope";
  report.inputs = {{"rule", rule.name()}, {"grid", join(grid)}, {"jobs", join(jobs)},
                   {"machines", std::to_string(machines)}};
  report.constants = {{"profiles", count_of(result.profiles.size())},
                      {"variables", count_of(result.problem.variables)},
                      {"constraints", count_of(result.problem.constraints.size())},
                      {"feasible", count_of(result.feasible)}};
  if (result.feasible) {
    std::size_t satisfied = 0;
    for (const auto& c : result.problem.constraints) satisfied += c.satisfied_by(result.witness);
    report.inequalities.push_back({"constraints satisfied by the witness", count_of(satisfied), Relation::kEq,
                                   count_of(result.problem.constraints.size())});
    report.notes.push_back("feasible on this grid only; grid feasibility does not imply continuum feasibility");
  } else {
    report.constants.emplace_back("infeasible subset size", count_of(result.infeasible_subset.size()));
    const bool still = !solve_feasibility(restrict_to(result.problem, result.infeasible_subset)).feasible;
    report.inequalities.push_back({"infeasible subset re-solves infeasible", count_of(still), Relation::kEq,
                                   Rational(1)});
    for (std::size_t r : result.infeasible_subset) report.notes.push_back(result.problem.constraints[r].label);
  }
  finish(report);
  if (out) *out = std::move(result);
  return report;
}

}  // namespace qmech
