#include "qmech/cli.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qmech/certificates.hpp"
#include "qmech/errors.hpp"
#include "qmech/json_io.hpp"
#include "qmech/properties.hpp"
#include "qmech/random_instances.hpp"

namespace qmech::cli {

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct Common {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::uint64_t budget = kDefaultOptBudget;
  bool text = false;
};

// key=value pairs such as "m=3 c=3/2".
std::map<std::string, std::string> parse_pairs(const std::vector<std::string>& items) {
  std::map<std::string, std::string> out;
  for (const auto& item : items) {
    std::stringstream in(item);
    std::string token;
    while (std::getline(in, token, ',')) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) throw UsageError("expected key=value, got '" + token + "'");
      out[token.substr(0, eq)] = token.substr(eq + 1);
    }
  }
  return out;
}

std::size_t parse_count(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw UsageError(what + " must be a nonnegative integer, got '" + s + "'");
  }
}

// Allocation rules come from mechanism names or plain rule names.
AllocationRule resolve_rule(const std::string& name, const Common& common) {
  try {
    return rules::by_name(name, common.seed, common.budget);
  } catch (const DomainError&) {
  }
  try {
    return mechanisms::by_name(name).rule();
  } catch (const DomainError&) {
    throw UsageError("unknown rule or mechanism '" + name + "'");
  }
}

Mechanism resolve_mechanism(const std::string& name) {
  try {
    return mechanisms::by_name(name);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

void emit(std::ostream& out, const Json& json, const std::string& text, bool as_text) {
  if (as_text) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  } else {
    out << json.dump(2) << '\n';
  }
}

std::string verdict_text(const PropertyVerdict& v) {
  std::string s = v.property + ": " + (v.pass ? "pass" : "FAIL") + " (" + std::to_string(v.checks) + " checks)";
  if (v.counterexample) {
    const auto& c = *v.counterexample;
    s += "\n  " + c.description + ": " + c.lhs.str() + " " + relation_symbol(c.required) + " " + c.rhs.str() +
         " is violated";
  }
  return s;
}

// ---------------------------------------------------------------- allocate

int cmd_allocate(const std::string& rule_name, const std::string& path, const Common& common, std::ostream& out) {
  const InstanceFile file = load_instance_file(path);
  Common effective = common;
  if (!common.seed_given && file.seed) effective.seed = *file.seed;
  const AllocationRule rule = [&] {
    try {
      return rules::by_name(rule_name, effective.seed, effective.budget);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }();
  const Instance instance = file.instance();
  const Allocation allocation = rule(instance);
  Json json{{"rule", rule.name()}};
  json.update(to_json(instance, allocation));

  std::ostringstream text;
  text << rule.name() << "\n";
  const Rationals& w = workloads_of(allocation);
  text << "  workloads";
  for (const auto& v : w) text << ' ' << v.str();
  text << "\n";
  if (json.contains("makespan")) text << "  makespan " << json["makespan"].get<std::string>() << "\n";
  emit(out, json, text.str(), common.text);
  return kOk;
}

// ------------------------------------------------------------------- check

struct CheckOptions {
  std::string property;
  std::string mechanism;
  std::string instance_path;
  std::size_t random = 0;
  std::size_t max_machines = 4;
  std::size_t max_jobs = 6;
  std::string grid;
  std::string scalars = "2,1/3,7/5";
  std::string workloads;
  std::string bids;
  std::string payments;
  std::vector<std::string> theorem1;
  std::size_t parallel = 1;
  bool csv = false;
};

using Checker = std::function<PropertyVerdict(const Instance&)>;

Checker make_checker(const CheckOptions& o, const Common& common) {
  const std::string& p = o.property;
  const Rationals grid = o.grid.empty() ? Rationals{} : parse_rationals(o.grid);
  auto grid_for = [grid](const Instance& inst) { return grid.empty() ? default_grid(inst) : grid; };

  if (p == "le") {
    const AllocationRule rule = resolve_rule(o.mechanism, common);
    return [rule](const Instance& inst) { return check_local_efficiency(inst.bids(), rule.workloads(inst)); };
  }
  if (p == "monotone") {
    const AllocationRule rule = resolve_rule(o.mechanism, common);
    return [rule, grid_for](const Instance& inst) { return check_monotone(rule, inst, grid_for(inst)); };
  }
  if (p == "scalable") {
    const AllocationRule rule = resolve_rule(o.mechanism, common);
    const Rationals scalars = parse_rationals(o.scalars);
    return [rule, scalars](const Instance& inst) { return check_scalable(rule, inst, scalars); };
  }
  const Mechanism mech = resolve_mechanism(o.mechanism);
  if (p == "ef") {
    return [mech](const Instance& inst) {
      const Outcome out = mech(inst);
      return check_envy_free(inst.bids(), out.workloads(), out.payments);
    };
  }
  if (p == "ir") {
    return [mech](const Instance& inst) {
      const Outcome out = mech(inst);
      return check_ir(inst.bids(), out.workloads(), out.payments);
    };
  }
  if (p == "truthful") {
    return [mech, grid_for](const Instance& inst) { return check_truthful(mech, inst, grid_for(inst)); };
  }
  if (p == "anonymous") {
    return [mech](const Instance& inst) { return check_anonymous(mech, inst); };
  }
  throw UsageError("unknown property '" + p + "' (known: le, ef, ir, truthful, monotone, anonymous, scalable, ratio)");
}

std::vector<Instance> check_instances(const CheckOptions& o, const Common& common) {
  if (!o.instance_path.empty() && o.random > 0) throw UsageError("give an instance file or --random, not both");
  if (!o.instance_path.empty()) return {load_instance_file(o.instance_path).instance()};
  if (o.random == 0) throw UsageError("need an instance file or --random N");
  InstanceSampler sampler(common.seed);
  SampleOptions options;
  options.max_machines = std::max<std::size_t>(o.max_machines, 1);
  options.min_machines = std::min(options.min_machines, options.max_machines);
  options.max_jobs = std::max<std::size_t>(o.max_jobs, 1);
  std::vector<Instance> out;
  out.reserve(o.random);
  for (std::size_t k = 0; k < o.random; ++k) out.push_back(sampler.instance(options));
  return out;
}

// Evaluates fn over [0, n) on `workers` threads; results keep index order.
template <typename T>
std::vector<T> fan_out(std::size_t n, std::size_t workers, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        slots[k] = fn(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

int check_direct(const CheckOptions& o, const Common& common, std::ostream& out) {
  const Rationals bids = parse_rationals(o.bids);
  const Rationals workloads = parse_rationals(o.workloads);
  PropertyVerdict v;
  if (o.property == "le") {
    v = check_local_efficiency(bids, workloads);
  } else if (o.property == "ef" || o.property == "ir") {
    if (o.payments.empty()) throw UsageError(o.property + " needs --payments");
    const Rationals payments = parse_rationals(o.payments);
    v = o.property == "ef" ? check_envy_free(bids, workloads, payments) : check_ir(bids, workloads, payments);
  } else {
    throw UsageError("--workloads/--bids apply to le, ef and ir only");
  }
  emit(out, to_json(v), verdict_text(v), common.text);
  return v.pass ? kOk : kPropertyFailed;
}

int check_ratio(const CheckOptions& o, const Common& common, std::ostream& out) {
  if (!o.theorem1.empty()) {
    const auto pairs = parse_pairs(o.theorem1);
    const std::size_t m = pairs.count("m") ? parse_count(pairs.at("m"), "m") : 3;
    const Rational c = pairs.count("c") ? Rational::parse(pairs.at("c")) : Rational(3, 2);
    const Rational eps = pairs.count("eps") ? Rational::parse(pairs.at("eps")) : Rational(1, 2);
    const CertificateReport report = theorem1_harness(resolve_mechanism(o.mechanism), m, c, eps);
    const Rational ratio = report.constant("ratio");
    emit(out, Json{{"mechanism", o.mechanism}, {"m", m}, {"ratio", to_json(ratio)}, {"verified", report.verified}},
         ratio.str(), common.text);
    return kOk;
  }
  const AllocationRule rule = resolve_rule(o.mechanism, common);
  const std::vector<Instance> instances = check_instances(o, common);
  const std::vector<Rational> ratios = fan_out<Rational>(instances.size(), o.parallel, [&](std::size_t k) {
    return approx_ratio(rule, instances[k], common.budget);
  });
  if (o.csv) {
    out << "rule,m,n,ratio\n";
    for (std::size_t k = 0; k < instances.size(); ++k) {
      out << rule.name() << ',' << instances[k].machine_count() << ',' << instances[k].job_count() << ','
          << ratios[k].str() << '\n';
    }
    return kOk;
  }
  Json rows = Json::array();
  std::string text;
  Rational worst(0);
  for (std::size_t k = 0; k < instances.size(); ++k) {
    rows.push_back(Json{{"m", instances[k].machine_count()},
                        {"n", instances[k].job_count()},
                        {"ratio", to_json(ratios[k])}});
    worst = max(worst, ratios[k]);
    text += ratios[k].str() + "\n";
  }
  Json json{{"rule", rule.name()}, {"instances", instances.size()}, {"max_ratio", to_json(worst)}, {"ratios", rows}};
  emit(out, json, instances.size() == 1 ? ratios[0].str() : text, common.text);
  return kOk;
}

int cmd_check(const CheckOptions& o, const Common& common, std::ostream& out) {
  if (!o.workloads.empty() || !o.bids.empty()) {
    if (o.workloads.empty() || o.bids.empty()) throw UsageError("--workloads and --bids go together");
    return check_direct(o, common, out);
  }
  if (o.mechanism.empty()) throw UsageError("check " + o.property + " needs a mechanism or rule name");
  if (o.property == "ratio") return check_ratio(o, common, out);

  const Checker checker = make_checker(o, common);
  const std::vector<Instance> instances = check_instances(o, common);
  const std::vector<PropertyVerdict> verdicts =
      fan_out<PropertyVerdict>(instances.size(), o.parallel, [&](std::size_t k) { return checker(instances[k]); });

  if (instances.size() == 1) {
    emit(out, to_json(verdicts[0]), verdict_text(verdicts[0]), common.text);
    return verdicts[0].pass ? kOk : kPropertyFailed;
  }
  std::size_t failures = 0;
  std::uint64_t checks = 0;
  const PropertyVerdict* first = nullptr;
  std::size_t first_index = 0;
  for (std::size_t k = 0; k < verdicts.size(); ++k) {
    checks += verdicts[k].checks;
    if (!verdicts[k].pass) {
      if (!first) {
        first = &verdicts[k];
        first_index = k;
      }
      ++failures;
    }
  }
  Json json{{"property", o.property},  {"mechanism", o.mechanism}, {"instances", instances.size()},
            {"seed", common.seed},     {"checks", checks},         {"failures", failures},
            {"pass", failures == 0}};
  std::string text = o.property + " on " + std::to_string(instances.size()) + " instances: " +
                     (failures == 0 ? "pass" : std::to_string(failures) + " failures");
  if (first) {
    json["first_failure"] = {{"instance", first_index}, {"verdict", to_json(*first)}};
    text += "\n" + verdict_text(*first);
  }
  emit(out, json, text, common.text);
  return failures == 0 ? kOk : kPropertyFailed;
}

// ----------------------------------------------------------------- certify

struct CertifyOptions {
  std::string name;
  std::string a = "8,16,32";
  std::string tol = "1/1000000";
  std::string mechanism = "vcg";
  std::size_t m = 3;
  std::string c = "3/2";
  std::string eps = "1/2";
  std::string rule;
  std::string k = "3";
  std::string jobs = "2,1";
  std::string samples_a;
  std::size_t samples = 1000;
  std::string grid = "1,2";
  std::size_t machines = 2;
};

int cmd_certify(const CertifyOptions& o, const Common& common, std::ostream& out) {
  CertificateReport report;
  std::optional<Json> extra;
  if (o.name == "theorem5") {
    report = theorem5_certificate(parse_rationals(o.a));
  } else if (o.name == "theorem7") {
    report = theorem7_certificate(Rational::parse(o.tol));
  } else if (o.name == "theorem1") {
    report = theorem1_harness(resolve_mechanism(o.mechanism), o.m, Rational::parse(o.c), Rational::parse(o.eps));
  } else if (o.name == "lemma6") {
    const AllocationRule rule = resolve_rule(o.rule.empty() ? "two-opt" : o.rule, common);
    const Rationals jobs = parse_rationals(o.jobs);
    const Rationals a = o.samples_a.empty() ? Rationals{} : parse_rationals(o.samples_a);
    report = lemma6_g(rule, Rational::parse(o.k), jobs, a).second;
  } else if (o.name == "prop12") {
    report = prop12_verify(o.samples, common.seed_given ? common.seed : 1);
  } else if (o.name == "polytope") {
    const AllocationRule rule = resolve_rule(o.rule.empty() ? "vcg" : o.rule, common);
    FeasibilityResult result;
    report = polytope_report(rule, parse_rationals(o.grid), parse_rationals(o.jobs), o.machines, &result);
    // Feasible or not, a self-consistent verdict is a successful run.
    extra = to_json(result);
  } else {
    throw UsageError("unknown certificate '" + o.name +
                     "' (known: theorem5, theorem7, theorem1, lemma6, prop12, polytope)");
  }
  Json json = to_json(report);
  if (extra) json["feasibility"] = *extra;
  emit(out, json, render_text(report), common.text);
  return report.verified ? kOk : kPropertyFailed;
}

// ------------------------------------------------------------------- curve

struct CurveOptions {
  std::string rule;
  std::string others;
  std::string jobs;
  std::string cap;
  std::size_t position = 0;
};

int cmd_curve(const CurveOptions& o, const Common& common, std::ostream& out) {
  const AllocationRule rule = resolve_rule(o.rule, common);
  const Rationals others = parse_rationals(o.others);
  const Rationals jobs = parse_rationals(o.jobs);
  if (rule.randomized()) {
    const PiecewiseCurve curve = expected_workcurve(rule, others, jobs, o.position);
    Json json = to_json(curve);
    std::string text;
    for (const auto& p : curve.pieces) {
      text += "(" + p.lo.str() + ", " + (p.hi ? p.hi->str() : "inf") + "]: " + kind_name(p.form.normalized().kind()) +
              "\n";
    }
    if (!curve.divergent()) {
      const LogLinear area = integrate(curve, Rational(0), std::nullopt);
      json["integral"] = to_json(area);
      text += "integral ~ " + std::to_string(area.approx()) + "\n";
    }
    emit(out, json, text, common.text);
    return kOk;
  }
  Rational cap;
  if (!o.cap.empty()) {
    cap = Rational::parse(o.cap);
  } else {
    Rational top(1);
    for (const auto& b : others) top = max(top, b);
    Rational total(0);
    Rational shortest = jobs.empty() ? Rational(1) : jobs[0];
    for (const auto& l : jobs) {
      total += l;
      shortest = min(shortest, l);
    }
    cap = 4 * rounded_speed(top) * total / shortest;
  }
  const WorkCurve curve = build_workcurve(rule, others, jobs, cap, o.position);
  Json json = to_json(curve);
  std::string text = "breakpoints";
  for (const auto& b : curve.breakpoints()) text += " " + b.str();
  text += "\nvalues";
  for (const auto& v : curve.values()) text += " " + v.str();
  text += "\ntail " + curve.tail().str() + "\n";
  if (!curve.truncated()) {
    const Rational area = integrate(curve, Rational(0), std::nullopt);
    json["integral"] = to_json(area);
    text += "integral " + area.str() + "\n";
  }
  emit(out, json, text, common.text);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact tools for strategic scheduling on related machines", "qmech"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "Random seed");
    sub->add_option("--budget", common.budget, "Search-node budget for exact OPT");
    sub->add_flag("--text", common.text, "Human-readable output instead of JSON");
  };

  std::string rule_name, instance_path;
  auto* allocate = app.add_subcommand("allocate", "Run an allocation rule on an instance file");
  allocate->add_option("rule", rule_name, "lpt-star, at-expected, at-sample, vcg, opt or two-opt")->required();
  allocate->add_option("instance", instance_path, "Instance JSON file")->required();
  add_common(allocate);

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Check a mechanism property");
  check_cmd->add_option("property", check.property, "le, ef, ir, truthful, monotone, anonymous, scalable, ratio")
      ->required();
  check_cmd->add_option("mechanism", check.mechanism, "Mechanism or rule name");
  check_cmd->add_option("instance", check.instance_path, "Instance JSON file");
  check_cmd->add_option("--random", check.random, "Number of random instances");
  check_cmd->add_option("--max-machines", check.max_machines, "Largest m for random instances");
  check_cmd->add_option("--max-jobs", check.max_jobs, "Largest n for random instances");
  check_cmd->add_option("--grid", check.grid, "Deviation grid, comma-separated rationals");
  check_cmd->add_option("--scalars", check.scalars, "Scaling factors for the scalability check");
  check_cmd->add_option("--workloads", check.workloads, "Workloads for a direct check");
  check_cmd->add_option("--bids", check.bids, "Bids for a direct check");
  check_cmd->add_option("--payments", check.payments, "Payments for a direct check");
  check_cmd->add_option("--theorem1", check.theorem1, "Lower-bound instance, e.g. m=3 c=3/2");
  check_cmd->add_option("--jobs-parallel", check.parallel, "Worker threads for batch checks");
  check_cmd->add_flag("--csv", check.csv, "CSV ratio table (rule,m,n,ratio)");
  add_common(check_cmd);

  CertifyOptions cert;
  auto* certify = app.add_subcommand("certify", "Produce a certificate report");
  certify->add_option("name", cert.name, "theorem5, theorem7, theorem1, lemma6, prop12 or polytope")->required();
  certify->add_option("--a", cert.a, "Powers of two for theorem5");
  certify->add_option("--tol", cert.tol, "Enclosure width for theorem7");
  certify->add_option("--mechanism", cert.mechanism, "Mechanism for theorem1");
  certify->add_option("--m", cert.m, "Machines for theorem1");
  certify->add_option("--c", cert.c, "Target ratio for theorem1");
  certify->add_option("--eps", cert.eps, "Epsilon for theorem1");
  certify->add_option("--rule", cert.rule, "Allocation rule for lemma6 and polytope");
  certify->add_option("--k", cert.k, "k for lemma6");
  certify->add_option("--jobs", cert.jobs, "Job lengths for lemma6 and polytope");
  certify->add_option("--at", cert.samples_a, "Sample values of a for lemma6");
  certify->add_option("--samples", cert.samples, "Random instances for prop12");
  certify->add_option("--grid", cert.grid, "Bid grid for polytope");
  certify->add_option("--machines", cert.machines, "Machines for polytope");
  add_common(certify);

  CurveOptions curve;
  auto* curve_cmd = app.add_subcommand("curve", "Workload of one machine as a function of its own bid");
  curve_cmd->add_option("rule", curve.rule, "Allocation rule")->required();
  curve_cmd->add_option("--others", curve.others, "Other machines' bids")->required();
  curve_cmd->add_option("--jobs", curve.jobs, "Job lengths")->required();
  curve_cmd->add_option("--cap", curve.cap, "Largest own bid to resolve");
  curve_cmd->add_option("--position", curve.position, "Index of the varying machine");
  add_common(curve_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  for (auto* sub : {allocate, check_cmd, certify, curve_cmd}) {
    if (sub->parsed() && sub->count("--seed") > 0) common.seed_given = true;
  }

  try {
    if (allocate->parsed()) return cmd_allocate(rule_name, instance_path, common, out);
    if (check_cmd->parsed()) return cmd_check(check, common, out);
    if (certify->parsed()) return cmd_certify(cert, common, out);
    if (curve_cmd->parsed()) return cmd_curve(curve, common, out);
  } catch (const ResourceError& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const NotTruthfulEvidence& e) {
    err << "not truthful: " << e.what() << '\n';
    return kPropertyFailed;
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const DimensionError& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kPropertyFailed;
  }
  return kUsage;
}

}  // namespace qmech::cli
