#include "qmech/json_io.hpp"

#include <fstream>

#include "qmech/errors.hpp"

namespace qmech {

Json to_json(const Rational& value) { return value.str(); }

Json to_json(const Rationals& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(v.str());
  return out;
}

Rational rational_from_json(const Json& value) {
  if (value.is_string()) return Rational::parse(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
  throw ParseError("expected a rational string, got " + value.dump());
}

Rationals rationals_from_json(const Json& value) {
  if (!value.is_array()) throw ParseError("expected an array of rationals, got " + value.dump());
  Rationals out;
  for (const auto& v : value) out.push_back(rational_from_json(v));
  return out;
}

InstanceFile parse_instance_file(const Json& document) {
  if (!document.is_object()) throw ParseError("instance file must be a JSON object");
  if (!document.contains("jobs") || !document.contains("bids")) {
    throw ParseError("instance file needs \"jobs\" and \"bids\"");
  }
  InstanceFile file{rationals_from_json(document.at("jobs")), rationals_from_json(document.at("bids")), std::nullopt};
  if (document.contains("seed")) {
    const auto& s = document.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      throw ParseError("seed must be a nonnegative integer");
    }
    file.seed = s.get<std::uint64_t>();
  }
  return file;
}

InstanceFile load_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  Json document;
  try {
    document = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return parse_instance_file(document);
}

Json to_json(const Instance& instance, const Allocation& allocation) {
  Json out;
  out["jobs"] = to_json(instance.jobs());
  out["bids"] = to_json(instance.bids());
  if (const auto* a = std::get_if<Assignment>(&allocation)) {
    Json map = Json::array();
    for (auto machine : a->job_to_machine()) map.push_back(machine);
    out["assignment"] = std::move(map);
    out["workloads"] = to_json(a->workloads());
    out["makespan"] = to_json(makespan(*a, instance.bids()));
  } else {
    const auto& e = std::get<ExpectedAllocation>(allocation);
    Json dists = Json::array();
    for (const auto& d : e.job_distributions()) {
      Json entry = Json::object();
      for (const auto& [machine, p] : d) entry[std::to_string(machine)] = to_json(p);
      dists.push_back(std::move(entry));
    }
    out["job_distributions"] = std::move(dists);
    out["expected_workloads"] = to_json(e.expected_workloads());
  }
  return out;
}

Json to_json(const WorkCurve& curve) {
  return Json{{"breakpoints", to_json(curve.breakpoints())},
              {"values", to_json(curve.values())},
              {"tail", to_json(curve.tail())},
              {"cap", to_json(curve.cap())},
              {"truncated", curve.truncated()},
              {"approximate", curve.approximate()}};
}

Json to_json(const PiecewiseCurve& curve) {
  Json pieces = Json::array();
  for (const auto& p : curve.pieces) {
    const Mobius f = p.form.normalized();
    Json form{{"kind", kind_name(f.kind())}};
    switch (f.kind()) {
      case Mobius::Kind::kConst:
        form["value"] = to_json(f.a / f.c);
        break;
      case Mobius::Kind::kRecip:
        form["numerator"] = to_json(f.a / f.d);
        break;
      case Mobius::Kind::kAffine:
        form["intercept"] = to_json(f.a / f.c);
        form["slope"] = to_json(f.b / f.c);
        break;
      case Mobius::Kind::kMobius:
        form["a"] = to_json(f.a);
        form["b"] = to_json(f.b);
        form["c"] = to_json(f.c);
        form["d"] = to_json(f.d);
        break;
    }
    pieces.push_back(Json{{"lo", to_json(p.lo)}, {"hi", p.hi ? to_json(*p.hi) : Json(nullptr)}, {"form", form}});
  }
  return Json{{"pieces", pieces}, {"divergent", curve.divergent()}};
}

Json to_json(const LogLinear& value) {
  Json logs = Json::array();
  for (const auto& [arg, coef] : value.log_terms) logs.push_back(Json{{"coefficient", to_json(coef)}, {"ln", to_json(arg)}});
  return Json{{"rational", to_json(value.rational_part)}, {"logs", logs}, {"approx", value.approx()}};
}

Json to_json(const Counterexample& example) {
  Json out{{"machine", example.machine},
           {"description", example.description},
           {"lhs", to_json(example.lhs)},
           {"relation", relation_symbol(example.required)},
           {"rhs", to_json(example.rhs)}};
  if (!example.jobs.empty()) out["jobs"] = to_json(example.jobs);
  out["bids"] = to_json(example.bids);
  if (!example.workloads.empty()) out["workloads"] = to_json(example.workloads);
  if (!example.payments.empty()) out["payments"] = to_json(example.payments);
  if (example.other_bids) out["other_bids"] = to_json(*example.other_bids);
  if (!example.permutation.empty()) out["permutation"] = example.permutation;
  return out;
}

Json to_json(const PropertyVerdict& verdict) {
  Json out{{"property", verdict.property}, {"pass", verdict.pass}, {"checks", verdict.checks}};
  if (verdict.counterexample) out["counterexample"] = to_json(*verdict.counterexample);
  return out;
}

Json to_json(const CertificateReport& report) {
  Json inputs = Json::object();
  for (const auto& [k, v] : report.inputs) inputs[k] = v;
  Json constants = Json::object();
  for (const auto& [k, v] : report.constants) constants[k] = to_json(v);
  Json symbolic = Json::object();
  for (const auto& [k, v] : report.symbolic) symbolic[k] = to_json(v);
  Json inequalities = Json::array();
  for (const auto& q : report.inequalities) {
    inequalities.push_back(Json{{"label", q.label},
                                {"lhs", to_json(q.lhs)},
                                {"relation", relation_symbol(q.relation)},
                                {"rhs", to_json(q.rhs)},
                                {"holds", q.holds()}});
  }
  return Json{{"name", report.name},   {"verified", report.verified}, {"inputs", inputs},
              {"constants", constants}, {"symbolic", symbolic},       {"inequalities", inequalities},
              {"notes", report.notes}};
}

Json to_json(const FeasibilityResult& result) {
  Json out{{"feasible", result.feasible},
           {"verified", result.verified},
           {"profiles", result.profiles.size()},
           {"constraints", result.problem.constraints.size()}};
  if (result.feasible) {
    Json witness = Json::array();
    for (std::size_t k = 0; k < result.profiles.size(); ++k) {
      witness.push_back(Json{{"bids", to_json(result.profiles[k])},
                             {"workloads", to_json(result.workloads[k])},
                             {"payments", to_json(result.payments_at(k))}});
    }
    out["witness"] = std::move(witness);
  } else {
    Json subset = Json::array();
    for (std::size_t r : result.infeasible_subset) subset.push_back(result.problem.constraints[r].label);
    out["infeasible_subset"] = std::move(subset);
  }
  return out;
}

}  // namespace qmech
