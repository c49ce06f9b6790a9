#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "qmech/certificates.hpp"
#include "qmech/expected_curve.hpp"
#include "qmech/model.hpp"
#include "qmech/polytope.hpp"
#include "qmech/properties.hpp"
#include "qmech/workcurve.hpp"

namespace qmech {

using Json = nlohmann::ordered_json;

// Rationals travel as strings ("p", "p/q" or a finite decimal). Integer JSON
// numbers are accepted on input; floating-point numbers are rejected.
Json to_json(const Rational& value);
Json to_json(const Rationals& values);
Rational rational_from_json(const Json& value);
Rationals rationals_from_json(const Json& value);

struct InstanceFile {
  Rationals jobs;
  Rationals bids;
  std::optional<std::uint64_t> seed;

  Instance instance() const { return Instance(jobs, bids); }
};

InstanceFile parse_instance_file(const Json& document);
InstanceFile load_instance_file(const std::filesystem::path& path);

Json to_json(const Instance& instance, const Allocation& allocation);
Json to_json(const WorkCurve& curve);
Json to_json(const PiecewiseCurve& curve);
Json to_json(const LogLinear& value);
Json to_json(const Counterexample& example);
Json to_json(const PropertyVerdict& verdict);
Json to_json(const CertificateReport& report);
Json to_json(const FeasibilityResult& result);

}  // namespace qmech
