#pragma once

#include <nlohmann/json.hpp>

#include "driftnet/maturity/drift_network.hpp"
#include "driftnet/maturity/framework.hpp"

namespace driftnet::maturity {

/// Framework + weights + drift catalogue, the document read by `build`.
struct FrameworkConfig {
  MaturityFramework framework;
  AggregationWeights weights;
  std::vector<DriftFactorSpec> drift_factors;

  std::vector<std::string> drift_ids() const;
};

// All *_from_json functions throw FormatError on schema problems.

nlohmann::json to_json(const MaturityFramework& fw);
MaturityFramework framework_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const FrameworkConfig& config);
FrameworkConfig framework_config_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const DriftFactorSpec& spec);

/// {"assessor", "date", "answers": {"MR/Social/LV3": "Yes", ...}}. Unknown or
/// malformed keys surface as InputError("unknown question") when validated
/// against a framework; malformed answers are InputError as well.
nlohmann::json to_json(const Assessment& a);
Assessment assessment_from_json(const nlohmann::json& doc);

/// Network document plus "layout" and "provenance" sections.
nlohmann::json to_json(const DriftNetwork& net);
DriftNetwork drift_network_from_json(const nlohmann::json& doc);

}  // namespace driftnet::maturity
