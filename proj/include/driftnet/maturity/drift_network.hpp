#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "driftnet/bn/network.hpp"
#include "driftnet/maturity/framework.hpp"

namespace driftnet::maturity {

/// Which node plays which role in an assembled maturity/drift/overcost
/// network.
struct DriftLayout {
  int levels = 5;
  /// Maturity questions that have a node, in network order.
  std::vector<QuestionKey> maturity;
  std::vector<DriftFactorSpec> drifts;
  std::string overcost{kOvercostNode};

  std::size_t node_count() const { return maturity.size() + drifts.size() + 1; }
  /// Node ids of the level-1..level-L parents of a drift.
  std::vector<std::string> maturity_parents(const DriftFactorSpec& drift) const;
  std::vector<std::string> drift_nodes() const;
  bool operator==(const DriftLayout&) const = default;
};

struct DriftNetwork {
  bn::Network network;
  DriftLayout layout;
  /// Free-form metadata carried along with the network file (hashes,
  /// learning settings).
  nlohmann::json provenance = nlohmann::json::object();
  /// Framework the network was built from; assessments are checked against it.
  MaturityFramework framework;
};

/// Node roles for a set of drift specs without materializing any table.
/// Maturity nodes are keyed by (cell, domain, level) and shared by drifts that
/// map to the same (cell, domain). Throws InputError for specs referencing
/// domains outside the framework or repeated drift ids.
DriftLayout plan_layout(const MaturityFramework& fw, const std::vector<DriftFactorSpec>& drifts);

/// Maturity roots with uniform priors, one synthetic drift node per spec with
/// the weight-derived CPT, and the overcost node with `target_cpt`, whose
/// parents must be the drift nodes in spec order.
DriftNetwork build_network(const MaturityFramework& fw, const std::vector<DriftFactorSpec>& drifts,
                           const AggregationWeights& weights, const bn::Variable& target,
                           const bn::Cpt& target_cpt);

}  // namespace driftnet::maturity
