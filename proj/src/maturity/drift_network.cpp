#include "driftnet/maturity/drift_network.hpp"

#include <set>

#include <fmt/format.h>

#include "driftnet/error.hpp"

namespace driftnet::maturity {

std::vector<std::string> DriftLayout::maturity_parents(const DriftFactorSpec& drift) const {
  std::vector<std::string> out;
  for (int level = 1; level <= levels; ++level) {
    out.push_back(maturity_node_id({drift.cell, drift.domain, level}));
  }
  return out;
}

std::vector<std::string> DriftLayout::drift_nodes() const {
  std::vector<std::string> out;
  for (const auto& d : drifts) out.push_back(drift_node_id(d.id));
  return out;
}

DriftLayout plan_layout(const MaturityFramework& fw, const std::vector<DriftFactorSpec>& drifts) {
  DriftLayout layout;
  layout.levels = fw.levels();
  std::set<QuestionKey> seen;
  std::set<std::string> ids;
  for (const auto& d : drifts) {
    if (d.id.empty()) throw InputError("drift factor with empty id");
    if (!ids.insert(d.id).second) throw InputError(fmt::format("duplicate drift id '{}'", d.id));
    if (!fw.has_domain(d.domain)) {
      throw InputError(fmt::format("drift '{}' references unknown domain '{}'", d.id, d.domain));
    }
    for (const auto& key : fw.ladder(d.cell, d.domain)) {
      if (seen.insert(key).second) layout.maturity.push_back(key);
    }
    layout.drifts.push_back(d);
  }
  return layout;
}

DriftNetwork build_network(const MaturityFramework& fw, const std::vector<DriftFactorSpec>& drifts,
                           const AggregationWeights& weights, const bn::Variable& target,
                           const bn::Cpt& target_cpt) {
  DriftLayout layout = plan_layout(fw, drifts);
  layout.overcost = target.id();
  if (target_cpt.child != target.id()) {
    throw InputError(fmt::format("target CPT is for '{}', not '{}'", target_cpt.child, target.id()));
  }
  if (target_cpt.parents != layout.drift_nodes()) {
    throw InputError("target CPT parents must be exactly the drift nodes in listed order");
  }

  std::vector<bn::Variable> vars;
  std::vector<bn::Cpt> cpts;
  vars.reserve(layout.node_count());
  cpts.reserve(layout.node_count());
  for (const auto& key : layout.maturity) {
    const auto id = maturity_node_id(key);
    vars.emplace_back(id, kMaturityStates);
    cpts.push_back({id, {}, {{0.5, 0.5}}});
  }
  for (const auto& d : layout.drifts) {
    const auto id = drift_node_id(d.id);
    vars.emplace_back(id, kDriftStates);
    cpts.push_back(drift_cpt_from_weights(weights, id, layout.maturity_parents(d)));
  }
  vars.push_back(target);
  cpts.push_back(target_cpt);

  DriftNetwork out{bn::Network(std::move(vars), std::move(cpts)), std::move(layout), {}, fw};
  bn::require_valid(out.network);
  return out;
}

}  // namespace driftnet::maturity
