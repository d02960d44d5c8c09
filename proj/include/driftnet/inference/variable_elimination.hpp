#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "driftnet/bn/network.hpp"

namespace driftnet::inference {

/// Variables to sum out, in order. Never contains the query or an observed
/// variable; covers every other variable exactly once.
struct EliminationPlan {
  std::vector<std::string> order;

  bool operator==(const EliminationPlan&) const = default;
};

/// Greedy min-fill order over the moral graph, with observed variables
/// removed before ordering. Ties go to the lexicographically smallest id.
EliminationPlan elimination_order(const bn::Network& net, std::string_view query,
                                  const bn::Evidence& evidence);

/// Children-before-parents order over the unobserved, non-query variables.
EliminationPlan reverse_topological_plan(const bn::Network& net, std::string_view query,
                                         const bn::Evidence& evidence);

/// Exact P(query | evidence) by variable elimination under a min-fill plan.
/// Throws ImpossibleEvidence when the evidence has probability zero and
/// InputError for invalid networks or a query bound in the evidence.
bn::Distribution posterior(const bn::Network& net, std::string_view query,
                           const bn::Evidence& evidence);

/// Same, with a caller-supplied plan (checked against the plan invariants).
bn::Distribution posterior(const bn::Network& net, std::string_view query,
                           const bn::Evidence& evidence, const EliminationPlan& plan);

/// P(evidence) under the model, by eliminating every unobserved variable.
double evidence_probability(const bn::Network& net, const bn::Evidence& evidence);

}  // namespace driftnet::inference
