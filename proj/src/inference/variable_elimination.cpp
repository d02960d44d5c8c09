#include "driftnet/inference/variable_elimination.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "driftnet/error.hpp"
#include "driftnet/inference/factor.hpp"

namespace driftnet::inference {

namespace {

void check_query(const bn::Network& net, std::string_view query, const bn::Evidence& evidence) {
  if (!net.index_of(query)) throw InputError(fmt::format("unknown query variable '{}'", query));
  if (evidence.contains(query)) {
    throw InputError(fmt::format("query variable '{}' is bound in the evidence", query));
  }
}

std::vector<bool> observed_mask(const bn::Network& net, const bn::Evidence& evidence) {
  std::vector<bool> observed(net.size(), false);
  for (auto [var, state] : bn::resolve_evidence(net, evidence)) observed[var] = true;
  return observed;
}

// Moral graph restricted to unobserved variables.
std::vector<std::set<std::size_t>> moral_graph(const bn::Network& net,
                                               const std::vector<bool>& observed) {
  std::vector<std::set<std::size_t>> adj(net.size());
  for (const auto& cpt : net.cpts()) {
    std::vector<std::size_t> family;
    for (const auto& p : cpt.parents) family.push_back(*net.index_of(p));
    family.push_back(*net.index_of(cpt.child));
    for (std::size_t i = 0; i < family.size(); ++i) {
      for (std::size_t j = i + 1; j < family.size(); ++j) {
        const auto a = family[i], b = family[j];
        if (observed[a] || observed[b] || a == b) continue;
        adj[a].insert(b);
        adj[b].insert(a);
      }
    }
  }
  return adj;
}

std::size_t fill_in(const std::vector<std::set<std::size_t>>& adj, std::size_t v) {
  std::size_t missing = 0;
  for (auto it = adj[v].begin(); it != adj[v].end(); ++it) {
    for (auto jt = std::next(it); jt != adj[v].end(); ++jt) {
      if (!adj[*it].contains(*jt)) ++missing;
    }
  }
  return missing;
}

void check_plan(const bn::Network& net, std::string_view query, const bn::Evidence& evidence,
                const EliminationPlan& plan) {
  std::set<std::string_view> seen;
  for (const auto& id : plan.order) {
    if (!net.index_of(id)) throw InputError(fmt::format("plan names unknown variable '{}'", id));
    if (id == query) throw InputError("plan eliminates the query variable");
    if (evidence.contains(id)) throw InputError(fmt::format("plan eliminates observed '{}'", id));
    if (!seen.insert(id).second) throw InputError(fmt::format("plan repeats '{}'", id));
  }
  const std::size_t expected = net.size() - 1 - evidence.size();
  if (seen.size() != expected) {
    throw InputError(fmt::format("plan covers {} variables, expected {}", seen.size(), expected));
  }
}

std::vector<Factor> reduced_factors(const bn::Network& net, const bn::Evidence& evidence) {
  std::vector<Factor> factors;
  factors.reserve(net.cpts().size());
  for (const auto& cpt : net.cpts()) {
    factors.push_back(factor_reduce(Factor::from_cpt(net, cpt), evidence));
  }
  return factors;
}

// Sums out each planned variable; returns the product of what remains.
Factor eliminate(std::vector<Factor> factors, const std::vector<std::string>& order) {
  for (const auto& var : order) {
    Factor joint;
    bool touched = false;
    std::vector<Factor> rest;
    rest.reserve(factors.size());
    for (auto& f : factors) {
      if (f.contains(var)) {
        joint = touched ? factor_product(joint, f) : std::move(f);
        touched = true;
      } else {
        rest.push_back(std::move(f));
      }
    }
    factors = std::move(rest);
    if (touched) factors.push_back(factor_marginalize(joint, var));
  }
  Factor result;
  for (const auto& f : factors) result = factor_product(result, f);
  return result;
}

// Min-fill over unobserved variables other than `keep` (SIZE_MAX: none).
EliminationPlan min_fill(const bn::Network& net, const std::vector<bool>& observed,
                         std::size_t keep) {
  auto adj = moral_graph(net, observed);
  std::vector<std::size_t> remaining;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (!observed[i] && i != keep) remaining.push_back(i);
  }

  EliminationPlan plan;
  plan.order.reserve(remaining.size());
  while (!remaining.empty()) {
    std::size_t best = 0;
    std::size_t best_fill = SIZE_MAX;
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      const auto v = remaining[k];
      const auto fill = fill_in(adj, v);
      if (fill < best_fill ||
          (fill == best_fill && net.variables()[v].id() < net.variables()[remaining[best]].id())) {
        best = k;
        best_fill = fill;
      }
    }
    const auto v = remaining[best];
    for (auto a : adj[v]) {
      for (auto b : adj[v]) {
        if (a != b) adj[a].insert(b);
      }
      adj[a].erase(v);
    }
    adj[v].clear();
    plan.order.push_back(net.variables()[v].id());
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return plan;
}

bn::Distribution run_posterior(const bn::Network& net, std::string_view query,
                               const bn::Evidence& evidence, const EliminationPlan& plan) {
  const Factor result = eliminate(reduced_factors(net, evidence), plan.order);
  const bn::Variable& qv = net.variable(query);
  if (result.scope().size() != 1 || result.scope().front().id() != qv.id()) {
    throw std::logic_error("elimination left an unexpected scope");
  }
  const double total = result.total();
  if (!(total > 0.0)) throw ImpossibleEvidence();
  std::vector<double> probs = result.values();
  for (double& p : probs) p /= total;
  return {qv.id(), qv.states(), std::move(probs)};
}

}  // namespace

EliminationPlan elimination_order(const bn::Network& net, std::string_view query,
                                  const bn::Evidence& evidence) {
  check_query(net, query, evidence);
  return min_fill(net, observed_mask(net, evidence), *net.index_of(query));
}

EliminationPlan reverse_topological_plan(const bn::Network& net, std::string_view query,
                                         const bn::Evidence& evidence) {
  check_query(net, query, evidence);
  const auto observed = observed_mask(net, evidence);
  auto order = bn::topological_order(net);
  EliminationPlan plan;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& id = net.variables()[*it].id();
    if (!observed[*it] && id != query) plan.order.push_back(id);
  }
  return plan;
}

bn::Distribution posterior(const bn::Network& net, std::string_view query,
                           const bn::Evidence& evidence) {
  bn::require_valid(net);
  return run_posterior(net, query, evidence, elimination_order(net, query, evidence));
}

bn::Distribution posterior(const bn::Network& net, std::string_view query,
                           const bn::Evidence& evidence, const EliminationPlan& plan) {
  bn::require_valid(net);
  check_query(net, query, evidence);
  check_plan(net, query, evidence, plan);
  return run_posterior(net, query, evidence, plan);
}

double evidence_probability(const bn::Network& net, const bn::Evidence& evidence) {
  bn::require_valid(net);
  const auto plan = min_fill(net, observed_mask(net, evidence), SIZE_MAX);
  return eliminate(reduced_factors(net, evidence), plan.order).total();
}

}  // namespace driftnet::inference
