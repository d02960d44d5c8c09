#include "driftnet/bn/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include <fmt/format.h>

#include "driftnet/error.hpp"

namespace driftnet::bn {

Variable::Variable(std::string id, std::vector<std::string> states)
    : id_(std::move(id)), states_(std::move(states)) {
  if (id_.empty()) throw InputError("variable id must not be empty");
  if (states_.size() < 2) {
    throw InputError(fmt::format("variable '{}' needs at least two states", id_));
  }
  std::set<std::string_view> seen;
  for (const auto& s : states_) {
    if (!seen.insert(s).second) {
      throw InputError(fmt::format("variable '{}' has duplicate state '{}'", id_, s));
    }
  }
}

std::optional<std::size_t> Variable::find_state(std::string_view label) const {
  auto it = std::find(states_.begin(), states_.end(), label);
  if (it == states_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

std::size_t Variable::state_index(std::string_view label) const {
  if (auto idx = find_state(label)) return *idx;
  throw InputError(fmt::format("'{}' is not a state of variable '{}'", label, id_));
}

Network::Network(std::vector<Variable> variables, std::vector<Cpt> cpts)
    : variables_(std::move(variables)), cpts_(std::move(cpts)) {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (!index_.emplace(variables_[i].id(), i).second) {
      throw InputError(fmt::format("duplicate variable id '{}'", variables_[i].id()));
    }
  }
  for (std::size_t i = 0; i < cpts_.size(); ++i) cpt_index_.emplace(cpts_[i].child, i);
}

std::optional<std::size_t> Network::index_of(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Variable* Network::find_variable(std::string_view id) const {
  auto idx = index_of(id);
  return idx ? &variables_[*idx] : nullptr;
}

const Variable& Network::variable(std::string_view id) const {
  if (const auto* v = find_variable(id)) return *v;
  throw InputError(fmt::format("unknown variable '{}'", id));
}

const Cpt* Network::find_cpt(std::string_view id) const {
  auto it = cpt_index_.find(id);
  return it == cpt_index_.end() ? nullptr : &cpts_[it->second];
}

const Cpt& Network::cpt(std::string_view id) const {
  if (const auto* c = find_cpt(id)) return *c;
  throw InputError(fmt::format("no CPT for variable '{}'", id));
}

Evidence::Evidence(std::initializer_list<Bindings::value_type> bindings) {
  for (const auto& [var, state] : bindings) bind(var, state);
}

void Evidence::bind(std::string variable, std::string state) {
  auto [it, inserted] = bindings_.emplace(std::move(variable), state);
  if (!inserted && it->second != state) {
    throw InputError(fmt::format("variable '{}' already bound to '{}'", it->first, it->second));
  }
}

const std::string* Evidence::find(std::string_view variable) const {
  auto it = bindings_.find(variable);
  return it == bindings_.end() ? nullptr : &it->second;
}

std::vector<std::pair<std::size_t, std::size_t>> resolve_evidence(const Network& net,
                                                                  const Evidence& evidence) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(evidence.size());
  for (const auto& [var, state] : evidence.bindings()) {
    auto idx = net.index_of(var);
    if (!idx) throw InputError(fmt::format("evidence on unknown variable '{}'", var));
    out.emplace_back(*idx, net.variables()[*idx].state_index(state));
  }
  return out;
}

double Distribution::probability(std::string_view state) const {
  auto it = std::find(states.begin(), states.end(), state);
  if (it == states.end()) {
    throw InputError(fmt::format("'{}' is not a state of '{}'", state, variable));
  }
  return probabilities[static_cast<std::size_t>(it - states.begin())];
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Cycle: return "cycle";
    case ViolationKind::MissingCpt: return "missing-cpt";
    case ViolationKind::DuplicateCpt: return "duplicate-cpt";
    case ViolationKind::UnknownChild: return "unknown-child";
    case ViolationKind::DanglingParent: return "dangling-parent";
    case ViolationKind::DuplicateParent: return "duplicate-parent";
    case ViolationKind::DimensionMismatch: return "dimension-mismatch";
    case ViolationKind::ProbabilityRange: return "probability-range";
    case ViolationKind::RowSum: return "row-sum";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind kind, std::string_view variable) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) {
    return v.kind == kind && (variable.empty() || v.variable == variable);
  });
}

namespace {

// Parent indices per variable, using only parents that resolve. Entries for
// variables without a CPT stay empty.
std::vector<std::vector<std::size_t>> parent_lists(const Network& net) {
  std::vector<std::vector<std::size_t>> parents(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    const Cpt* cpt = net.find_cpt(net.variables()[i].id());
    if (!cpt) continue;
    for (const auto& p : cpt->parents) {
      if (auto idx = net.index_of(p)) parents[i].push_back(*idx);
    }
  }
  return parents;
}

void find_cycles(const Network& net, ValidationReport& report) {
  const auto parents = parent_lists(net);
  std::vector<std::vector<std::size_t>> children(net.size());
  for (std::size_t c = 0; c < net.size(); ++c) {
    for (auto p : parents[c]) children[p].push_back(c);
  }

  enum class Mark { White, Grey, Black };
  std::vector<Mark> mark(net.size(), Mark::White);
  std::vector<std::size_t> stack;

  std::function<void(std::size_t)> dfs = [&](std::size_t u) {
    mark[u] = Mark::Grey;
    stack.push_back(u);
    for (auto v : children[u]) {
      if (mark[v] == Mark::Grey) {
        auto start = std::find(stack.begin(), stack.end(), v);
        std::string path;
        for (auto it = start; it != stack.end(); ++it) {
          path += net.variables()[*it].id() + " -> ";
        }
        path += net.variables()[v].id();
        report.violations.push_back(
            {net.variables()[v].id(), ViolationKind::Cycle, "cycle: " + path});
      } else if (mark[v] == Mark::White) {
        dfs(v);
      }
    }
    stack.pop_back();
    mark[u] = Mark::Black;
  };
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (mark[i] == Mark::White) dfs(i);
  }
}

void check_cpt(const Network& net, const Cpt& cpt, ValidationReport& report) {
  const Variable* child = net.find_variable(cpt.child);
  if (!child) {
    report.violations.push_back({cpt.child, ViolationKind::UnknownChild,
                                 fmt::format("CPT for unknown variable '{}'", cpt.child)});
    return;
  }

  std::size_t expected_rows = 1;
  bool parents_ok = true;
  std::set<std::string_view> seen;
  for (const auto& p : cpt.parents) {
    if (!seen.insert(p).second) {
      report.violations.push_back({cpt.child, ViolationKind::DuplicateParent,
                                   fmt::format("parent '{}' listed twice", p)});
      parents_ok = false;
      continue;
    }
    const Variable* parent = net.find_variable(p);
    if (!parent) {
      report.violations.push_back({cpt.child, ViolationKind::DanglingParent,
                                   fmt::format("parent '{}' does not exist", p)});
      parents_ok = false;
      continue;
    }
    expected_rows *= parent->cardinality();
  }

  if (parents_ok && cpt.rows.size() != expected_rows) {
    report.violations.push_back(
        {cpt.child, ViolationKind::DimensionMismatch,
         fmt::format("expected {} rows, found {}", expected_rows, cpt.rows.size())});
  }

  for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
    const auto& row = cpt.rows[r];
    if (row.size() != child->cardinality()) {
      report.violations.push_back(
          {cpt.child, ViolationKind::DimensionMismatch,
           fmt::format("row {} has {} columns, expected {}", r, row.size(), child->cardinality())});
      continue;
    }
    double sum = 0.0;
    bool in_range = true;
    for (double p : row) {
      if (!(p >= 0.0 && p <= 1.0)) in_range = false;
      sum += p;
    }
    if (!in_range) {
      report.violations.push_back({cpt.child, ViolationKind::ProbabilityRange,
                                   fmt::format("row {} has an entry outside [0,1]", r)});
    } else if (std::abs(sum - 1.0) > kRowSumTolerance) {
      report.violations.push_back(
          {cpt.child, ViolationKind::RowSum, fmt::format("row {} sums to {:.12g}", r, sum)});
    }
  }
}

}  // namespace

ValidationReport validate_network(const Network& net) {
  ValidationReport report;
  std::map<std::string_view, int> cpt_count;
  for (const auto& cpt : net.cpts()) ++cpt_count[cpt.child];

  for (const auto& v : net.variables()) {
    auto it = cpt_count.find(v.id());
    if (it == cpt_count.end()) {
      report.violations.push_back({v.id(), ViolationKind::MissingCpt, "variable has no CPT"});
    } else if (it->second > 1) {
      report.violations.push_back(
          {v.id(), ViolationKind::DuplicateCpt, fmt::format("{} CPTs for one variable", it->second)});
    }
  }
  for (const auto& cpt : net.cpts()) check_cpt(net, cpt, report);
  find_cycles(net, report);
  return report;
}

void require_valid(const Network& net) {
  const auto report = validate_network(net);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw InputError(fmt::format("invalid network: {} ({}): {}{}", v.variable, to_string(v.kind),
                                 v.message,
                                 report.violations.size() > 1
                                     ? fmt::format(" [+{} more]", report.violations.size() - 1)
                                     : std::string{}));
  }
}

std::vector<std::size_t> topological_order(const Network& net) {
  const auto parents = parent_lists(net);
  std::vector<std::size_t> indegree(net.size(), 0);
  std::vector<std::vector<std::size_t>> children(net.size());
  for (std::size_t c = 0; c < net.size(); ++c) {
    indegree[c] = parents[c].size();
    for (auto p : parents[c]) children[p].push_back(c);
  }
  auto by_id = [&](std::size_t a, std::size_t b) {
    return net.variables()[a].id() > net.variables()[b].id();
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_id)> ready(by_id);
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> order;
  order.reserve(net.size());
  while (!ready.empty()) {
    auto u = ready.top();
    ready.pop();
    order.push_back(u);
    for (auto c : children[u]) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  if (order.size() != net.size()) throw InputError("network contains a cycle");
  return order;
}

namespace {

// Flattened per-variable CPT access for repeated joint evaluations.
class JointEvaluator {
 public:
  explicit JointEvaluator(const Network& net) {
    families_.reserve(net.size());
    for (const auto& v : net.variables()) {
      Family fam{&net.cpt(v.id()), {}, {}};
      for (const auto& p : fam.cpt->parents) {
        const auto idx = *net.index_of(p);
        fam.parents.push_back(idx);
        fam.cards.push_back(net.variables()[idx].cardinality());
      }
      families_.push_back(std::move(fam));
    }
  }

  double operator()(const std::vector<std::size_t>& states) const {
    double product = 1.0;
    for (std::size_t i = 0; i < families_.size(); ++i) {
      const auto& fam = families_[i];
      std::size_t row = 0;
      for (std::size_t k = 0; k < fam.parents.size(); ++k) {
        row = row * fam.cards[k] + states[fam.parents[k]];
      }
      product *= fam.cpt->rows[row][states[i]];
      if (product == 0.0) break;
    }
    return product;
  }

 private:
  struct Family {
    const Cpt* cpt;
    std::vector<std::size_t> parents;
    std::vector<std::size_t> cards;
  };
  std::vector<Family> families_;
};

}  // namespace

double joint_probability(const Network& net, const std::vector<std::size_t>& states) {
  return JointEvaluator(net)(states);
}

double joint_probability(const Network& net, const Assignment& assignment) {
  std::vector<std::size_t> states(net.size());
  for (const auto& [var, state] : assignment) {
    if (!net.index_of(var)) throw InputError(fmt::format("unknown variable '{}'", var));
  }
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto& v = net.variables()[i];
    auto it = assignment.find(v.id());
    if (it == assignment.end()) throw InputError(fmt::format("variable '{}' is unbound", v.id()));
    states[i] = v.state_index(it->second);
  }
  return joint_probability(net, states);
}

namespace {

// Enumerates assignments with `fixed` variables pinned (SIZE_MAX = free).
void enumerate(const Network& net, const std::vector<std::size_t>& fixed,
               const std::function<void(const std::vector<std::size_t>&)>& visit,
               std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (fixed[i] != SIZE_MAX) continue;
    total *= net.variables()[i].cardinality();
    if (total > cap) {
      throw SizeError(fmt::format("state space exceeds {} configurations", cap));
    }
  }

  std::vector<std::size_t> states(net.size(), 0);
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (fixed[i] != SIZE_MAX) states[i] = fixed[i];
  }
  for (std::size_t n = 0; n < total; ++n) {
    visit(states);
    for (std::size_t k = net.size(); k-- > 0;) {
      if (fixed[k] != SIZE_MAX) continue;
      if (++states[k] < net.variables()[k].cardinality()) break;
      states[k] = 0;
    }
  }
}

}  // namespace

void for_each_assignment(const Network& net,
                         const std::function<void(const std::vector<std::size_t>&)>& visit,
                         std::size_t cap) {
  enumerate(net, std::vector<std::size_t>(net.size(), SIZE_MAX), visit, cap);
}

Distribution brute_force_posterior(const Network& net, std::string_view query,
                                   const Evidence& evidence) {
  require_valid(net);
  const auto q = net.index_of(query);
  if (!q) throw InputError(fmt::format("unknown query variable '{}'", query));
  if (evidence.contains(query)) {
    throw InputError(fmt::format("query variable '{}' is bound in the evidence", query));
  }

  std::vector<std::size_t> fixed(net.size(), SIZE_MAX);
  for (auto [var, state] : resolve_evidence(net, evidence)) fixed[var] = state;

  const Variable& qv = net.variables()[*q];
  const JointEvaluator joint(net);
  std::vector<double> mass(qv.cardinality(), 0.0);
  enumerate(
      net, fixed,
      [&](const std::vector<std::size_t>& states) { mass[states[*q]] += joint(states); },
      kBruteForceCap);

  double total = 0.0;
  for (double m : mass) total += m;
  if (total <= 0.0) throw ImpossibleEvidence();
  for (double& m : mass) m /= total;
  return {qv.id(), qv.states(), std::move(mass)};
}

}  // namespace driftnet::bn
