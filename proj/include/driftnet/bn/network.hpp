#pragma once

// Discrete Bayesian networks: variables, conditional probability tables,
// structural validation, joint probabilities and an exhaustive-enumeration
// posterior used as a reference for the variable-elimination engine.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace driftnet::bn {

/// Tolerance on row sums of conditional probability tables.
inline constexpr double kRowSumTolerance = 1e-9;

/// A discrete random variable with an ordered list of at least two distinct
/// state labels. State order defines CPT column order.
class Variable {
 public:
  Variable(std::string id, std::vector<std::string> states);

  const std::string& id() const { return id_; }
  const std::vector<std::string>& states() const { return states_; }
  std::size_t cardinality() const { return states_.size(); }

  std::optional<std::size_t> find_state(std::string_view label) const;
  /// Throws InputError when the label is not a state of this variable.
  std::size_t state_index(std::string_view label) const;

  bool operator==(const Variable&) const = default;

 private:
  std::string id_;
  std::vector<std::string> states_;
};

/// Conditional probability table P(child | parents).
///
/// One row per parent configuration, enumerated mixed-radix over the parents'
/// state indices with the last listed parent varying fastest; one column per
/// child state. The layout is identical to a dense factor over
/// (parents..., child).
struct Cpt {
  std::string child;
  std::vector<std::string> parents;
  std::vector<std::vector<double>> rows;

  bool operator==(const Cpt&) const = default;
};

/// Directed acyclic graph of discrete variables, one CPT per variable.
///
/// Construction only rejects duplicate variable ids; every other structural
/// problem (cycles, missing tables, bad rows) is reported by validate_network
/// so that malformed input files can be diagnosed rather than refused.
class Network {
 public:
  Network() = default;
  Network(std::vector<Variable> variables, std::vector<Cpt> cpts);

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Cpt>& cpts() const { return cpts_; }
  std::size_t size() const { return variables_.size(); }

  std::optional<std::size_t> index_of(std::string_view id) const;
  const Variable* find_variable(std::string_view id) const;
  /// Throws InputError for unknown ids.
  const Variable& variable(std::string_view id) const;
  /// First CPT whose child is `id`, or nullptr.
  const Cpt* find_cpt(std::string_view id) const;
  const Cpt& cpt(std::string_view id) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Cpt> cpts_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<std::string, std::size_t, std::less<>> cpt_index_;
};

/// Observed states, at most one per variable. Labels are resolved against a
/// network at query time.
class Evidence {
 public:
  using Bindings = std::map<std::string, std::string, std::less<>>;

  Evidence() = default;
  Evidence(std::initializer_list<Bindings::value_type> bindings);

  /// Rebinding a variable to a different state throws InputError.
  void bind(std::string variable, std::string state);

  bool contains(std::string_view variable) const { return bindings_.contains(variable); }
  const std::string* find(std::string_view variable) const;
  const Bindings& bindings() const { return bindings_; }
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }

  bool operator==(const Evidence&) const = default;

 private:
  Bindings bindings_;
};

/// Evidence resolved to (variable index, state index) pairs. Throws InputError
/// on unknown variables or states.
std::vector<std::pair<std::size_t, std::size_t>> resolve_evidence(const Network& net,
                                                                  const Evidence& evidence);

/// Probability distribution over the states of one variable.
struct Distribution {
  std::string variable;
  std::vector<std::string> states;
  std::vector<double> probabilities;

  /// Throws InputError for unknown labels.
  double probability(std::string_view state) const;
};

enum class ViolationKind {
  Cycle,
  MissingCpt,
  DuplicateCpt,
  UnknownChild,
  DanglingParent,
  DuplicateParent,
  DimensionMismatch,
  ProbabilityRange,
  RowSum,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  std::string variable;
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind, std::string_view variable = {}) const;
};

ValidationReport validate_network(const Network& net);

/// Throws InputError listing the first violation if the network is invalid.
void require_valid(const Network& net);

/// Variable indices in a parents-before-children order, ties broken by
/// variable id. Throws InputError on cycles.
std::vector<std::size_t> topological_order(const Network& net);

/// Full assignment keyed by variable id, values are state labels.
using Assignment = std::map<std::string, std::string, std::less<>>;

/// Chain-rule product of the CPT entries selected by a full assignment.
double joint_probability(const Network& net, const Assignment& assignment);

/// Same product for an assignment given as state indices in variable order.
/// No validation; the caller guarantees shapes.
double joint_probability(const Network& net, const std::vector<std::size_t>& states);

/// Largest joint state space brute_force_posterior will enumerate.
inline constexpr std::size_t kBruteForceCap = std::size_t{1} << 24;

/// Exact posterior by enumerating every full assignment consistent with the
/// evidence. Reference implementation for tests.
Distribution brute_force_posterior(const Network& net, std::string_view query,
                                   const Evidence& evidence);

/// Calls `visit` once per full assignment (state indices in variable order),
/// last variable fastest. Throws SizeError above `cap` configurations.
void for_each_assignment(const Network& net,
                         const std::function<void(const std::vector<std::size_t>&)>& visit,
                         std::size_t cap = kBruteForceCap);

}  // namespace driftnet::bn
