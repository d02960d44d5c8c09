#pragma once

#include <string_view>
#include <vector>

#include "driftnet/bn/network.hpp"

namespace driftnet::inference {

/// Non-negative table over a scope of discrete variables, stored densely in
/// mixed-radix order with the last scope variable varying fastest.
class Factor {
 public:
  /// Scalar factor with value 1.
  Factor() : values_{1.0} {}
  /// Throws InputError on size mismatch, repeated scope variables or
  /// negative values.
  Factor(std::vector<bn::Variable> scope, std::vector<double> values);

  static Factor scalar(double value) { return Factor({}, {value}); }
  /// Factor over (parents..., child) holding the CPT entries.
  static Factor from_cpt(const bn::Network& net, const bn::Cpt& cpt);

  const std::vector<bn::Variable>& scope() const { return scope_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  /// Position of `id` in the scope, if present.
  std::optional<std::size_t> position(std::string_view id) const;
  bool contains(std::string_view id) const { return position(id).has_value(); }

  double total() const;
  /// Value at the given per-scope state indices.
  double at(const std::vector<std::size_t>& states) const;

 private:
  std::vector<bn::Variable> scope_;
  std::vector<double> values_;
};

/// Pointwise product over the union of scopes: a's variables first, then
/// b's variables not in a. Throws InputError when a shared variable has
/// different state lists in the two factors.
Factor factor_product(const Factor& a, const Factor& b);

/// Sums `variable` out. Throws InputError if it is not in scope.
Factor factor_marginalize(const Factor& f, std::string_view variable);

/// Keeps only entries consistent with the evidence and drops the observed
/// variables from the scope. Evidence on variables outside the scope is
/// ignored.
Factor factor_reduce(const Factor& f, const bn::Evidence& evidence);

}  // namespace driftnet::inference
