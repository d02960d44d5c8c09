#include "driftnet/inference/factor.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "driftnet/error.hpp"

namespace driftnet::inference {

namespace {

std::size_t scope_size(const std::vector<bn::Variable>& scope) {
  std::size_t n = 1;
  for (const auto& v : scope) n *= v.cardinality();
  return n;
}

// Splits a layout around position `pos` into (left, card, right) extents.
struct Split {
  std::size_t left = 1, card = 1, right = 1;
};

Split split_at(const std::vector<bn::Variable>& scope, std::size_t pos) {
  Split s;
  for (std::size_t i = 0; i < scope.size(); ++i) {
    if (i < pos) s.left *= scope[i].cardinality();
    else if (i == pos) s.card = scope[i].cardinality();
    else s.right *= scope[i].cardinality();
  }
  return s;
}

Factor slice(const Factor& f, std::size_t pos, std::size_t state) {
  const Split s = split_at(f.scope(), pos);
  std::vector<double> out(s.left * s.right);
  const auto& in = f.values();
  for (std::size_t l = 0; l < s.left; ++l) {
    const std::size_t base = (l * s.card + state) * s.right;
    std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(base), s.right,
                out.begin() + static_cast<std::ptrdiff_t>(l * s.right));
  }
  auto scope = f.scope();
  scope.erase(scope.begin() + static_cast<std::ptrdiff_t>(pos));
  return Factor(std::move(scope), std::move(out));
}

}  // namespace

Factor::Factor(std::vector<bn::Variable> scope, std::vector<double> values)
    : scope_(std::move(scope)), values_(std::move(values)) {
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    for (std::size_t j = i + 1; j < scope_.size(); ++j) {
      if (scope_[i].id() == scope_[j].id()) {
        throw InputError(fmt::format("factor scope repeats '{}'", scope_[i].id()));
      }
    }
  }
  if (values_.size() != scope_size(scope_)) {
    throw InputError(fmt::format("factor has {} values for a scope of size {}", values_.size(),
                                 scope_size(scope_)));
  }
  if (std::any_of(values_.begin(), values_.end(), [](double v) { return !(v >= 0.0); })) {
    throw InputError("factor values must be non-negative");
  }
}

Factor Factor::from_cpt(const bn::Network& net, const bn::Cpt& cpt) {
  std::vector<bn::Variable> scope;
  scope.reserve(cpt.parents.size() + 1);
  for (const auto& p : cpt.parents) scope.push_back(net.variable(p));
  scope.push_back(net.variable(cpt.child));
  std::vector<double> values;
  values.reserve(cpt.rows.size() * scope.back().cardinality());
  for (const auto& row : cpt.rows) values.insert(values.end(), row.begin(), row.end());
  return Factor(std::move(scope), std::move(values));
}

std::optional<std::size_t> Factor::position(std::string_view id) const {
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    if (scope_[i].id() == id) return i;
  }
  return std::nullopt;
}

double Factor::total() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

double Factor::at(const std::vector<std::size_t>& states) const {
  if (states.size() != scope_.size()) throw InputError("state vector does not match factor scope");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    if (states[i] >= scope_[i].cardinality()) throw InputError("state index out of range");
    idx = idx * scope_[i].cardinality() + states[i];
  }
  return values_[idx];
}

Factor factor_product(const Factor& a, const Factor& b) {
  std::vector<bn::Variable> scope = a.scope();
  for (const auto& v : b.scope()) {
    if (auto pos = a.position(v.id())) {
      if (a.scope()[*pos].states() != v.states()) {
        throw InputError(fmt::format("variable '{}' has different states in the two factors", v.id()));
      }
    } else {
      scope.push_back(v);
    }
  }

  // Strides of each output variable inside a and b (0 when absent).
  const std::size_t n = scope.size();
  std::vector<std::size_t> card(n), stride_a(n, 0), stride_b(n, 0);
  for (std::size_t i = 0; i < n; ++i) card[i] = scope[i].cardinality();
  auto fill_strides = [&](const Factor& f, std::vector<std::size_t>& strides) {
    std::size_t s = 1;
    for (std::size_t k = f.scope().size(); k-- > 0;) {
      for (std::size_t i = 0; i < n; ++i) {
        if (scope[i].id() == f.scope()[k].id()) strides[i] = s;
      }
      s *= f.scope()[k].cardinality();
    }
  };
  fill_strides(a, stride_a);
  fill_strides(b, stride_b);

  const std::size_t total = scope_size(scope);
  std::vector<double> out(total);
  std::vector<std::size_t> counter(n, 0);
  std::size_t ia = 0, ib = 0;
  const auto& va = a.values();
  const auto& vb = b.values();
  for (std::size_t idx = 0; idx < total; ++idx) {
    out[idx] = va[ia] * vb[ib];
    for (std::size_t k = n; k-- > 0;) {
      if (++counter[k] < card[k]) {
        ia += stride_a[k];
        ib += stride_b[k];
        break;
      }
      counter[k] = 0;
      ia -= (card[k] - 1) * stride_a[k];
      ib -= (card[k] - 1) * stride_b[k];
    }
  }
  return Factor(std::move(scope), std::move(out));
}

Factor factor_marginalize(const Factor& f, std::string_view variable) {
  const auto pos = f.position(variable);
  if (!pos) throw InputError(fmt::format("'{}' is not in the factor scope", variable));
  const Split s = split_at(f.scope(), *pos);
  std::vector<double> out(s.left * s.right, 0.0);
  const auto& in = f.values();
  for (std::size_t l = 0; l < s.left; ++l) {
    for (std::size_t c = 0; c < s.card; ++c) {
      const std::size_t base = (l * s.card + c) * s.right;
      for (std::size_t r = 0; r < s.right; ++r) out[l * s.right + r] += in[base + r];
    }
  }
  auto scope = f.scope();
  scope.erase(scope.begin() + static_cast<std::ptrdiff_t>(*pos));
  return Factor(std::move(scope), std::move(out));
}

Factor factor_reduce(const Factor& f, const bn::Evidence& evidence) {
  Factor out = f;
  for (const auto& [var, state] : evidence.bindings()) {
    const auto pos = out.position(var);
    if (!pos) continue;
    out = slice(out, *pos, out.scope()[*pos].state_index(state));
  }
  return out;
}

}  // namespace driftnet::inference
