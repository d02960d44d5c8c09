#include "fixtures.hpp"

#include <algorithm>

namespace driftnet::testing {

namespace {
bn::Variable tf(std::string id) { return bn::Variable(std::move(id), {"T", "F"}); }
}  // namespace

bn::Cpt binary_cpt(std::string child, std::vector<std::string> parents,
                   std::vector<double> p_true) {
  bn::Cpt cpt{std::move(child), std::move(parents), {}};
  for (double p : p_true) cpt.rows.push_back({p, 1.0 - p});
  return cpt;
}

bn::Network causal_chain() {
  return bn::Network({tf("X"), tf("Y"), tf("Z")},
                     {binary_cpt("X", {}, {0.5}), binary_cpt("Y", {"X"}, {0.8, 0.2}),
                      binary_cpt("Z", {"Y"}, {0.7, 0.3})});
}

bn::Network common_cause() {
  return bn::Network({tf("X"), tf("Y"), tf("Z")},
                     {binary_cpt("Y", {}, {0.3}), binary_cpt("X", {"Y"}, {0.9, 0.25}),
                      binary_cpt("Z", {"Y"}, {0.6, 0.15})});
}

bn::Network common_effect() {
  // rows: (X,Y) = TT, TF, FT, FF
  return bn::Network({tf("X"), tf("Y"), tf("Z")},
                     {binary_cpt("X", {}, {0.4}), binary_cpt("Y", {}, {0.7}),
                      binary_cpt("Z", {"X", "Y"}, {0.95, 0.6, 0.5, 0.05})});
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bn::Network random_network(std::mt19937_64& rng, std::size_t min_nodes, std::size_t max_nodes,
                           double edge_probability) {
  const std::size_t n = min_nodes + rng() % (max_nodes - min_nodes + 1);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("v" + std::to_string(i));
  std::shuffle(ids.begin(), ids.end(), rng);

  std::vector<bn::Variable> vars;
  std::vector<bn::Cpt> cpts;
  for (std::size_t i = 0; i < n; ++i) {
    vars.emplace_back(ids[i], std::vector<std::string>{"a", "b"});
    std::vector<std::string> parents;
    for (std::size_t j = 0; j < i; ++j) {
      if (parents.size() < 4 && uniform01(rng) < edge_probability) parents.push_back(ids[j]);
    }
    std::vector<double> p_true(std::size_t{1} << parents.size());
    for (double& p : p_true) {
      const double u = uniform01(rng);
      // occasional deterministic entries exercise zero-probability paths
      p = u < 0.05 ? 0.0 : (u > 0.95 ? 1.0 : uniform01(rng));
    }
    cpts.push_back(binary_cpt(ids[i], std::move(parents), std::move(p_true)));
  }
  std::shuffle(cpts.begin(), cpts.end(), rng);
  return bn::Network(std::move(vars), std::move(cpts));
}

bn::Evidence random_evidence(std::mt19937_64& rng, const bn::Network& net,
                             const std::string& query, std::size_t max_bound) {
  bn::Evidence e;
  const std::size_t count = rng() % (max_bound + 1);
  for (std::size_t k = 0; k < count; ++k) {
    const auto& v = net.variables()[rng() % net.size()];
    if (v.id() == query || e.contains(v.id())) continue;
    e.bind(v.id(), v.states()[rng() % v.cardinality()]);
  }
  return e;
}

}  // namespace driftnet::testing
