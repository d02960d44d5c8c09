#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "driftnet/error.hpp"
#include "driftnet/inference/variable_elimination.hpp"
#include "fixtures.hpp"

using namespace driftnet;

namespace {

double linf(const bn::Distribution& a, const bn::Distribution& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.probabilities.size(); ++i) {
    worst = std::max(worst, std::abs(a.probabilities[i] - b.probabilities[i]));
  }
  return worst;
}

}  // namespace

TEST_CASE("min-fill order on the chain") {
  const auto chain = testing::causal_chain();
  const auto plan = inference::elimination_order(chain, "Z", {});
  CHECK(plan.order == std::vector<std::string>{"X", "Y"});
}

TEST_CASE("min-fill breaks ties lexicographically") {
  // common effect, query Z: X and Y both have fill 0
  const auto plan = inference::elimination_order(testing::common_effect(), "Z", {});
  CHECK(plan.order == std::vector<std::string>{"X", "Y"});
  // common cause, query Y: X and Z both leaves
  CHECK(inference::elimination_order(testing::common_cause(), "Y", {}).order ==
        std::vector<std::string>{"X", "Z"});
}

TEST_CASE("property: plans exclude query and evidence and cover the rest once") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 100; ++trial) {
    const auto net = testing::random_network(rng, 2, 12);
    const auto& query = net.variables()[rng() % net.size()].id();
    const auto evidence = testing::random_evidence(rng, net, query, 4);
    const auto plan = inference::elimination_order(net, query, evidence);
    std::set<std::string> seen(plan.order.begin(), plan.order.end());
    CHECK(seen.size() == plan.order.size());
    CHECK(!seen.contains(query));
    for (const auto& v : net.variables()) {
      if (v.id() == query) continue;
      CHECK(seen.contains(v.id()) != evidence.contains(v.id()));
    }
    CHECK(plan == inference::elimination_order(net, query, evidence));
  }
}

TEST_CASE("posterior on the common-effect fixture matches enumeration") {
  const auto net = testing::common_effect();
  const bn::Evidence e{{"Z", "T"}};
  const auto ve = inference::posterior(net, "X", e);
  const auto bf = bn::brute_force_posterior(net, "X", e);
  CHECK(linf(ve, bf) <= 1e-9);
  // hand check: P(X=T|Z=T) = 0.4(0.7*.95+.3*.6) / P(Z=T)
  const double num = 0.4 * (0.7 * 0.95 + 0.3 * 0.6);
  const double den = num + 0.6 * (0.7 * 0.5 + 0.3 * 0.05);
  CHECK(ve.probability("T") == doctest::Approx(num / den).epsilon(1e-12));
}

TEST_CASE("root query without evidence returns the prior row") {
  const auto d = inference::posterior(testing::common_cause(), "Y", {});
  CHECK(d.probabilities[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(d.probabilities[1] == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("posterior preconditions") {
  const auto chain = testing::causal_chain();
  CHECK_THROWS_AS(inference::posterior(chain, "Z", {{"Z", "T"}}), InputError);
  CHECK_THROWS_AS(inference::posterior(chain, "Q", {}), InputError);
  CHECK_THROWS_AS(inference::posterior(chain, "Z", {{"Y", "maybe"}}), InputError);
  bn::Network bad({bn::Variable("X", {"T", "F"})}, {bn::Cpt{"X", {}, {{0.5, 0.4}}}});
  CHECK_THROWS_AS(inference::posterior(bad, "X", {}), InputError);

  bn::Network det({bn::Variable("X", {"T", "F"}), bn::Variable("Y", {"T", "F"})},
                  {testing::binary_cpt("X", {}, {1.0}), testing::binary_cpt("Y", {"X"}, {1.0, 0.0})});
  CHECK_THROWS_AS(inference::posterior(det, "Y", {{"X", "F"}}), ImpossibleEvidence);
}

TEST_CASE("bad plans are rejected") {
  const auto chain = testing::causal_chain();
  CHECK_THROWS_AS(inference::posterior(chain, "Z", {}, {{"X"}}), InputError);
  CHECK_THROWS_AS(inference::posterior(chain, "Z", {}, {{"X", "Z"}}), InputError);
  CHECK_THROWS_AS(inference::posterior(chain, "Z", {}, {{"X", "X"}}), InputError);
  CHECK_THROWS_AS(inference::posterior(chain, "Z", {{"Y", "T"}}, {{"X", "Y"}}), InputError);
}

TEST_CASE("property: oracle equivalence and order independence on random networks") {
  std::mt19937_64 rng(8675309);
  int impossible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto net = testing::random_network(rng, 1, 12);
    const auto& query = net.variables()[rng() % net.size()].id();
    const auto evidence = testing::random_evidence(rng, net, query, 4);
    bn::Distribution oracle;
    try {
      oracle = bn::brute_force_posterior(net, query, evidence);
    } catch (const ImpossibleEvidence&) {
      ++impossible;
      CHECK_THROWS_AS(inference::posterior(net, query, evidence), ImpossibleEvidence);
      continue;
    }
    CHECK(linf(inference::posterior(net, query, evidence), oracle) < 1e-9);
    const auto reversed = inference::reverse_topological_plan(net, query, evidence);
    CHECK(linf(inference::posterior(net, query, evidence, reversed), oracle) < 1e-9);
  }
  MESSAGE("impossible-evidence draws: " << impossible);
}

TEST_CASE("property: Bayes identity through posterior calls") {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 40; ++trial) {
    const auto net = testing::random_network(rng, 2, 8);
    const auto& h = net.variables()[rng() % net.size()];
    const bn::Variable* e = &net.variables()[rng() % net.size()];
    if (e->id() == h.id()) continue;
    const auto ph = inference::posterior(net, h.id(), {});
    const auto pe = inference::posterior(net, e->id(), {});
    for (std::size_t hs = 0; hs < 2; ++hs) {
      for (std::size_t es = 0; es < 2; ++es) {
        double lhs = 0.0, rhs = 0.0;
        if (pe.probabilities[es] > 0.0) {
          lhs = inference::posterior(net, h.id(), {{e->id(), e->states()[es]}}).probabilities[hs] *
                pe.probabilities[es];
        }
        if (ph.probabilities[hs] > 0.0) {
          rhs = inference::posterior(net, e->id(), {{h.id(), h.states()[hs]}}).probabilities[es] *
                ph.probabilities[hs];
        }
        CHECK(std::abs(lhs - rhs) <= 1e-9);
      }
    }
  }
}

TEST_CASE("evidence probability") {
  const auto chain = testing::causal_chain();
  CHECK(inference::evidence_probability(chain, {}) == doctest::Approx(1.0).epsilon(1e-12));
  // P(Y=T) = 0.5
  CHECK(inference::evidence_probability(chain, {{"Y", "T"}}) ==
        doctest::Approx(0.5).epsilon(1e-12));
}
