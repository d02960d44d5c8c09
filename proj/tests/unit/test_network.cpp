#include <random>

#include "doctest.h"
#include "driftnet/bn/network.hpp"
#include "driftnet/error.hpp"
#include "fixtures.hpp"

using namespace driftnet;
using driftnet::testing::binary_cpt;

TEST_CASE("variable rejects degenerate state lists") {
  CHECK_THROWS_AS(bn::Variable("X", {"T"}), InputError);
  CHECK_THROWS_AS(bn::Variable("X", {"T", "T"}), InputError);
  CHECK_THROWS_AS(bn::Variable("", {"T", "F"}), InputError);
  bn::Variable v("X", {"T", "F", "U"});
  CHECK(v.state_index("U") == 2);
  CHECK_THROWS_AS(v.state_index("Q"), InputError);
}

TEST_CASE("network rejects duplicate variable ids at construction") {
  bn::Variable x("X", {"T", "F"});
  CHECK_THROWS_AS(bn::Network({x, x}, {}), InputError);
}

TEST_CASE("evidence allows one binding per variable") {
  bn::Evidence e{{"X", "T"}};
  e.bind("X", "T");
  CHECK_THROWS_AS(e.bind("X", "F"), InputError);
  CHECK(e.size() == 1);
}

TEST_CASE("validate_network") {
  SUBCASE("well-formed causal chain") {
    CHECK(bn::validate_network(testing::causal_chain()).ok());
    CHECK(bn::validate_network(testing::common_cause()).ok());
    CHECK(bn::validate_network(testing::common_effect()).ok());
  }
  SUBCASE("two-node cycle") {
    bn::Network net({bn::Variable("X", {"T", "F"}), bn::Variable("Y", {"T", "F"})},
                    {binary_cpt("X", {"Y"}, {0.5, 0.5}), binary_cpt("Y", {"X"}, {0.5, 0.5})});
    auto report = bn::validate_network(net);
    CHECK(report.has(bn::ViolationKind::Cycle));
  }
  SUBCASE("row not summing to one names the node") {
    bn::Network net({bn::Variable("X", {"T", "F"})}, {bn::Cpt{"X", {}, {{0.5, 0.4}}}});
    auto report = bn::validate_network(net);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == bn::ViolationKind::RowSum);
    CHECK(report.violations[0].variable == "X");
  }
  SUBCASE("missing, dangling and mis-sized tables") {
    bn::Network net({bn::Variable("X", {"T", "F"}), bn::Variable("Y", {"T", "F"}),
                     bn::Variable("Z", {"T", "F"})},
                    {binary_cpt("X", {"W"}, {0.5}), binary_cpt("Y", {"X"}, {0.5})});
    auto report = bn::validate_network(net);
    CHECK(report.has(bn::ViolationKind::MissingCpt, "Z"));
    CHECK(report.has(bn::ViolationKind::DanglingParent, "X"));
    CHECK(report.has(bn::ViolationKind::DimensionMismatch, "Y"));
  }
  SUBCASE("duplicate and orphan tables, out-of-range entries") {
    bn::Network net({bn::Variable("X", {"T", "F"})},
                    {bn::Cpt{"X", {}, {{1.2, -0.2}}}, binary_cpt("X", {}, {0.5}),
                     binary_cpt("Q", {}, {0.5})});
    auto report = bn::validate_network(net);
    CHECK(report.has(bn::ViolationKind::DuplicateCpt, "X"));
    CHECK(report.has(bn::ViolationKind::UnknownChild, "Q"));
    CHECK(report.has(bn::ViolationKind::ProbabilityRange, "X"));
  }
  SUBCASE("self loop and repeated parent") {
    bn::Network net({bn::Variable("X", {"T", "F"}), bn::Variable("Y", {"T", "F"})},
                    {binary_cpt("X", {"X"}, {0.5, 0.5}),
                     binary_cpt("Y", {}, {0.5})});
    CHECK(bn::validate_network(net).has(bn::ViolationKind::Cycle, "X"));
    bn::Network dup({bn::Variable("X", {"T", "F"}), bn::Variable("Y", {"T", "F"})},
                    {binary_cpt("X", {}, {0.5}), binary_cpt("Y", {"X", "X"}, {0.5, 0.5})});
    CHECK(bn::validate_network(dup).has(bn::ViolationKind::DuplicateParent, "Y"));
  }
}

TEST_CASE("joint_probability") {
  const auto chain = testing::causal_chain();
  // 0.5 * 0.8 * 0.7
  CHECK(bn::joint_probability(chain, {{"X", "T"}, {"Y", "T"}, {"Z", "T"}}) ==
        doctest::Approx(0.28).epsilon(1e-15));

  SUBCASE("deterministic chain") {
    bn::Network det({bn::Variable("X", {"T", "F"}), bn::Variable("Y", {"T", "F"})},
                    {binary_cpt("X", {}, {1.0}), binary_cpt("Y", {"X"}, {1.0, 0.0})});
    CHECK(bn::joint_probability(det, {{"X", "T"}, {"Y", "T"}}) == 1.0);
    CHECK(bn::joint_probability(det, {{"X", "T"}, {"Y", "F"}}) == 0.0);
  }
  SUBCASE("unbound or unknown variables") {
    CHECK_THROWS_AS(bn::joint_probability(chain, {{"X", "T"}, {"Y", "T"}}), InputError);
    CHECK_THROWS_AS(
        bn::joint_probability(chain, {{"X", "T"}, {"Y", "T"}, {"Z", "T"}, {"Q", "T"}}),
        InputError);
    CHECK_THROWS_AS(bn::joint_probability(chain, {{"X", "T"}, {"Y", "T"}, {"Z", "maybe"}}),
                    InputError);
  }
}

TEST_CASE("brute_force_posterior") {
  SUBCASE("root marginal equals prior row") {
    auto d = bn::brute_force_posterior(testing::common_effect(), "X", {});
    CHECK(d.probabilities[0] == 0.4);
    CHECK(d.probabilities[1] == 0.6);
  }
  SUBCASE("query bound in evidence is rejected") {
    CHECK_THROWS_AS(bn::brute_force_posterior(testing::common_effect(), "Z", {{"Z", "T"}}),
                    InputError);
  }
  SUBCASE("chain middle marginal") {
    auto d = bn::brute_force_posterior(testing::causal_chain(), "Y", {});
    CHECK(d.probability("T") == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("impossible evidence") {
    bn::Network det({bn::Variable("X", {"T", "F"}), bn::Variable("Y", {"T", "F"})},
                    {binary_cpt("X", {}, {1.0}), binary_cpt("Y", {"X"}, {1.0, 0.0})});
    CHECK_THROWS_AS(bn::brute_force_posterior(det, "Y", {{"X", "F"}}), ImpossibleEvidence);
  }
  SUBCASE("state space cap") {
    std::vector<bn::Variable> vars;
    std::vector<bn::Cpt> cpts;
    for (int i = 0; i < 25; ++i) {
      vars.emplace_back("v" + std::to_string(i), std::vector<std::string>{"a", "b"});
      cpts.push_back(binary_cpt("v" + std::to_string(i), {}, {0.5}));
    }
    bn::Network big(std::move(vars), std::move(cpts));
    CHECK_THROWS_AS(bn::brute_force_posterior(big, "v0", {}), SizeError);
    // pinning one variable brings the free space back under the cap
    CHECK(bn::brute_force_posterior(big, "v0", {{"v1", "a"}}).probabilities[0] ==
          doctest::Approx(0.5));
  }
}

TEST_CASE("property: joint sums to one over all assignments") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 50; ++trial) {
    const auto net = testing::random_network(rng, 1, 12);
    REQUIRE(bn::validate_network(net).ok());
    double total = 0.0;
    bn::for_each_assignment(net, [&](const std::vector<std::size_t>& s) {
      total += bn::joint_probability(net, s);
    });
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("property: parentless variables return their CPT row") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto net = testing::random_network(rng, 2, 10);
    for (const auto& cpt : net.cpts()) {
      if (!cpt.parents.empty()) continue;
      auto d = bn::brute_force_posterior(net, cpt.child, {});
      CHECK(d.probabilities[0] == doctest::Approx(cpt.rows[0][0]).epsilon(1e-12));
      CHECK(d.probabilities[1] == doctest::Approx(cpt.rows[0][1]).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: Bayes identity via enumeration") {
  // P(H=h|e=v) P(e=v) == P(e=v|H=h) P(H=h) for every binary pair
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const auto net = testing::random_network(rng, 2, 7);
    for (const auto& h : net.variables()) {
      for (const auto& e : net.variables()) {
        if (h.id() == e.id()) continue;
        const auto ph = bn::brute_force_posterior(net, h.id(), {});
        const auto pe = bn::brute_force_posterior(net, e.id(), {});
        for (std::size_t hs = 0; hs < 2; ++hs) {
          for (std::size_t es = 0; es < 2; ++es) {
            const double lhs_cond = pe.probabilities[es] > 0.0
                ? bn::brute_force_posterior(net, h.id(), {{e.id(), e.states()[es]}}).probabilities[hs]
                : 0.0;
            const double rhs_cond = ph.probabilities[hs] > 0.0
                ? bn::brute_force_posterior(net, e.id(), {{h.id(), h.states()[hs]}}).probabilities[es]
                : 0.0;
            CHECK(std::abs(lhs_cond * pe.probabilities[es] - rhs_cond * ph.probabilities[hs]) <=
                  1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("topological order puts parents first") {
  const auto net = testing::common_effect();
  auto order = bn::topological_order(net);
  REQUIRE(order.size() == 3);
  CHECK(net.variables()[order.back()].id() == "Z");
}
