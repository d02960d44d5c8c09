#include <chrono>
#include <random>

#include "doctest.h"
#include "driftnet/bn/io.hpp"
#include "driftnet/error.hpp"
#include "driftnet/maturity/config.hpp"
#include "driftnet/maturity/drift_network.hpp"
#include "driftnet/maturity/framework.hpp"

using namespace driftnet;
using namespace driftnet::maturity;

namespace {

// Published drift CPT, columns ordered LV1 slowest ... LV5 fastest.
constexpr double kPublishedDriftTrue[32] = {
    1, 0.6, 0.7, 0.3, 0.85, 0.45, 0.55, 0.15, 0.9, 0.5, 0.6, 0.2, 0.75, 0.35, 0.45, 0.05,
    0.95, 0.55, 0.65, 0.25, 0.8, 0.4, 0.5, 0.1, 0.85, 0.45, 0.55, 0.15, 0.7, 0.3, 0.4, 0};
constexpr double kPublishedDriftFalse[32] = {
    0, 0.4, 0.3, 0.7, 0.15, 0.55, 0.45, 0.85, 0.1, 0.5, 0.4, 0.8, 0.25, 0.65, 0.55, 0.95,
    0.05, 0.45, 0.35, 0.75, 0.2, 0.6, 0.5, 0.9, 0.15, 0.55, 0.45, 0.85, 0.3, 0.7, 0.6, 1};

std::size_t row_of(bool lv1, bool lv2, bool lv3, bool lv4, bool lv5) {
  return (lv1 << 4) | (lv2 << 3) | (lv3 << 2) | (lv4 << 1) | static_cast<std::size_t>(lv5);
}

bn::Variable overcost_variable() {
  return bn::Variable(std::string(kOvercostNode), {"P_1", "P_1_10", "P_10_100", "P_100"});
}

bn::Cpt flat_target(const DriftLayout& layout) {
  bn::Cpt cpt{std::string(kOvercostNode), layout.drift_nodes(), {}};
  cpt.rows.assign(std::size_t{1} << layout.drifts.size(), {0.25, 0.25, 0.25, 0.25});
  return cpt;
}

std::vector<DriftFactorSpec> table3_like() {
  const char* ids[] = {"1.2", "1.3", "1.4", "2.1", "2.2", "2.4", "2.5",
                       "3.1", "3.2", "4.1", "4.2", "4.5", "4.6", "5"};
  std::vector<DriftFactorSpec> out;
  for (std::size_t i = 0; i < 14; ++i) {
    out.push_back({ids[i], "", Cell::all()[i % 9], kDefaultDomains[i % 4]});
  }
  return out;
}

}  // namespace

TEST_CASE("cells and question keys") {
  CHECK(Cell::all().size() == 9);
  std::vector<std::string> codes;
  for (const auto& c : Cell::all()) codes.push_back(c.code());
  CHECK(codes == std::vector<std::string>{"PA", "PR", "PF", "MA", "MR", "MF", "VA", "VR", "VF"});
  CHECK(Cell::parse("MR").name() == "Monitor-Resources");
  CHECK_THROWS_AS(Cell::parse("XX"), InputError);

  const auto key = QuestionKey::parse("MR/Social/LV3");
  CHECK(key.cell.code() == "MR");
  CHECK(key.domain == "Social");
  CHECK(key.level == 3);
  CHECK(key.to_string() == "MR/Social/LV3");
  CHECK_THROWS_AS(QuestionKey::parse("MR/Social"), InputError);
  CHECK_THROWS_AS(QuestionKey::parse("MR/Social/3"), InputError);
  CHECK_THROWS_AS(QuestionKey::parse("MR/Social/LV3x"), InputError);
}

TEST_CASE("framework grid") {
  MaturityFramework fw;
  CHECK(fw.questions().size() == 9 * 4 * 5);
  for (const auto& cell : Cell::all()) {
    for (const auto& d : fw.domains()) CHECK(fw.ladder(cell, d).size() == 5);
  }
  CHECK(fw.contains({Cell::parse("PA"), "Results", 5}));
  CHECK(!fw.contains({Cell::parse("PA"), "Results", 6}));
  CHECK(!fw.contains({Cell::parse("PA"), "Weather", 1}));
  CHECK_THROWS_AS(MaturityFramework({"A", "A"}), InputError);
  CHECK_THROWS_AS(MaturityFramework({"A"}, 5, {}, {{QuestionKey{Cell::parse("PA"), "B", 1}, "?"}}),
                  InputError);
  MaturityFramework custom({"A"}, 5, {}, {{QuestionKey{Cell::parse("PA"), "A", 2}, "Custom?"}});
  CHECK(custom.question_text({Cell::parse("PA"), "A", 2}) == "Custom?");
  CHECK(!custom.question_text({Cell::parse("PA"), "A", 1}).empty());
}

TEST_CASE("aggregation weights") {
  CHECK_NOTHROW(AggregationWeights::expert_default().validate());
  CHECK(AggregationWeights::expert_default().residual_risk() == 0.0);
  CHECK_THROWS_AS((AggregationWeights{{0.5, 0.6}}.validate()), InputError);
  CHECK_THROWS_AS((AggregationWeights{{-0.1, 0.6}}.validate()), InputError);
  AggregationWeights partial{{0.1, 0.1, 0.1, 0.1, 0.1}};
  CHECK_NOTHROW(partial.validate());
  CHECK(partial.residual_risk() == doctest::Approx(0.5));
}

TEST_CASE("drift CPT from the expert weights reproduces the published table") {
  const auto start = std::chrono::steady_clock::now();
  const auto cpt = drift_cpt_from_weights(AggregationWeights::expert_default());
  const auto elapsed = std::chrono::steady_clock::now() - start;
  REQUIRE(cpt.rows.size() == 32);
  for (std::size_t c = 0; c < 32; ++c) {
    CAPTURE(c);
    CHECK(std::abs(cpt.rows[c][0] - kPublishedDriftTrue[c]) <= 1e-12);
    CHECK(std::abs(cpt.rows[c][1] - kPublishedDriftFalse[c]) <= 1e-12);
  }
  CHECK(elapsed < std::chrono::milliseconds(1));

  CHECK(cpt.rows[row_of(0, 0, 0, 0, 0)][0] == 1.0);
  CHECK(cpt.rows[row_of(1, 1, 1, 1, 1)][0] == doctest::Approx(0.0));
  CHECK(cpt.rows[row_of(0, 0, 0, 0, 1)][0] == doctest::Approx(0.6));
  CHECK(cpt.rows[row_of(1, 0, 0, 0, 0)][0] == doctest::Approx(0.95));
}

TEST_CASE("drift CPT shape errors") {
  CHECK_THROWS_AS(drift_cpt_from_weights({{0.5, 0.5}}), InputError);
  CHECK_THROWS_AS(drift_cpt_from_weights({{0.5, 0.5, 0.5, 0.5, 0.5}}), InputError);
}

TEST_CASE("property: drift probability never rises when a level flips No to Yes") {
  // random weight vectors, including sub-unit sums
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> w(5);
    double sum = 0.0;
    for (double& x : w) sum += (x = static_cast<double>(rng() % 1000) + 1.0);
    const double scale = trial % 2 ? 1.0 : 0.8;
    for (double& x : w) x = x / sum * scale;
    const auto cpt = drift_cpt_from_weights({w});
    int pairs = 0;
    for (std::size_t row = 0; row < 32; ++row) {
      for (int bit = 0; bit < 5; ++bit) {
        if (row & (1U << bit)) continue;
        ++pairs;
        CHECK(cpt.rows[row | (1U << bit)][0] <= cpt.rows[row][0] + 1e-15);
      }
    }
    CHECK(pairs == 80);
    if (scale == 1.0) {
      CHECK(cpt.rows[31][0] == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(cpt.rows[0][0] == 1.0);
    }
  }
}

TEST_CASE("plan_layout over the full grid") {
  MaturityFramework fw;
  std::vector<DriftFactorSpec> drifts;
  for (const auto& cell : Cell::all()) {
    for (const auto& d : fw.domains()) drifts.push_back({cell.code() + "." + d, "", cell, d});
  }
  const auto layout = plan_layout(fw, drifts);
  CHECK(layout.drifts.size() == 36);
  CHECK(layout.maturity.size() == 180);
  CHECK(layout.node_count() == 217);
}

TEST_CASE("drifts sharing a cell and domain share maturity parents") {
  MaturityFramework fw;
  std::vector<DriftFactorSpec> drifts{{"a", "", Cell::parse("MR"), "Social"},
                                      {"b", "", Cell::parse("MR"), "Social"}};
  const auto layout = plan_layout(fw, drifts);
  CHECK(layout.maturity.size() == 5);
  const auto net = build_network(fw, drifts, AggregationWeights::expert_default(),
                                 overcost_variable(), flat_target(layout));
  CHECK(net.network.size() == 8);
  CHECK(net.network.cpt(drift_node_id("a")).parents == net.network.cpt(drift_node_id("b")).parents);
}

TEST_CASE("build_network with fourteen drifts") {
  MaturityFramework fw;
  const auto drifts = table3_like();
  const auto layout = plan_layout(fw, drifts);
  const auto built = build_network(fw, drifts, AggregationWeights::expert_default(),
                                   overcost_variable(), flat_target(layout));
  CHECK(bn::validate_network(built.network).ok());
  CHECK(built.network.cpt(std::string(kOvercostNode)).rows.size() == 16384);
  for (const auto& d : drifts) {
    const auto& cpt = built.network.cpt(drift_node_id(d.id));
    CHECK(cpt.parents.size() == 5);
  }
  for (const auto& key : layout.maturity) {
    CHECK(built.network.cpt(maturity_node_id(key)).rows[0] == std::vector<double>{0.5, 0.5});
  }
}

TEST_CASE("build_network errors") {
  MaturityFramework fw;
  std::vector<DriftFactorSpec> bad{{"a", "", Cell::parse("MR"), "Weather"}};
  CHECK_THROWS_AS(plan_layout(fw, bad), InputError);
  std::vector<DriftFactorSpec> dup{{"a", "", Cell::parse("MR"), "Social"},
                                   {"a", "", Cell::parse("PA"), "Social"}};
  CHECK_THROWS_AS(plan_layout(fw, dup), InputError);

  std::vector<DriftFactorSpec> two{{"a", "", Cell::parse("MR"), "Social"},
                                   {"b", "", Cell::parse("PA"), "Social"}};
  auto target = flat_target(plan_layout(fw, two));
  std::swap(target.parents[0], target.parents[1]);
  CHECK_THROWS_AS(build_network(fw, two, AggregationWeights::expert_default(), overcost_variable(),
                                target),
                  InputError);
}

TEST_CASE("assessment_to_evidence") {
  MaturityFramework fw;
  CHECK(assessment_to_evidence(fw, {}).empty());

  Assessment one;
  one.answers[QuestionKey::parse("MR/Social/LV3")] = Answer::Yes;
  const auto e = assessment_to_evidence(fw, one);
  REQUIRE(e.size() == 1);
  CHECK(*e.find("MR_Social_LV3") == "Yes");

  Assessment ladder;
  for (const auto& k : fw.ladder(Cell::parse("PF"), "Results")) ladder.answers[k] = Answer::No;
  CHECK(assessment_to_evidence(fw, ladder).size() == 5);

  Assessment unknown;
  unknown.answers[QuestionKey{Cell::parse("PA"), "Weather", 1}] = Answer::Yes;
  CHECK_THROWS_WITH_AS(assessment_to_evidence(fw, unknown), "unknown question", InputError);
}

TEST_CASE("JSON documents") {
  SUBCASE("assessment") {
    auto a = assessment_from_json(
        nlohmann::json::parse(R"({"assessor":"pm","answers":{"MR/Social/LV3":"Yes","PA/Results/LV1":"No"}})"));
    CHECK(a.answers.size() == 2);
    CHECK(a.assessor == "pm");
    CHECK(assessment_from_json(to_json(a)).answers == a.answers);
    CHECK_THROWS_WITH_AS(assessment_from_json(nlohmann::json::parse(R"({"answers":{"bogus":"Yes"}})")),
                         "unknown question", InputError);
    CHECK_THROWS_AS(assessment_from_json(nlohmann::json::parse(R"({"answers":{"MR/Social/LV3":"Maybe"}})")),
                    InputError);
  }
  SUBCASE("framework config") {
    FrameworkConfig config{MaturityFramework{}, AggregationWeights::expert_default(), table3_like()};
    const auto back = framework_config_from_json(nlohmann::json::parse(to_json(config).dump()));
    CHECK(back.drift_factors == config.drift_factors);
    CHECK(back.weights.weights == config.weights.weights);
    CHECK(back.framework.domains() == config.framework.domains());

    auto doc = to_json(config);
    doc["weights"] = {0.5, 0.5};
    CHECK_THROWS_AS(framework_config_from_json(doc), FormatError);
    doc = to_json(config);
    doc["drift_factors"][0]["cell"] = "ZZ";
    CHECK_THROWS_AS(framework_config_from_json(doc), FormatError);
  }
  SUBCASE("drift network") {
    MaturityFramework fw;
    std::vector<DriftFactorSpec> two{{"a", "first", Cell::parse("MR"), "Social"},
                                     {"b", "second", Cell::parse("PA"), "Contract"}};
    auto built = build_network(fw, two, AggregationWeights::expert_default(), overcost_variable(),
                               flat_target(plan_layout(fw, two)));
    built.provenance = {{"alpha", 1.0}};
    const auto back = drift_network_from_json(nlohmann::json::parse(to_json(built).dump()));
    CHECK(back.layout == built.layout);
    CHECK(back.network.cpts() == built.network.cpts());
    CHECK(back.provenance == built.provenance);

    auto doc = to_json(built);
    doc["layout"]["overcost"] = "Nope";
    CHECK_THROWS_AS(drift_network_from_json(doc), FormatError);
  }
}
