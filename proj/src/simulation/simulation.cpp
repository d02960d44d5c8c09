#include "driftnet/simulation/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "driftnet/error.hpp"
#include "driftnet/inference/variable_elimination.hpp"
#include "driftnet/learning/events.hpp"

namespace driftnet::simulation {

using maturity::Answer;
using maturity::Assessment;
using maturity::DriftNetwork;
using maturity::QuestionKey;

namespace {

bn::Evidence applicable_evidence(const DriftNetwork& net, const Assessment& a) {
  maturity::validate_assessment(net.framework, a);
  bn::Evidence e;
  for (const auto& [key, answer] : a.answers) {
    const auto id = maturity::maturity_node_id(key);
    if (net.network.find_variable(id)) e.bind(id, std::string(maturity::to_string(answer)));
  }
  return e;
}

std::vector<DriftRisk> drift_risks(const DriftNetwork& net, const bn::Evidence& e) {
  std::vector<DriftRisk> out;
  for (const auto& d : net.layout.drifts) {
    const auto node = maturity::drift_node_id(d.id);
    double p = 0.0;
    if (const auto* state = e.find(node)) {
      p = *state == maturity::kDriftStates[0] ? 1.0 : 0.0;
    } else {
      p = inference::posterior(net.network, node, e).probability(maturity::kDriftStates[0]);
    }
    out.push_back({d.id, p});
  }
  return out;
}

bn::Distribution overcost_posterior(const DriftNetwork& net, const bn::Evidence& e) {
  return inference::posterior(net.network, net.layout.overcost, e);
}

bool achieved(SweepMode mode, int level, int k) {
  return mode == SweepMode::Cumulative ? level <= k : level == k;
}

nlohmann::json distribution_json(const bn::Distribution& d) {
  return {{"states", d.states}, {"probabilities", d.probabilities}};
}

nlohmann::json risks_json(const std::vector<DriftRisk>& risks) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : risks) out.push_back({{"drift_id", r.drift_id}, {"p_true", r.p_true}});
  return out;
}

}  // namespace

WhatIfResult what_if(const DriftNetwork& net, const Assessment& a) {
  auto evidence = applicable_evidence(net, a);
  auto overcost = overcost_posterior(net, evidence);
  auto risks = drift_risks(net, evidence);
  return {std::move(overcost), std::move(risks), std::move(evidence)};
}

std::string_view to_string(SweepMode mode) {
  return mode == SweepMode::Cumulative ? "cumulative" : "exclusive";
}

SweepMode parse_sweep_mode(std::string_view text) {
  if (text == "cumulative") return SweepMode::Cumulative;
  if (text == "exclusive") return SweepMode::Exclusive;
  throw InputError(fmt::format("sweep mode must be 'cumulative' or 'exclusive', got '{}'", text));
}

SweepTable maturity_sweep(const DriftNetwork& net, SweepMode mode) {
  SweepTable table{mode, {}};
  for (int k = 0; k <= net.layout.levels; ++k) {
    bn::Evidence e;
    for (const auto& key : net.layout.maturity) {
      e.bind(maturity::maturity_node_id(key), achieved(mode, key.level, k) ? "Yes" : "No");
    }
    table.rows.push_back({k, overcost_posterior(net, e), drift_risks(net, e)});
  }
  return table;
}

std::string sweep_to_csv(const SweepTable& table) {
  std::string out = "level,p_1,p_1_10,p_10_100,p_100\n";
  for (const auto& row : table.rows) {
    out += fmt::format("{}", row.level);
    for (double p : row.overcost.probabilities) out += fmt::format(",{:.17g}", p);
    out += '\n';
  }
  return out;
}

SweepTable sweep_from_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != "level,p_1,p_1_10,p_10_100,p_100") {
    throw FormatError("sweep CSV header mismatch");
  }
  SweepTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream fields(line);
    for (std::string cell; std::getline(fields, cell, ',');) cells.push_back(cell);
    if (cells.size() != 1 + learning::kBandCount) {
      throw FormatError(fmt::format("sweep CSV line {}: expected 5 fields", line_no));
    }
    SweepRow row;
    row.overcost.variable = std::string(maturity::kOvercostNode);
    row.overcost.states = learning::band_labels();
    try {
      std::size_t used = 0;
      row.level = std::stoi(cells[0], &used);
      if (used != cells[0].size()) throw std::invalid_argument("trailing characters");
      for (std::size_t b = 1; b < cells.size(); ++b) {
        row.overcost.probabilities.push_back(std::stod(cells[b], &used));
        if (used != cells[b].size()) throw std::invalid_argument("trailing characters");
      }
    } catch (const std::logic_error&) {
      throw FormatError(fmt::format("sweep CSV line {}: malformed number", line_no));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string render_sweep(const SweepTable& table) {
  std::string out = fmt::format("{:>5}", "level");
  const auto labels = table.rows.empty() ? learning::band_labels() : table.rows.front().overcost.states;
  for (const auto& label : labels) out += fmt::format("  {:>9}", label);
  out += fmt::format("   ({})\n", to_string(table.mode));
  for (const auto& row : table.rows) {
    out += fmt::format("{:>5}", row.level);
    for (double p : row.overcost.probabilities) out += fmt::format("  {:>8.2f}%", 100.0 * p);
    out += '\n';
  }
  return out;
}

double tail_risk(const bn::Distribution& overcost) {
  return overcost.probability("P_10_100") + overcost.probability("P_100");
}

std::vector<RankedAction> rank_actions(const DriftNetwork& net, const Assessment& a) {
  const auto base = applicable_evidence(net, a);
  const double base_risk = tail_risk(overcost_posterior(net, base));

  std::vector<RankedAction> out;
  for (const auto& key : net.layout.maturity) {
    auto it = a.answers.find(key);
    if (it != a.answers.end() && it->second == Answer::Yes) continue;
    Assessment flipped = a;
    flipped.answers[key] = Answer::Yes;
    const double risk = tail_risk(overcost_posterior(net, applicable_evidence(net, flipped)));
    out.push_back({key, base_risk - risk, risk});
  }
  // deltas are compared on a 1e-12 grid so rounding noise cannot split ties
  auto quantum = [](double d) { return std::llround(d * 1e12); };
  std::stable_sort(out.begin(), out.end(), [&](const RankedAction& x, const RankedAction& y) {
    const auto qx = quantum(x.delta), qy = quantum(y.delta);
    if (qx != qy) return qx > qy;
    return x.key.to_string() < y.key.to_string();
  });
  return out;
}

nlohmann::json to_json(const WhatIfResult& result) {
  return {{"overcost", distribution_json(result.overcost)},
          {"drift_risks", risks_json(result.drift_risks)},
          {"evidence", result.evidence.bindings()}};
}

WhatIfResult what_if_from_json(const nlohmann::json& doc) {
  try {
    WhatIfResult r;
    r.overcost.variable = std::string(maturity::kOvercostNode);
    r.overcost.states = doc.at("overcost").at("states").get<std::vector<std::string>>();
    r.overcost.probabilities = doc.at("overcost").at("probabilities").get<std::vector<double>>();
    for (const auto& d : doc.at("drift_risks")) {
      r.drift_risks.push_back({d.at("drift_id").get<std::string>(), d.at("p_true").get<double>()});
    }
    for (const auto& [node, state] : doc.at("evidence").items()) r.evidence.bind(node, state.get<std::string>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(fmt::format("what-if document: {}", e.what()));
  }
}

nlohmann::json to_json(const SweepTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"level", row.level},
                    {"overcost", distribution_json(row.overcost)},
                    {"drift_risks", risks_json(row.drift_risks)}});
  }
  return {{"mode", std::string(to_string(table.mode))}, {"rows", std::move(rows)}};
}

nlohmann::json to_json(const std::vector<RankedAction>& ranking) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : ranking) {
    out.push_back({{"question", r.key.to_string()}, {"delta", r.delta}, {"risk_after", r.risk_after}});
  }
  return {{"metric", "P_10_100 + P_100"}, {"actions", std::move(out)}};
}

std::vector<RankedAction> ranking_from_json(const nlohmann::json& doc) {
  try {
    std::vector<RankedAction> out;
    for (const auto& r : doc.at("actions")) {
      out.push_back({QuestionKey::parse(r.at("question").get<std::string>()), r.at("delta").get<double>(),
                     r.at("risk_after").get<double>()});
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(fmt::format("ranking document: {}", e.what()));
  } catch (const InputError& e) {
    throw FormatError(fmt::format("ranking document: {}", e.what()));
  }
}

}  // namespace driftnet::simulation
