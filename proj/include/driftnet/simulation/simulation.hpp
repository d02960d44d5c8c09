#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "driftnet/bn/network.hpp"
#include "driftnet/maturity/drift_network.hpp"
#include "driftnet/maturity/framework.hpp"

namespace driftnet::simulation {

struct DriftRisk {
  std::string drift_id;
  double p_true = 0.0;

  bool operator==(const DriftRisk&) const = default;
};

struct WhatIfResult {
  bn::Distribution overcost;
  std::vector<DriftRisk> drift_risks;  // layout order
  /// Evidence actually applied: answers on questions that have a node.
  bn::Evidence evidence;
};

/// Posterior overcost bands and per-drift risk under the assessment. Answers
/// on framework questions without a node in the network carry no
/// information and are dropped. Throws InputError("unknown question") for
/// answers outside the framework and ImpossibleEvidence when the evidence
/// has probability zero.
WhatIfResult what_if(const maturity::DriftNetwork& net, const maturity::Assessment& a);

enum class SweepMode {
  /// Levels 1..k achieved, the rest not.
  Cumulative,
  /// Only level k achieved (k = 0: none).
  Exclusive,
};

std::string_view to_string(SweepMode mode);
SweepMode parse_sweep_mode(std::string_view text);

struct SweepRow {
  int level = 0;
  bn::Distribution overcost;
  std::vector<DriftRisk> drift_risks;
};

struct SweepTable {
  SweepMode mode = SweepMode::Cumulative;
  std::vector<SweepRow> rows;  // level 0..L
};

/// Instantiates every maturity node for k = 0..levels and queries the
/// overcost node.
SweepTable maturity_sweep(const maturity::DriftNetwork& net,
                          SweepMode mode = SweepMode::Cumulative);

/// "level,p_1,p_1_10,p_10_100,p_100" with full double precision.
std::string sweep_to_csv(const SweepTable& table);
/// Throws FormatError for malformed input.
SweepTable sweep_from_csv(std::string_view csv);
/// Fixed-width text table in percent.
std::string render_sweep(const SweepTable& table);

/// P(P_10_100) + P(P_100).
double tail_risk(const bn::Distribution& overcost);

struct RankedAction {
  maturity::QuestionKey key;
  double delta = 0.0;       // tail-risk decrease when the answer becomes Yes
  double risk_after = 0.0;  // tail risk with the answer flipped

  bool operator==(const RankedAction&) const = default;
};

/// Every question with a node that is answered No or unanswered, flipped to
/// Yes alone. Sorted by decrease (descending), ties by the textual key.
std::vector<RankedAction> rank_actions(const maturity::DriftNetwork& net,
                                       const maturity::Assessment& a);

nlohmann::json to_json(const WhatIfResult& result);
WhatIfResult what_if_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SweepTable& table);
nlohmann::json to_json(const std::vector<RankedAction>& ranking);
std::vector<RankedAction> ranking_from_json(const nlohmann::json& doc);

}  // namespace driftnet::simulation
