#pragma once

// Invariant-based maturity framework: the 3x3 chronology/invariant grid,
// per-domain yes/no level questions, drift factors mapped onto grid cells,
// and user assessments.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "driftnet/bn/network.hpp"

namespace driftnet::maturity {

enum class Chronology { Prepare, Monitor, Valorize };
enum class Invariant { Actions, Resources, Frequency };

/// One of the nine (chronology, invariant) configurations, labelled by its
/// two-letter code: PA, PR, PF, MA, MR, MF, VA, VR, VF.
struct Cell {
  Chronology chronology;
  Invariant invariant;

  std::string code() const;
  std::string name() const;  // e.g. "Monitor-Resources"
  /// Throws InputError for anything but the nine codes.
  static Cell parse(std::string_view code);
  static const std::vector<Cell>& all();

  auto operator<=>(const Cell&) const = default;
};

/// Identifies one assessment question: (cell, domain, level). Textual form is
/// "<cell>/<domain>/LV<level>", e.g. "MR/Social/LV3".
struct QuestionKey {
  Cell cell;
  std::string domain;
  int level = 1;

  std::string to_string() const;
  /// Throws InputError on malformed keys.
  static QuestionKey parse(std::string_view text);

  std::strong_ordering operator<=>(const QuestionKey& other) const;
  bool operator==(const QuestionKey&) const = default;
};

inline const std::vector<std::string> kDefaultDomains{"Social", "Contract", "Interface",
                                                      "Results"};

class MaturityFramework {
 public:
  /// `questions` overrides generated question text per key.
  explicit MaturityFramework(std::vector<std::string> domains = kDefaultDomains, int levels = 5,
                             std::vector<std::string> level_labels = {},
                             std::map<QuestionKey, std::string> questions = {});

  const std::vector<std::string>& domains() const { return domains_; }
  int levels() const { return levels_; }
  const std::vector<std::string>& level_labels() const { return level_labels_; }
  const std::map<QuestionKey, std::string>& question_overrides() const { return questions_; }

  bool has_domain(std::string_view domain) const;
  bool contains(const QuestionKey& key) const;
  /// Throws InputError for keys outside the framework.
  std::string question_text(const QuestionKey& key) const;
  /// Every question, ordered by cell, then domain order, then level.
  std::vector<QuestionKey> questions() const;
  /// The `levels` questions of one (cell, domain) pair, level 1 first.
  std::vector<QuestionKey> ladder(const Cell& cell, const std::string& domain) const;

 private:
  std::vector<std::string> domains_;
  int levels_;
  std::vector<std::string> level_labels_;
  std::map<QuestionKey, std::string> questions_;
};

/// Per-level probability of avoiding a drift when that level is achieved.
struct AggregationWeights {
  std::vector<double> weights;

  /// 5%, 10%, 15%, 30%, 40% for LV1..LV5.
  static AggregationWeights expert_default();

  /// Throws InputError unless every weight is in [0,1] and the sum is at
  /// most 1 (within tolerance).
  void validate() const;
  /// 1 - sum of weights: the drift probability that remains when every level
  /// is achieved. Zero for weight vectors that sum to one.
  double residual_risk() const;
};

struct DriftFactorSpec {
  std::string id;
  std::string label;
  Cell cell;
  std::string domain;

  bool operator==(const DriftFactorSpec&) const = default;
};

enum class Answer { No, Yes };

std::string_view to_string(Answer answer);
/// Accepts exactly "Yes" or "No".
Answer parse_answer(std::string_view text);

struct Assessment {
  std::map<QuestionKey, Answer> answers;
  std::string assessor;
  std::string date;
};

/// Throws InputError ("unknown question") for answers outside the framework.
void validate_assessment(const MaturityFramework& fw, const Assessment& a);

// Node naming inside built networks.
inline constexpr std::string_view kOvercostNode = "Overcost";
inline const std::vector<std::string> kMaturityStates{"No", "Yes"};
inline const std::vector<std::string> kDriftStates{"True", "False"};

std::string maturity_node_id(const QuestionKey& key);
std::string drift_node_id(std::string_view drift_id);

/// Synthetic drift CPT: P(Drift=False | levels) is the sum of the weights of
/// the levels answered Yes. Rows enumerate the parents No-before-Yes with the
/// last (highest) level varying fastest. Throws InputError when the weight
/// count differs from the parent count.
bn::Cpt drift_cpt_from_weights(const AggregationWeights& weights, std::string child = "Drift",
                               std::vector<std::string> parents = {"LV1", "LV2", "LV3", "LV4",
                                                                   "LV5"});

/// Maps each answered question to evidence on its maturity node.
bn::Evidence assessment_to_evidence(const MaturityFramework& fw, const Assessment& a);

}  // namespace driftnet::maturity
