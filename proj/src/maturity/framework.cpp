#include "driftnet/maturity/framework.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "driftnet/error.hpp"

namespace driftnet::maturity {

namespace {

constexpr double kWeightTolerance = 1e-9;

const std::vector<std::string> kDefaultLevelLabels{"initial", "defined", "managed", "measured",
                                                   "optimized"};

char chronology_letter(Chronology c) {
  switch (c) {
    case Chronology::Prepare: return 'P';
    case Chronology::Monitor: return 'M';
    case Chronology::Valorize: return 'V';
  }
  return '?';
}

char invariant_letter(Invariant i) {
  switch (i) {
    case Invariant::Actions: return 'A';
    case Invariant::Resources: return 'R';
    case Invariant::Frequency: return 'F';
  }
  return '?';
}

}  // namespace

std::string Cell::code() const {
  return {chronology_letter(chronology), invariant_letter(invariant)};
}

std::string Cell::name() const {
  static constexpr std::string_view chron[] = {"Prepare", "Monitor", "Valorize"};
  static constexpr std::string_view inv[] = {"Actions", "Resources", "Frequency"};
  return fmt::format("{}-{}", chron[static_cast<int>(chronology)], inv[static_cast<int>(invariant)]);
}

Cell Cell::parse(std::string_view code) {
  for (const auto& c : all()) {
    if (c.code() == code) return c;
  }
  throw InputError(fmt::format("unknown maturity cell '{}'", code));
}

const std::vector<Cell>& Cell::all() {
  static const std::vector<Cell> cells = [] {
    std::vector<Cell> out;
    for (auto c : {Chronology::Prepare, Chronology::Monitor, Chronology::Valorize}) {
      for (auto i : {Invariant::Actions, Invariant::Resources, Invariant::Frequency}) {
        out.push_back({c, i});
      }
    }
    return out;
  }();
  return cells;
}

std::string QuestionKey::to_string() const {
  return fmt::format("{}/{}/LV{}", cell.code(), domain, level);
}

QuestionKey QuestionKey::parse(std::string_view text) {
  const auto first = text.find('/');
  const auto last = text.rfind('/');
  if (first == std::string_view::npos || first == last) {
    throw InputError(fmt::format("malformed question key '{}'", text));
  }
  const auto level_part = text.substr(last + 1);
  int level = 0;
  if (level_part.size() < 3 || level_part.substr(0, 2) != "LV") {
    throw InputError(fmt::format("malformed question key '{}'", text));
  }
  auto [ptr, ec] = std::from_chars(level_part.data() + 2, level_part.data() + level_part.size(), level);
  if (ec != std::errc{} || ptr != level_part.data() + level_part.size()) {
    throw InputError(fmt::format("malformed question key '{}'", text));
  }
  return {Cell::parse(text.substr(0, first)), std::string(text.substr(first + 1, last - first - 1)),
          level};
}

std::strong_ordering QuestionKey::operator<=>(const QuestionKey& other) const {
  if (auto c = cell <=> other.cell; c != 0) return c;
  if (auto c = domain.compare(other.domain); c != 0) return c <=> 0;
  return level <=> other.level;
}

MaturityFramework::MaturityFramework(std::vector<std::string> domains, int levels,
                                     std::vector<std::string> level_labels,
                                     std::map<QuestionKey, std::string> questions)
    : domains_(std::move(domains)),
      levels_(levels),
      level_labels_(std::move(level_labels)),
      questions_(std::move(questions)) {
  if (domains_.empty()) throw InputError("framework needs at least one domain");
  for (std::size_t i = 0; i < domains_.size(); ++i) {
    const auto& d = domains_[i];
    if (d.empty() || d.find('/') != std::string::npos) {
      throw InputError(fmt::format("invalid domain name '{}'", d));
    }
    if (std::find(domains_.begin(), domains_.begin() + static_cast<std::ptrdiff_t>(i), d) !=
        domains_.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw InputError(fmt::format("duplicate domain '{}'", d));
    }
  }
  if (levels_ < 1) throw InputError("framework needs at least one level");
  if (level_labels_.empty() && levels_ == static_cast<int>(kDefaultLevelLabels.size())) {
    level_labels_ = kDefaultLevelLabels;
  }
  if (!level_labels_.empty() && level_labels_.size() != static_cast<std::size_t>(levels_)) {
    throw InputError("level label count differs from level count");
  }
  for (const auto& [key, text] : questions_) {
    if (!contains(key)) {
      throw InputError(fmt::format("question text for unknown question '{}'", key.to_string()));
    }
  }
}

bool MaturityFramework::has_domain(std::string_view domain) const {
  return std::find(domains_.begin(), domains_.end(), domain) != domains_.end();
}

bool MaturityFramework::contains(const QuestionKey& key) const {
  return has_domain(key.domain) && key.level >= 1 && key.level <= levels_;
}

std::string MaturityFramework::question_text(const QuestionKey& key) const {
  if (!contains(key)) throw InputError("unknown question");
  if (auto it = questions_.find(key); it != questions_.end()) return it->second;
  const std::string label =
      level_labels_.empty() ? std::string{} : fmt::format(" ({})", level_labels_[key.level - 1]);
  return fmt::format("{} / {}: is the level {}{} practice executed?", key.cell.name(), key.domain,
                     key.level, label);
}

std::vector<QuestionKey> MaturityFramework::questions() const {
  std::vector<QuestionKey> out;
  for (const auto& cell : Cell::all()) {
    for (const auto& domain : domains_) {
      auto rungs = ladder(cell, domain);
      out.insert(out.end(), rungs.begin(), rungs.end());
    }
  }
  return out;
}

std::vector<QuestionKey> MaturityFramework::ladder(const Cell& cell,
                                                   const std::string& domain) const {
  if (!has_domain(domain)) throw InputError(fmt::format("unknown domain '{}'", domain));
  std::vector<QuestionKey> out;
  for (int level = 1; level <= levels_; ++level) out.push_back({cell, domain, level});
  return out;
}

AggregationWeights AggregationWeights::expert_default() {
  return {{0.05, 0.10, 0.15, 0.30, 0.40}};
}

void AggregationWeights::validate() const {
  if (weights.empty()) throw InputError("aggregation weights are empty");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) throw InputError(fmt::format("weight {} outside [0,1]", w));
    sum += w;
  }
  if (sum > 1.0 + kWeightTolerance) {
    throw InputError(fmt::format("aggregation weights sum to {:.12g} (> 1)", sum));
  }
}

double AggregationWeights::residual_risk() const {
  double sum = 0.0;
  for (double w : weights) sum += w;
  const double residual = 1.0 - sum;
  return std::abs(residual) <= kWeightTolerance ? 0.0 : residual;
}

std::string_view to_string(Answer answer) { return answer == Answer::Yes ? "Yes" : "No"; }

Answer parse_answer(std::string_view text) {
  if (text == "Yes") return Answer::Yes;
  if (text == "No") return Answer::No;
  throw InputError(fmt::format("answer must be Yes or No, got '{}'", text));
}

void validate_assessment(const MaturityFramework& fw, const Assessment& a) {
  for (const auto& [key, answer] : a.answers) {
    if (!fw.contains(key)) throw InputError("unknown question");
  }
}

std::string maturity_node_id(const QuestionKey& key) {
  return fmt::format("{}_{}_LV{}", key.cell.code(), key.domain, key.level);
}

std::string drift_node_id(std::string_view drift_id) { return fmt::format("Drift_{}", drift_id); }

bn::Cpt drift_cpt_from_weights(const AggregationWeights& weights, std::string child,
                               std::vector<std::string> parents) {
  weights.validate();
  if (weights.weights.size() != parents.size()) {
    throw InputError(fmt::format("{} weights for {} maturity parents", weights.weights.size(),
                                 parents.size()));
  }
  const std::size_t n = parents.size();
  bn::Cpt cpt{std::move(child), std::move(parents), {}};
  cpt.rows.reserve(std::size_t{1} << n);
  for (std::size_t config = 0; config < (std::size_t{1} << n); ++config) {
    // bit (n-1-k) of config is parent k's state index; No = 0, Yes = 1
    double avoid = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if ((config >> (n - 1 - k)) & 1U) avoid += weights.weights[k];
    }
    avoid = std::clamp(avoid, 0.0, 1.0);
    cpt.rows.push_back({1.0 - avoid, avoid});  // kDriftStates order: True, False
  }
  return cpt;
}

bn::Evidence assessment_to_evidence(const MaturityFramework& fw, const Assessment& a) {
  validate_assessment(fw, a);
  bn::Evidence e;
  for (const auto& [key, answer] : a.answers) {
    e.bind(maturity_node_id(key), std::string(to_string(answer)));
  }
  return e;
}

}  // namespace driftnet::maturity
