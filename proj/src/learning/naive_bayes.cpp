#include "driftnet/learning/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "driftnet/error.hpp"
#include "driftnet/maturity/framework.hpp"

namespace driftnet::learning {

std::string_view to_string(Granularity g) { return g == Granularity::Event ? "event" : "project"; }

Granularity parse_granularity(std::string_view text) {
  if (text == "event") return Granularity::Event;
  if (text == "project") return Granularity::Project;
  throw InputError(fmt::format("granularity must be 'event' or 'project', got '{}'", text));
}

const std::vector<double>& NaiveBayesModel::conditional(std::string_view drift_id) const {
  auto it = std::find(drift_ids.begin(), drift_ids.end(), drift_id);
  if (it == drift_ids.end()) throw InputError(fmt::format("drift '{}' not in model", drift_id));
  return conditionals[static_cast<std::size_t>(it - drift_ids.begin())];
}

void NaiveBayesModel::validate() const {
  if (prior.size() != kBandCount) throw InputError("prior must have one entry per band");
  double sum = 0.0;
  for (double p : prior) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("prior entry outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > bn::kRowSumTolerance) throw InputError("prior does not sum to 1");
  if (conditionals.size() != drift_ids.size()) throw InputError("one conditional row per drift");
  std::set<std::string_view> seen;
  for (std::size_t d = 0; d < drift_ids.size(); ++d) {
    if (!seen.insert(drift_ids[d]).second) {
      throw InputError(fmt::format("duplicate drift '{}' in model", drift_ids[d]));
    }
    if (conditionals[d].size() != kBandCount) throw InputError("conditional needs one entry per band");
    for (double p : conditionals[d]) {
      if (!(p >= 0.0 && p <= 1.0)) throw InputError("conditional outside [0,1]");
    }
  }
}

namespace {

struct Instance {
  OvercostBand band;
  std::set<std::size_t> present;
};

std::vector<Instance> event_instances(const std::vector<EventRecord>& records,
                                      const std::map<std::string, std::size_t>& index) {
  std::vector<Instance> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    out.push_back({bin_overcost(normalize_loss(r)), {index.at(r.drift_id)}});
  }
  return out;
}

std::vector<Instance> project_instances(const std::vector<EventRecord>& records,
                                        const std::map<std::string, std::size_t>& index) {
  struct Project {
    double loss = 0.0;
    double cost = 0.0;
    std::set<std::size_t> drifts;
  };
  std::map<std::string, Project> projects;
  for (const auto& r : records) {
    auto [it, fresh] = projects.try_emplace(r.project_id);
    auto& p = it->second;
    if (fresh) {
      p.cost = r.project_cost;
    } else if (std::abs(p.cost - r.project_cost) > 1e-9 * p.cost) {
      throw InputError(fmt::format("project '{}' has inconsistent project costs", r.project_id));
    }
    p.loss += r.loss;
    p.drifts.insert(index.at(r.drift_id));
  }
  std::vector<Instance> out;
  for (const auto& [id, p] : projects) {
    out.push_back({bin_overcost(100.0 * p.loss / p.cost), p.drifts});
  }
  return out;
}

}  // namespace

NaiveBayesModel learn_naive_bayes(const std::vector<EventRecord>& records,
                                  const std::vector<std::string>& catalogue, double alpha,
                                  Granularity granularity) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InputError("alpha must be non-negative");
  if (records.empty() && alpha == 0.0) {
    throw DegenerateData("no training records and no smoothing; the model is undefined");
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < catalogue.size(); ++i) {
    if (!index.emplace(catalogue[i], i).second) {
      throw InputError(fmt::format("duplicate drift '{}' in catalogue", catalogue[i]));
    }
  }
  for (const auto& r : records) {
    if (!index.contains(r.drift_id)) {
      throw InputError(fmt::format("event drift '{}' not in catalogue", r.drift_id));
    }
  }

  const auto instances = granularity == Granularity::Event ? event_instances(records, index)
                                                           : project_instances(records, index);

  std::vector<double> band_count(kBandCount, 0.0);
  std::vector<std::vector<double>> present(catalogue.size(), std::vector<double>(kBandCount, 0.0));
  for (const auto& inst : instances) {
    const auto b = static_cast<std::size_t>(inst.band);
    band_count[b] += 1.0;
    for (auto d : inst.present) present[d][b] += 1.0;
  }

  NaiveBayesModel model;
  model.drift_ids = catalogue;
  model.alpha = alpha;
  model.granularity = granularity;
  model.instances = instances.size();
  const double n = static_cast<double>(instances.size());
  for (std::size_t b = 0; b < kBandCount; ++b) {
    model.prior.push_back((band_count[b] + alpha) / (n + kBandCount * alpha));
  }
  model.conditionals.resize(catalogue.size());
  for (std::size_t d = 0; d < catalogue.size(); ++d) {
    for (std::size_t b = 0; b < kBandCount; ++b) {
      const double denom = band_count[b] + 2.0 * alpha;
      model.conditionals[d].push_back(denom > 0.0 ? (present[d][b] + alpha) / denom : 0.5);
    }
  }
  return model;
}

bn::Variable overcost_variable() {
  return bn::Variable(std::string(maturity::kOvercostNode), band_labels());
}

bn::Cpt compile_target_cpt(const NaiveBayesModel& model, const std::vector<std::string>& drift_ids) {
  model.validate();
  std::vector<const std::vector<double>*> cond;
  std::vector<std::string> parents;
  for (const auto& id : drift_ids) {
    cond.push_back(&model.conditional(id));
    parents.push_back(maturity::drift_node_id(id));
  }
  const std::size_t n = drift_ids.size();
  if (n >= 30) throw SizeError(fmt::format("{} drift parents is too many for a dense CPT", n));

  bn::Cpt cpt{std::string(maturity::kOvercostNode), std::move(parents), {}};
  const std::size_t rows = std::size_t{1} << n;
  cpt.rows.reserve(rows);
  for (std::size_t config = 0; config < rows; ++config) {
    std::vector<double> row(model.prior);
    for (std::size_t i = 0; i < n; ++i) {
      // drift states are (True, False): bit 0 means the drift is present
      const bool is_present = ((config >> (n - 1 - i)) & 1U) == 0;
      for (std::size_t b = 0; b < kBandCount; ++b) {
        const double p = (*cond[i])[b];
        row[b] *= is_present ? p : 1.0 - p;
      }
    }
    double total = 0.0;
    for (double v : row) total += v;
    if (total > 0.0) {
      for (double& v : row) v /= total;
    } else {
      row = model.prior;
    }
    cpt.rows.push_back(std::move(row));
  }
  return cpt;
}

nlohmann::json to_json(const NaiveBayesModel& model) {
  nlohmann::json cond = nlohmann::json::object();
  for (std::size_t d = 0; d < model.drift_ids.size(); ++d) cond[model.drift_ids[d]] = model.conditionals[d];
  return {{"kind", "naive_bayes_model"},
          {"bands", band_labels()},
          {"prior", model.prior},
          {"drift_ids", model.drift_ids},
          {"conditionals", std::move(cond)},
          {"alpha", model.alpha},
          {"granularity", std::string(to_string(model.granularity))},
          {"instances", model.instances}};
}

NaiveBayesModel naive_bayes_from_json(const nlohmann::json& doc) {
  try {
    if (doc.value("kind", std::string{"naive_bayes_model"}) != "naive_bayes_model") {
      throw FormatError("not a naive Bayes model document");
    }
    if (doc.contains("bands") && doc.at("bands").get<std::vector<std::string>>() != band_labels()) {
      throw FormatError("model bands differ from P_1, P_1_10, P_10_100, P_100");
    }
    NaiveBayesModel m;
    m.prior = doc.at("prior").get<std::vector<double>>();
    m.drift_ids = doc.at("drift_ids").get<std::vector<std::string>>();
    for (const auto& id : m.drift_ids) {
      m.conditionals.push_back(doc.at("conditionals").at(id).get<std::vector<double>>());
    }
    m.alpha = doc.value("alpha", kDefaultAlpha);
    m.granularity = parse_granularity(doc.value("granularity", std::string{"event"}));
    m.instances = doc.value("instances", std::size_t{0});
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(fmt::format("model document: {}", e.what()));
  } catch (const InputError& e) {
    throw FormatError(fmt::format("model document: {}", e.what()));
  }
}

}  // namespace driftnet::learning
