#include "driftnet/learning/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "driftnet/error.hpp"

namespace driftnet::learning {

namespace {

const std::vector<std::string> kPlantedDrifts{"1.2", "1.3", "1.4", "2.1", "2.2", "2.4", "2.5",
                                              "3.1", "3.2", "4.1", "4.2", "4.5", "4.6", "5"};

// Categorical weights for one band: `heavy` drifts share `mass`, the rest
// share what is left.
std::vector<double> band_weights(const std::vector<std::string>& heavy, double mass) {
  std::vector<double> out;
  const double light = (1.0 - mass) / static_cast<double>(kPlantedDrifts.size() - heavy.size());
  for (const auto& id : kPlantedDrifts) {
    const bool is_heavy = std::find(heavy.begin(), heavy.end(), id) != heavy.end();
    out.push_back(is_heavy ? mass / static_cast<double>(heavy.size()) : light);
  }
  return out;
}

// std::uniform_real_distribution is implementation-defined; this is not.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double between(double lo, double hi) { return lo + (hi - lo) * next(); }

  std::size_t categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double u = next() * total;
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      acc += weights[i];
      last = i;
      if (u < acc) return i;
    }
    return last;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

void PlantedModel::validate() const {
  model.validate();
  for (std::size_t b = 0; b < kBandCount; ++b) {
    const auto [lo, hi] = band_ranges[b];
    if (!(lo >= 0.0 && hi > lo) || !std::isfinite(hi)) {
      throw InputError(fmt::format("band {} range is empty", to_string(kBands[b])));
    }
    if (bin_overcost(lo) != kBands[b] || (b + 1 < kBandCount && bin_overcost(std::nextafter(hi, 0.0)) != kBands[b])) {
      throw InputError(fmt::format("band {} range leaves its band", to_string(kBands[b])));
    }
  }
  for (std::size_t b = 0; b < kBandCount; ++b) {
    if (model.prior[b] == 0.0) continue;
    double mass = 0.0;
    for (const auto& row : model.conditionals) mass += row[b];
    if (!(mass > 0.0)) {
      throw InputError(fmt::format("band {} has prior mass but no drift weight", to_string(kBands[b])));
    }
  }
}

PlantedModel default_planted_model() {
  PlantedModel p;
  p.model.prior = {0.20, 0.30, 0.30, 0.20};
  p.model.drift_ids = kPlantedDrifts;
  const std::vector<std::vector<double>> by_band{
      band_weights({"1.2", "1.3"}, 0.70),
      band_weights({"2.1", "2.2", "2.4", "2.5"}, 0.60),
      band_weights({"3.1", "3.2", "4.1", "4.2", "4.5", "4.6"}, 0.60),
      band_weights({}, 0.0),
  };
  p.model.conditionals.assign(kPlantedDrifts.size(), std::vector<double>(kBandCount));
  for (std::size_t b = 0; b < kBandCount; ++b) {
    for (std::size_t d = 0; d < kPlantedDrifts.size(); ++d) p.model.conditionals[d][b] = by_band[b][d];
  }
  p.model.alpha = 0.0;
  p.band_ranges = {{{0.0, 1.0}, {1.0, 10.0}, {10.0, 100.0}, {100.0, 300.0}}};
  return p;
}

std::vector<EventRecord> generate_synthetic_events(std::uint64_t seed, std::size_t n_projects,
                                                   std::size_t n_events,
                                                   const PlantedModel& planted) {
  if (n_events < 1) throw InputError("need at least one event");
  if (n_projects < 1) throw InputError("need at least one project");
  planted.validate();

  Uniform rng(seed);
  std::vector<double> costs;
  for (std::size_t p = 0; p < n_projects; ++p) {
    costs.push_back(std::round(rng.between(1.0e6, 5.0e7) / 1000.0) * 1000.0);
  }
  std::vector<std::vector<double>> by_band(kBandCount);
  for (std::size_t b = 0; b < kBandCount; ++b) {
    for (const auto& row : planted.model.conditionals) by_band[b].push_back(row[b]);
  }

  const int width = static_cast<int>(fmt::format("{}", n_projects).size());
  std::vector<EventRecord> out;
  out.reserve(n_events);
  for (std::size_t i = 0; i < n_events; ++i) {
    const std::size_t project = i % n_projects;
    const std::size_t band = rng.categorical(planted.model.prior);
    const std::size_t drift = rng.categorical(by_band[band]);
    const double cost = costs[project];
    const auto [lo, hi] = planted.band_ranges[band];
    double loss = 0.0;
    do {
      // cents; redraw if rounding pushed the amount across a band edge
      loss = std::round(rng.between(lo, hi) * cost) / 100.0;
    } while (bin_overcost(100.0 * loss / cost) != kBands[band]);
    out.push_back({fmt::format("P{:0{}}", project + 1, std::max(width, 2)),
                   fmt::format("event {}, drift {}", i + 1, planted.model.drift_ids[drift]),
                   planted.model.drift_ids[drift], loss, cost});
  }
  return out;
}

nlohmann::json to_json(const PlantedModel& planted) {
  nlohmann::json ranges = nlohmann::json::array();
  for (const auto& [lo, hi] : planted.band_ranges) ranges.push_back({lo, hi});
  auto doc = to_json(planted.model);
  doc["kind"] = "planted_model";
  doc["band_ranges"] = std::move(ranges);
  return doc;
}

PlantedModel planted_model_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("kind") != "planted_model") throw FormatError("not a planted model document");
    auto model_doc = doc;
    model_doc["kind"] = "naive_bayes_model";
    PlantedModel p;
    p.model = naive_bayes_from_json(model_doc);
    const auto& ranges = doc.at("band_ranges");
    if (ranges.size() != kBandCount) throw FormatError("band_ranges needs one pair per band");
    for (std::size_t b = 0; b < kBandCount; ++b) {
      p.band_ranges[b] = {ranges.at(b).at(0).get<double>(), ranges.at(b).at(1).get<double>()};
    }
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(fmt::format("planted model document: {}", e.what()));
  } catch (const InputError& e) {
    throw FormatError(fmt::format("planted model document: {}", e.what()));
  }
}

}  // namespace driftnet::learning
