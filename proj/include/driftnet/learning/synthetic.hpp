#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "driftnet/learning/events.hpp"
#include "driftnet/learning/naive_bayes.hpp"

namespace driftnet::learning {

/// Model the generator samples from. Each event draws a band from the prior,
/// then one drift from that band's conditionals (normalized over drifts), then
/// a loss percentage uniformly within the band's range.
struct PlantedModel {
  NaiveBayesModel model;
  std::array<std::pair<double, double>, kBandCount> band_ranges;  // percent, [lo, hi)

  /// Throws InputError when a range is empty or leaves its band.
  void validate() const;
};

inline constexpr std::uint64_t kDefaultSeed = 20181029;
inline constexpr std::size_t kDefaultProjects = 15;
inline constexpr std::size_t kDefaultEvents = 459;

/// 14 drifts; low bands concentrate on a few drifts, P_100 spreads over all
/// of them, so widespread drift activity points to the highest band.
PlantedModel default_planted_model();

/// Deterministic given the seed. Event i belongs to project i mod n_projects;
/// each project has a fixed cost.
std::vector<EventRecord> generate_synthetic_events(std::uint64_t seed, std::size_t n_projects,
                                                   std::size_t n_events,
                                                   const PlantedModel& planted);

nlohmann::json to_json(const PlantedModel& planted);
/// Throws FormatError on schema problems.
PlantedModel planted_model_from_json(const nlohmann::json& doc);

}  // namespace driftnet::learning
