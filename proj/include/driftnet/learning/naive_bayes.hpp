#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "driftnet/bn/network.hpp"
#include "driftnet/learning/events.hpp"

namespace driftnet::learning {

/// What one training instance is.
enum class Granularity {
  /// One instance per event; the feature vector is one-hot on its drift.
  Event,
  /// One instance per project; features are the drifts that occurred, the
  /// class is the band of the project's total loss.
  Project,
};

std::string_view to_string(Granularity g);
Granularity parse_granularity(std::string_view text);

/// Class prior over the overcost bands and, per drift, P(drift present | band).
struct NaiveBayesModel {
  std::vector<double> prior;                      // kBandCount entries
  std::vector<std::string> drift_ids;             // catalogue order
  std::vector<std::vector<double>> conditionals;  // [drift][band]
  double alpha = 1.0;
  Granularity granularity = Granularity::Event;
  std::size_t instances = 0;

  /// Throws InputError for ids outside the model.
  const std::vector<double>& conditional(std::string_view drift_id) const;
  /// Throws InputError when shapes or probability ranges are off.
  void validate() const;
};

inline constexpr double kDefaultAlpha = 1.0;

/// Laplace-smoothed relative frequencies with pseudo-count `alpha`:
///   prior(b)   = (n_b + alpha) / (N + 4 alpha)
///   cond(d, b) = (n_{d,b} + alpha) / (n_b + 2 alpha)
/// A band with no instances and alpha = 0 gets an uninformative 0.5.
/// Throws DegenerateData for empty input with alpha = 0 and InputError for
/// drift ids outside the catalogue.
NaiveBayesModel learn_naive_bayes(const std::vector<EventRecord>& records,
                                  const std::vector<std::string>& catalogue,
                                  double alpha = kDefaultAlpha,
                                  Granularity granularity = Granularity::Event);

/// The overcost variable with the four band states.
bn::Variable overcost_variable();

/// Writes the naive-Bayes posterior as the overcost node's CPT, with the
/// drift nodes as parents in `drift_ids` order. Row for drift configuration d
/// is proportional to prior(b) * prod_i [cond(i,b) if present else
/// 1 - cond(i,b)]. Rows whose unnormalized mass is zero fall back to the
/// prior.
bn::Cpt compile_target_cpt(const NaiveBayesModel& model, const std::vector<std::string>& drift_ids);

nlohmann::json to_json(const NaiveBayesModel& model);
/// Throws FormatError on schema problems.
NaiveBayesModel naive_bayes_from_json(const nlohmann::json& doc);

}  // namespace driftnet::learning
