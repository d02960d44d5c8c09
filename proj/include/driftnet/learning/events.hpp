#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace driftnet::learning {

/// Overcost bands over loss as a percentage of project cost:
/// [0,1), [1,10), [10,100), [100,inf).
enum class OvercostBand { P_1, P_1_10, P_10_100, P_100 };

inline constexpr std::size_t kBandCount = 4;
inline constexpr std::array<OvercostBand, kBandCount> kBands{
    OvercostBand::P_1, OvercostBand::P_1_10, OvercostBand::P_10_100, OvercostBand::P_100};

std::string_view to_string(OvercostBand band);
const std::vector<std::string>& band_labels();

/// One loss event from the project database.
struct EventRecord {
  std::string project_id;
  std::string description;
  std::string drift_id;
  double loss = 0.0;
  double project_cost = 1.0;

  bool operator==(const EventRecord&) const = default;
};

inline constexpr std::string_view kEventHeader = "project_id,description,drift_id,loss,project_cost";

struct Reject {
  std::size_t line;
  std::string reason;
};

struct IngestResult {
  std::vector<EventRecord> records;
  std::vector<Reject> rejects;

  /// "line <n>: <reason>" per reject.
  std::string rejects_report() const;
};

/// Reads an RFC-4180 event file. Rows that violate the record invariants are
/// collected as rejects; a wrong header throws FormatError. When `catalogue`
/// is non-empty, drift ids outside it are rejected too.
IngestResult ingest_events(std::istream& in, const std::set<std::string>& catalogue = {});
/// Throws IoError when the file cannot be opened.
IngestResult ingest_events(const std::filesystem::path& path,
                           const std::set<std::string>& catalogue = {});

/// Serializes records with the event header, quoting fields as needed.
std::string events_to_csv(const std::vector<EventRecord>& records);

/// Loss as a percentage of project cost: 100 * loss / project_cost.
double normalize_loss(const EventRecord& record);

/// Throws InputError for negative or non-finite input.
OvercostBand bin_overcost(double loss_pct);

}  // namespace driftnet::learning
