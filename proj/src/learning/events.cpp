#include "driftnet/learning/events.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include <fmt/format.h>

#include "driftnet/error.hpp"

namespace driftnet::learning {

namespace {

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// Reads one RFC-4180 record. Quoted fields may contain commas, doubled quotes
// and line breaks. Returns false at end of input.
bool read_record(std::istream& in, std::size_t& line, CsvRow& row) {
  row.fields.clear();
  row.line = line + 1;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (int ch; (ch = in.get()) != EOF;) {
    any = true;
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      row.fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r' && in.peek() == '\n') {
      continue;
    } else if (c == '\n') {
      ++line;
      row.fields.push_back(std::move(field));
      return true;
    } else {
      field += c;
    }
  }
  if (!any) return false;
  ++line;
  row.fields.push_back(std::move(field));
  return true;
}

bool parse_number(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && std::isfinite(out);
}

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string_view to_string(OvercostBand band) {
  switch (band) {
    case OvercostBand::P_1: return "P_1";
    case OvercostBand::P_1_10: return "P_1_10";
    case OvercostBand::P_10_100: return "P_10_100";
    case OvercostBand::P_100: return "P_100";
  }
  return "?";
}

const std::vector<std::string>& band_labels() {
  static const std::vector<std::string> labels{"P_1", "P_1_10", "P_10_100", "P_100"};
  return labels;
}

std::string IngestResult::rejects_report() const {
  std::string out;
  for (const auto& r : rejects) out += fmt::format("line {}: {}\n", r.line, r.reason);
  return out;
}

IngestResult ingest_events(std::istream& in, const std::set<std::string>& catalogue) {
  IngestResult result;
  std::size_t line = 0;
  CsvRow row;
  if (!read_record(in, line, row)) throw FormatError("event file is empty");
  std::string header;
  for (std::size_t i = 0; i < row.fields.size(); ++i) {
    header += (i ? "," : "") + row.fields[i];
  }
  if (header.rfind("\xEF\xBB\xBF", 0) == 0) header.erase(0, 3);  // UTF-8 BOM
  if (header != kEventHeader) {
    throw FormatError(fmt::format("line 1: expected header '{}'", kEventHeader));
  }

  while (read_record(in, line, row)) {
    if (row.fields.size() == 1 && row.fields[0].empty()) continue;  // blank line
    auto reject = [&](std::string reason) { result.rejects.push_back({row.line, std::move(reason)}); };
    if (row.fields.size() != 5) {
      reject(fmt::format("expected 5 fields, found {}", row.fields.size()));
      continue;
    }
    EventRecord rec{row.fields[0], row.fields[1], row.fields[2], 0.0, 0.0};
    if (rec.project_id.empty()) {
      reject("empty project id");
      continue;
    }
    if (rec.drift_id.empty()) {
      reject("empty drift id");
      continue;
    }
    if (!catalogue.empty() && !catalogue.contains(rec.drift_id)) {
      reject(fmt::format("unknown drift id '{}'", rec.drift_id));
      continue;
    }
    if (!parse_number(row.fields[3], rec.loss)) {
      reject(fmt::format("loss '{}' is not a number", row.fields[3]));
      continue;
    }
    if (!parse_number(row.fields[4], rec.project_cost)) {
      reject(fmt::format("project cost '{}' is not a number", row.fields[4]));
      continue;
    }
    if (rec.loss < 0.0) {
      reject("negative loss");
      continue;
    }
    if (rec.project_cost <= 0.0) {
      reject("nonpositive project cost");
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

IngestResult ingest_events(const std::filesystem::path& path, const std::set<std::string>& catalogue) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path.string()));
  try {
    return ingest_events(in, catalogue);
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string events_to_csv(const std::vector<EventRecord>& records) {
  std::string out(kEventHeader);
  out += '\n';
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{}\n", quote(r.project_id), quote(r.description),
                       quote(r.drift_id), r.loss, r.project_cost);
  }
  return out;
}

double normalize_loss(const EventRecord& record) {
  if (!(record.project_cost > 0.0)) throw InputError("nonpositive project cost");
  if (record.loss < 0.0) throw InputError("negative loss");
  return 100.0 * record.loss / record.project_cost;
}

OvercostBand bin_overcost(double loss_pct) {
  if (!(loss_pct >= 0.0) || std::isnan(loss_pct)) {
    throw InputError(fmt::format("loss percentage must be non-negative, got {}", loss_pct));
  }
  if (loss_pct < 1.0) return OvercostBand::P_1;
  if (loss_pct < 10.0) return OvercostBand::P_1_10;
  if (loss_pct < 100.0) return OvercostBand::P_10_100;
  return OvercostBand::P_100;
}

}  // namespace driftnet::learning
