#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "driftnet/bn/network.hpp"

namespace driftnet::bn {

/// Rows whose sum is off by more than this are rejected on load; smaller
/// deviations (text rounding) are renormalized.
inline constexpr double kRenormalizeTolerance = 1e-6;

enum class LoadMode {
  /// Keep rows within 1e-9 of a unit sum, renormalize deviations up to 1e-6,
  /// reject larger ones with FormatError.
  Strict,
  /// Keep tables as written so validate_network can report every problem.
  Lenient,
};

/// JSON document: {"variables": [{"id", "states"}], "cpts": [{"child",
/// "parents", "rows"}]}. Unknown top-level keys are ignored on read.
nlohmann::json network_to_json(const Network& net);
Network network_from_json(const nlohmann::json& doc, LoadMode mode = LoadMode::Strict);

nlohmann::json read_json_file(const std::filesystem::path& path);
/// Writes `doc` pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// XMLBIF 0.3 interchange. TABLE entries are written child-fastest with the
/// last GIVEN varying fastest among parents, which matches the CPT row layout.
std::string to_xmlbif(const Network& net, const std::string& name = "driftnet");
Network from_xmlbif(const std::string& xml, LoadMode mode = LoadMode::Strict);

}  // namespace driftnet::bn
