#include "driftnet/maturity/config.hpp"

#include <fmt/format.h>

#include "driftnet/bn/io.hpp"
#include "driftnet/error.hpp"

namespace driftnet::maturity {

namespace {

template <typename F>
auto schema_guard(std::string_view what, F&& body) {
  try {
    return body();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(fmt::format("{}: {}", what, e.what()));
  }
}

DriftFactorSpec drift_from_json(const nlohmann::json& j) {
  try {
    return {j.at("id").get<std::string>(), j.value("label", std::string{}),
            Cell::parse(j.at("cell").get<std::string>()), j.at("domain").get<std::string>()};
  } catch (const InputError& e) {
    throw FormatError(fmt::format("drift factor: {}", e.what()));
  }
}

}  // namespace

std::vector<std::string> FrameworkConfig::drift_ids() const {
  std::vector<std::string> out;
  for (const auto& d : drift_factors) out.push_back(d.id);
  return out;
}

nlohmann::json to_json(const MaturityFramework& fw) {
  nlohmann::json questions = nlohmann::json::object();
  for (const auto& [key, text] : fw.question_overrides()) questions[key.to_string()] = text;
  return {{"domains", fw.domains()},
          {"levels", fw.levels()},
          {"level_labels", fw.level_labels()},
          {"questions", std::move(questions)}};
}

MaturityFramework framework_from_json(const nlohmann::json& doc) {
  return schema_guard("framework", [&] {
    std::map<QuestionKey, std::string> questions;
    if (doc.contains("questions")) {
      for (const auto& [key, text] : doc.at("questions").items()) {
        try {
          questions.emplace(QuestionKey::parse(key), text.get<std::string>());
        } catch (const InputError& e) {
          throw FormatError(fmt::format("framework question '{}': {}", key, e.what()));
        }
      }
    }
    try {
      return MaturityFramework(doc.value("domains", kDefaultDomains), doc.value("levels", 5),
                               doc.value("level_labels", std::vector<std::string>{}),
                               std::move(questions));
    } catch (const InputError& e) {
      throw FormatError(fmt::format("framework: {}", e.what()));
    }
  });
}

nlohmann::json to_json(const DriftFactorSpec& spec) {
  return {{"id", spec.id}, {"label", spec.label}, {"cell", spec.cell.code()}, {"domain", spec.domain}};
}

nlohmann::json to_json(const FrameworkConfig& config) {
  nlohmann::json drifts = nlohmann::json::array();
  for (const auto& d : config.drift_factors) drifts.push_back(to_json(d));
  return {{"framework", to_json(config.framework)},
          {"weights", config.weights.weights},
          {"drift_factors", std::move(drifts)}};
}

FrameworkConfig framework_config_from_json(const nlohmann::json& doc) {
  return schema_guard("framework config", [&] {
    FrameworkConfig config{framework_from_json(doc.at("framework")),
                           {doc.at("weights").get<std::vector<double>>()},
                           {}};
    for (const auto& d : doc.at("drift_factors")) config.drift_factors.push_back(drift_from_json(d));
    try {
      config.weights.validate();
      if (config.weights.weights.size() != static_cast<std::size_t>(config.framework.levels())) {
        throw InputError("one weight per maturity level is required");
      }
      plan_layout(config.framework, config.drift_factors);
    } catch (const InputError& e) {
      throw FormatError(fmt::format("framework config: {}", e.what()));
    }
    return config;
  });
}

nlohmann::json to_json(const Assessment& a) {
  nlohmann::json answers = nlohmann::json::object();
  for (const auto& [key, answer] : a.answers) answers[key.to_string()] = std::string(to_string(answer));
  nlohmann::json out = {{"answers", std::move(answers)}};
  if (!a.assessor.empty()) out["assessor"] = a.assessor;
  if (!a.date.empty()) out["date"] = a.date;
  return out;
}

Assessment assessment_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("assessment must be a JSON object");
  Assessment a;
  try {
    a.assessor = doc.value("assessor", std::string{});
    a.date = doc.value("date", std::string{});
    if (!doc.contains("answers")) return a;
    const auto& answers = doc.at("answers");
    if (!answers.is_object()) throw InputError("assessment answers must be an object");
    for (const auto& [key, value] : answers.items()) {
      QuestionKey qk;
      try {
        qk = QuestionKey::parse(key);
      } catch (const InputError&) {
        throw InputError("unknown question");
      }
      if (!value.is_string()) throw InputError(fmt::format("answer for '{}' must be a string", key));
      a.answers[qk] = parse_answer(value.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("assessment: {}", e.what()));
  }
  return a;
}

nlohmann::json to_json(const DriftNetwork& net) {
  nlohmann::json doc = bn::network_to_json(net.network);
  nlohmann::json maturity = nlohmann::json::array();
  for (const auto& k : net.layout.maturity) maturity.push_back(k.to_string());
  nlohmann::json drifts = nlohmann::json::array();
  for (const auto& d : net.layout.drifts) drifts.push_back(to_json(d));
  doc["layout"] = {{"levels", net.layout.levels},
                   {"maturity", std::move(maturity)},
                   {"drifts", std::move(drifts)},
                   {"overcost", net.layout.overcost}};
  doc["framework"] = to_json(net.framework);
  doc["provenance"] = net.provenance;
  return doc;
}

DriftNetwork drift_network_from_json(const nlohmann::json& doc) {
  return schema_guard("drift network", [&] {
    DriftNetwork out{bn::network_from_json(doc), {}, doc.value("provenance", nlohmann::json::object()),
                     MaturityFramework{}};
    const auto& layout = doc.at("layout");
    out.layout.levels = layout.at("levels").get<int>();
    out.layout.overcost = layout.at("overcost").get<std::string>();
    try {
      for (const auto& k : layout.at("maturity")) {
        out.layout.maturity.push_back(QuestionKey::parse(k.get<std::string>()));
      }
    } catch (const InputError& e) {
      throw FormatError(fmt::format("layout: {}", e.what()));
    }
    for (const auto& d : layout.at("drifts")) out.layout.drifts.push_back(drift_from_json(d));
    out.framework = doc.contains("framework") ? framework_from_json(doc.at("framework"))
                                              : MaturityFramework(kDefaultDomains, out.layout.levels);
    for (const auto& k : out.layout.maturity) {
      if (!out.framework.contains(k)) {
        throw FormatError(fmt::format("layout question '{}' is outside the framework", k.to_string()));
      }
    }

    auto require_node = [&](const std::string& id) {
      if (!out.network.find_variable(id)) {
        throw FormatError(fmt::format("layout names node '{}' missing from the network", id));
      }
    };
    for (const auto& k : out.layout.maturity) require_node(maturity_node_id(k));
    for (const auto& id : out.layout.drift_nodes()) require_node(id);
    require_node(out.layout.overcost);
    return out;
  });
}

}  // namespace driftnet::maturity
