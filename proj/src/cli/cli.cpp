#include "driftnet/cli/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "driftnet/bn/io.hpp"
#include "driftnet/error.hpp"
#include "driftnet/learning/events.hpp"
#include "driftnet/learning/naive_bayes.hpp"
#include "driftnet/learning/synthetic.hpp"
#include "driftnet/maturity/config.hpp"
#include "driftnet/maturity/drift_network.hpp"
#include "driftnet/server/api_server.hpp"
#include "driftnet/simulation/simulation.hpp"
#include "driftnet/util/hash.hpp"

namespace driftnet::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string framework;
  std::string events;
  std::string model;
  std::string network;
  std::string assessment;
  std::string out;
  double alpha = learning::kDefaultAlpha;
  std::string granularity = "event";
  std::string sweep = "cumulative";
  std::uint64_t seed = learning::kDefaultSeed;
  std::size_t projects = learning::kDefaultProjects;
  std::size_t count = learning::kDefaultEvents;
  int port = server::kDefaultPort;
  std::string host = "127.0.0.1";
  std::vector<std::string> cors_origins;
};

// Adds the file name to errors raised while interpreting its content.
template <typename F>
auto in_file(const std::string& path, F&& body) {
  try {
    return body();
  } catch (const FormatError& e) {
    const std::string what = e.what();
    if (what.rfind(path, 0) == 0) throw;
    throw FormatError(fmt::format("{}: {}", path, what));
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", path, e.what()));
  }
}

maturity::DriftNetwork load_drift_network(const std::string& path) {
  return in_file(path, [&] { return maturity::drift_network_from_json(bn::read_json_file(path)); });
}

maturity::Assessment load_assessment(const std::string& path) {
  return in_file(path, [&] { return maturity::assessment_from_json(bn::read_json_file(path)); });
}

maturity::FrameworkConfig load_framework(const std::string& path) {
  return in_file(path, [&] { return maturity::framework_config_from_json(bn::read_json_file(path)); });
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
  } else {
    bn::write_text_file(cfg.out, text);
    spdlog::info("wrote {}", cfg.out);
  }
}

std::string pretty(const json& doc) { return doc.dump(2) + "\n"; }

bool is_xmlbif(const std::string& path) {
  const auto ext = fs::path(path).extension().string();
  return ext == ".xml" || ext == ".xmlbif";
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const auto net = in_file(cfg.network, [&] {
    return is_xmlbif(cfg.network) ? bn::from_xmlbif(bn::read_text_file(cfg.network), bn::LoadMode::Lenient)
                                  : bn::network_from_json(bn::read_json_file(cfg.network), bn::LoadMode::Lenient);
  });
  const auto report = bn::validate_network(net);
  json violations = json::array();
  std::string text;
  for (const auto& v : report.violations) {
    violations.push_back({{"variable", v.variable}, {"kind", std::string(to_string(v.kind))}, {"message", v.message}});
    text += fmt::format("{}: {}: {}\n", v.variable, to_string(v.kind), v.message);
  }
  if (cfg.out.empty()) {
    out << text
        << (report.ok() ? fmt::format("valid: {} variables, {} CPTs\n", net.size(), net.cpts().size())
                        : fmt::format("invalid: {} violation(s)\n", report.violations.size()));
  } else {
    bn::write_json_file(cfg.out, {{"valid", report.ok()}, {"violations", std::move(violations)}});
  }
  return report.ok() ? kExitOk : kExitInvalid;
}

int cmd_learn(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<std::string> catalogue;
  if (!cfg.framework.empty()) catalogue = load_framework(cfg.framework).drift_ids();
  const std::set<std::string> known(catalogue.begin(), catalogue.end());

  const auto ingested = learning::ingest_events(fs::path(cfg.events), known);
  for (const auto& r : ingested.rejects) err << fmt::format("{}: line {}: {}\n", cfg.events, r.line, r.reason);
  if (!ingested.rejects.empty()) spdlog::warn("{} row(s) rejected", ingested.rejects.size());

  if (catalogue.empty()) {
    std::set<std::string> seen;
    for (const auto& r : ingested.records) seen.insert(r.drift_id);
    catalogue.assign(seen.begin(), seen.end());
  }
  const auto model = learning::learn_naive_bayes(ingested.records, catalogue, cfg.alpha,
                                                 learning::parse_granularity(cfg.granularity));
  spdlog::info("learned from {} instance(s), {} drift(s)", model.instances, catalogue.size());
  auto doc = learning::to_json(model);
  doc["provenance"] = {{"events_file", fs::path(cfg.events).filename().string()},
                       {"events_sha256", util::sha256_file(cfg.events)},
                       {"rejects", ingested.rejects.size()}};
  emit(cfg, pretty(doc), out);
  return kExitOk;
}

int cmd_build(const RunConfig& cfg, std::ostream& out) {
  const auto config = load_framework(cfg.framework);
  const auto model_doc = bn::read_json_file(cfg.model);
  const auto model = in_file(cfg.model, [&] { return learning::naive_bayes_from_json(model_doc); });
  if (const double residual = config.weights.residual_risk(); residual > 0.0) {
    spdlog::warn("aggregation weights sum below 1; residual drift risk {:.4g}", residual);
  }
  const auto target = in_file(cfg.model, [&] { return learning::compile_target_cpt(model, config.drift_ids()); });
  auto net = maturity::build_network(config.framework, config.drift_factors, config.weights,
                                     learning::overcost_variable(), target);
  net.provenance = {{"framework_file", fs::path(cfg.framework).filename().string()},
                    {"framework_sha256", util::sha256_file(cfg.framework)},
                    {"model_file", fs::path(cfg.model).filename().string()},
                    {"model_sha256", util::sha256_file(cfg.model)},
                    {"alpha", model.alpha},
                    {"granularity", std::string(learning::to_string(model.granularity))},
                    {"instances", model.instances}};
  if (model_doc.contains("provenance")) net.provenance["training"] = model_doc["provenance"];
  emit(cfg, pretty(maturity::to_json(net)), out);
  return kExitOk;
}

int cmd_infer(const RunConfig& cfg, std::ostream& out) {
  const auto net = load_drift_network(cfg.network);
  const auto result = in_file(cfg.assessment, [&] { return simulation::what_if(net, load_assessment(cfg.assessment)); });
  emit(cfg, pretty(simulation::to_json(result)), out);
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto net = load_drift_network(cfg.network);
  const auto table = simulation::maturity_sweep(net, simulation::parse_sweep_mode(cfg.sweep));
  if (cfg.out.empty()) {
    out << simulation::sweep_to_csv(table);
  } else {
    bn::write_text_file(cfg.out, simulation::sweep_to_csv(table));
    out << simulation::render_sweep(table);
  }
  return kExitOk;
}

int cmd_rank(const RunConfig& cfg, std::ostream& out) {
  const auto net = load_drift_network(cfg.network);
  const auto ranking =
      in_file(cfg.assessment, [&] { return simulation::rank_actions(net, load_assessment(cfg.assessment)); });
  emit(cfg, pretty(simulation::to_json(ranking)), out);
  return kExitOk;
}

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
  const auto planted = cfg.model.empty() ? learning::default_planted_model()
                                         : in_file(cfg.model, [&] {
                                             return learning::planted_model_from_json(bn::read_json_file(cfg.model));
                                           });
  const auto events = learning::generate_synthetic_events(cfg.seed, cfg.projects, cfg.count, planted);
  emit(cfg, learning::events_to_csv(events), out);
  return kExitOk;
}

int cmd_export(const RunConfig& cfg, std::ostream& out) {
  const auto net = in_file(cfg.network, [&] { return bn::network_from_json(bn::read_json_file(cfg.network)); });
  emit(cfg, bn::to_xmlbif(net, fs::path(cfg.network).stem().string()), out);
  return kExitOk;
}

int cmd_serve(const RunConfig& cfg) {
  server::ServerOptions options;
  options.host = cfg.host;
  options.port = cfg.port;
  options.cors_origins = cfg.cors_origins;
  server::ApiServer api(load_drift_network(cfg.network), options);
  api.bind();
  api.listen();
  return kExitOk;
}

void configure_logging(std::ostream& err) {
  auto logger = std::make_shared<spdlog::logger>("driftnet", std::make_shared<spdlog::sinks::ostream_sink_st>(err));
  logger->set_pattern("driftnet: %l: %v");
  auto level = spdlog::level::warn;
  const char* env = std::getenv("DRIFTNET_LOG");
  const bool known = env && *env && (spdlog::level::from_str(env) != spdlog::level::off || std::string_view(env) == "off");
  if (known) level = spdlog::level::from_str(env);
  logger->set_level(level);
  spdlog::set_default_logger(std::move(logger));
  if (env && *env && !known) spdlog::warn("ignoring unknown DRIFTNET_LOG level '{}'", env);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  configure_logging(err);
  RunConfig cfg;
  CLI::App app{"Maturity-driven overcost risk modelling with Bayesian networks", "driftnet"};
  app.require_subcommand(1, 1);

  auto existing = CLI::ExistingFile;
  auto* validate = app.add_subcommand("validate", "Check a network file for structural and CPT problems");
  validate->add_option("--network", cfg.network, "Network JSON or XMLBIF file")->required()->check(existing);
  validate->add_option("--out", cfg.out, "Write the report as JSON");

  auto* learn = app.add_subcommand("learn", "Learn a naive Bayes overcost model from an event file");
  learn->add_option("--events", cfg.events, "Event CSV file")->required()->check(existing);
  learn->add_option("--framework", cfg.framework, "Framework config supplying the drift catalogue")->check(existing);
  learn->add_option("--alpha", cfg.alpha, "Laplace pseudo-count")->capture_default_str()->check(CLI::NonNegativeNumber);
  learn->add_option("--granularity", cfg.granularity, "Training instance: event or project")
      ->capture_default_str()
      ->check(CLI::IsMember({"event", "project"}));
  learn->add_option("--out", cfg.out, "Model file (default: standard output)");

  auto* build = app.add_subcommand("build", "Assemble the maturity/drift/overcost network");
  build->add_option("--framework", cfg.framework, "Framework config")->required()->check(existing);
  build->add_option("--model", cfg.model, "Learned model file")->required()->check(existing);
  build->add_option("--out", cfg.out, "Network file (default: standard output)");

  auto* infer = app.add_subcommand("infer", "What-if posterior for an assessment");
  infer->add_option("--network", cfg.network, "Built network")->required()->check(existing);
  infer->add_option("--assessment", cfg.assessment, "Assessment JSON")->required()->check(existing);
  infer->add_option("--out", cfg.out, "Result file (default: standard output)");

  auto* sweep = app.add_subcommand("sweep", "Overcost bands per achieved maturity level");
  sweep->add_option("--network", cfg.network, "Built network")->required()->check(existing);
  sweep->add_option("--sweep", cfg.sweep, "cumulative or exclusive")
      ->capture_default_str()
      ->check(CLI::IsMember({"cumulative", "exclusive"}));
  sweep->add_option("--out", cfg.out, "CSV file; the table is then printed to standard output");

  auto* rank = app.add_subcommand("rank", "Rank open maturity questions by tail-risk reduction");
  rank->add_option("--network", cfg.network, "Built network")->required()->check(existing);
  rank->add_option("--assessment", cfg.assessment, "Assessment JSON")->required()->check(existing);
  rank->add_option("--out", cfg.out, "Ranking file (default: standard output)");

  auto* gen = app.add_subcommand("gen", "Generate a synthetic event file");
  gen->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  gen->add_option("--projects", cfg.projects, "Number of projects")->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--count", cfg.count, "Number of events")->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--model", cfg.model, "Planted model file (default: built-in)")->check(existing);
  gen->add_option("--out", cfg.out, "Event CSV file (default: standard output)");

  auto* exporter = app.add_subcommand("export-xmlbif", "Convert a network to XMLBIF 0.3");
  exporter->add_option("--network", cfg.network, "Network JSON")->required()->check(existing);
  exporter->add_option("--out", cfg.out, "XMLBIF file (default: standard output)");

  auto* serve = app.add_subcommand("serve", "Serve the what-if HTTP API");
  serve->add_option("--network", cfg.network, "Built network")->required()->check(existing);
  serve->add_option("--port", cfg.port, "TCP port")->capture_default_str()->check(CLI::Range(0, 65535));
  serve->add_option("--host", cfg.host, "Bind address")->capture_default_str();
  serve->add_option("--cors-origin", cfg.cors_origins, "Origin allowed for cross-origin requests (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitIo;
  }

  try {
    if (*validate) return cmd_validate(cfg, out);
    if (*learn) return cmd_learn(cfg, out, err);
    if (*build) return cmd_build(cfg, out);
    if (*infer) return cmd_infer(cfg, out);
    if (*sweep) return cmd_sweep(cfg, out);
    if (*rank) return cmd_rank(cfg, out);
    if (*gen) return cmd_gen(cfg, out);
    if (*exporter) return cmd_export(cfg, out);
    if (*serve) return cmd_serve(cfg);
  } catch (const IoError& e) {
    err << "driftnet: error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    err << "driftnet: error: " << e.what() << '\n';
    return kExitIo;
  } catch (const json::exception& e) {
    err << "driftnet: error: " << e.what() << '\n';
    return kExitIo;
  } catch (const InputError& e) {
    err << "driftnet: error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ImpossibleEvidence& e) {
    err << "driftnet: error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const DegenerateData& e) {
    err << "driftnet: error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const SizeError& e) {
    err << "driftnet: error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitIo;
}

}  // namespace driftnet::cli
