#include "driftnet/server/api_server.hpp"

#include <algorithm>
#include <atomic>

#include <fmt/format.h>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include "driftnet/error.hpp"
#include "driftnet/learning/events.hpp"
#include "driftnet/maturity/config.hpp"
#include "driftnet/simulation/simulation.hpp"

namespace driftnet::server {

using maturity::Cell;
using maturity::DriftNetwork;

nlohmann::json model_descriptor(const DriftNetwork& net) {
  const auto& fw = net.framework;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : Cell::all()) cells.push_back({{"code", c.code()}, {"name", c.name()}});

  nlohmann::json questions = nlohmann::json::array();
  for (const auto& key : fw.questions()) {
    questions.push_back({{"key", key.to_string()},
                         {"cell", key.cell.code()},
                         {"domain", key.domain},
                         {"level", key.level},
                         {"text", fw.question_text(key)},
                         {"in_network", net.network.find_variable(maturity::maturity_node_id(key)) != nullptr}});
  }
  nlohmann::json drifts = nlohmann::json::array();
  for (const auto& d : net.layout.drifts) {
    drifts.push_back({{"id", d.id},
                      {"label", d.label},
                      {"cell", d.cell.code()},
                      {"domain", d.domain},
                      {"node", maturity::drift_node_id(d.id)}});
  }
  return {{"framework",
           {{"cells", std::move(cells)},
            {"domains", fw.domains()},
            {"levels", fw.levels()},
            {"level_labels", fw.level_labels()},
            {"questions", std::move(questions)}}},
          {"drifts", std::move(drifts)},
          {"bands", net.network.variable(net.layout.overcost).states()},
          {"provenance", net.provenance},
          {"schemas", api_schema()}};
}

struct ApiServer::Impl {
  const DriftNetwork net;
  const ServerOptions options;
  const std::string descriptor;
  httplib::Server http;
  int bound_port = -1;

  Impl(DriftNetwork n, ServerOptions o)
      : net(std::move(n)), options(std::move(o)), descriptor(model_descriptor(net).dump()) {
    // SO_REUSEPORT would let a second server share a busy port silently
    http.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    http.new_task_queue = [threads = options.threads] {
      return new httplib::ThreadPool(static_cast<std::size_t>(std::max(1, threads)));
    };
    routes();
  }

  static void send_json(httplib::Response& res, const nlohmann::json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static void send_error(httplib::Response& res, int status, std::string_view message) {
    send_json(res, {{"error", message}}, status);
  }

  // Runs a handler body, mapping library errors to 400 responses.
  template <typename F>
  static void guarded(httplib::Response& res, F&& body) {
    try {
      body();
    } catch (const nlohmann::json::parse_error& e) {
      send_error(res, 400, fmt::format("malformed JSON: {}", e.what()));
    } catch (const InputError& e) {
      send_error(res, 400, e.what());
    } catch (const FormatError& e) {
      send_error(res, 400, e.what());
    } catch (const ImpossibleEvidence& e) {
      send_error(res, 400, e.what());
    }
  }

  static maturity::Assessment parse_assessment(const httplib::Request& req) {
    return maturity::assessment_from_json(nlohmann::json::parse(req.body));
  }

  void routes() {
    http.Get("/model", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(descriptor, "application/json");
    });
    http.Post("/whatif", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { send_json(res, to_json(simulation::what_if(net, parse_assessment(req)))); });
    });
    http.Post("/rank", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { send_json(res, to_json(simulation::rank_actions(net, parse_assessment(req)))); });
    });
    http.Get("/sweep", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto mode = req.has_param("mode") ? simulation::parse_sweep_mode(req.get_param_value("mode"))
                                                : simulation::SweepMode::Cumulative;
        send_json(res, to_json(simulation::maturity_sweep(net, mode)));
      });
    });
    http.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
      send_error(res, res.status, res.status == 404 ? "not found" : httplib::status_message(res.status));
      return httplib::Server::HandlerResponse::Handled;
    });
    http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string what = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        what = e.what();
      } catch (...) {
      }
      spdlog::error("request failed: {}", what);
      send_error(res, 500, "internal error");
    });
    http.set_post_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
      allow_origin(req, res);
    });
    http.set_logger([](const httplib::Request& req, const httplib::Response& res) {
      spdlog::debug("{} {} -> {}", req.method, req.path, res.status);
    });
  }

  void allow_origin(const httplib::Request& req, httplib::Response& res) const {
    if (options.cors_origins.empty()) return;
    const auto origin = req.get_header_value("Origin");
    const auto& allowed = options.cors_origins;
    if (std::find(allowed.begin(), allowed.end(), "*") != allowed.end()) {
      res.set_header("Access-Control-Allow-Origin", "*");
    } else if (!origin.empty() && std::find(allowed.begin(), allowed.end(), origin) != allowed.end()) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
    } else {
      return;
    }
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  }
};

ApiServer::ApiServer(DriftNetwork net, ServerOptions options)
    : impl_(std::make_unique<Impl>(std::move(net), std::move(options))) {}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind() {
  if (impl_->bound_port >= 0) return impl_->bound_port;
  const auto& o = impl_->options;
  if (o.port == 0) {
    impl_->bound_port = impl_->http.bind_to_any_port(o.host);
    if (impl_->bound_port < 0) throw IoError(fmt::format("cannot bind {}", o.host));
  } else {
    if (o.port < 0 || o.port > 65535) throw InputError(fmt::format("invalid port {}", o.port));
    if (!impl_->http.bind_to_port(o.host, o.port)) {
      throw IoError(fmt::format("cannot listen on {}:{} (port busy or unavailable)", o.host, o.port));
    }
    impl_->bound_port = o.port;
  }
  return impl_->bound_port;
}

void ApiServer::listen() {
  const int port = bind();
  spdlog::info("serving on http://{}:{}", impl_->options.host, port);
  if (!impl_->http.listen_after_bind()) throw IoError("server stopped unexpectedly");
}

void ApiServer::stop() {
  if (impl_->http.is_running()) impl_->http.stop();
}

bool ApiServer::running() const { return impl_->http.is_running(); }

void ApiServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace driftnet::server
