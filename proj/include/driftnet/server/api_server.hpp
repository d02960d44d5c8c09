#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "driftnet/maturity/drift_network.hpp"

namespace driftnet::server {

inline constexpr int kDefaultPort = 8348;

struct ServerOptions {
  std::string host = "127.0.0.1";
  /// 0 picks a free port.
  int port = kDefaultPort;
  /// Origins allowed to make cross-origin requests; "*" allows any.
  std::vector<std::string> cors_origins;
  int threads = 8;
};

/// Schema document for every request and response body.
const nlohmann::json& api_schema();

/// Framework summary, drift catalogue, band labels, provenance and schemas.
nlohmann::json model_descriptor(const maturity::DriftNetwork& net);

/// HTTP facade over one immutable network. Endpoints: GET /model,
/// POST /whatif, GET /sweep?mode=cumulative|exclusive, POST /rank.
class ApiServer {
 public:
  ApiServer(maturity::DriftNetwork net, ServerOptions options);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds the listening socket and returns the port. Throws IoError when the
  /// port is busy or the host cannot be bound.
  int bind();
  /// Serves until stop(); binds first if needed.
  void listen();
  void stop();
  bool running() const;
  /// Blocks until a concurrent listen() accepts connections.
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace driftnet::server
