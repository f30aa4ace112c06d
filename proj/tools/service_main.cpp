#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <iostream>

#include "qrscript/service.hpp"

namespace {

qrscript::service::HttpServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QRscript session service", "qrscript-service"};
  std::string host = "127.0.0.1";
  int port = 8080;
  long ttl_seconds = 1800;
  std::size_t max_payload = 2953;
  app.add_option("--host", host, "Address to bind")->envname("QRSCRIPT_HOST");
  app.add_option("--port", port, "Port to bind, 0 for any")->envname("QRSCRIPT_PORT");
  app.add_option("--ttl", ttl_seconds, "Idle session lifetime in seconds")->envname("QRSCRIPT_TTL")->check(CLI::PositiveNumber);
  app.add_option("--max-payload", max_payload, "Largest accepted payload in bytes")->envname("QRSCRIPT_MAX_PAYLOAD");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  qrscript::service::ServiceConfig config;
  config.ttl = std::chrono::seconds(ttl_seconds);
  config.max_payload_bytes = max_payload;
  qrscript::service::SessionService service(config);
  qrscript::service::HttpServer server(service);
  const int bound = server.bind(host, port);
  if (bound < 0) {
    std::cerr << "error: cannot bind " << host << ":" << port << "\n";
    return 1;
  }
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  std::cerr << "listening on " << host << ":" << bound << "\n";
  return server.listen() ? 0 : 1;
}
