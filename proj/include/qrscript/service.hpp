#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <string_view>

#include "qrscript/vm.hpp"

namespace qrscript::service {

struct ServiceConfig {
  std::chrono::seconds ttl{30 * 60};
  std::size_t max_payload_bytes = 2953;
};

/// Transport-independent reply: HTTP status plus a JSON body.
struct Response {
  int status = 200;
  std::string body;
};

/// JSON object {kind, message?, options?, other?, terminal?, reason?}.
std::string event_to_json(const SessionEvent& event);
SessionEvent event_from_json(std::string_view json);

/// In-memory sessions keyed by opaque ids. Request handlers may call into it
/// concurrently; each session is locked for the duration of one operation.
class SessionService {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  explicit SessionService(ServiceConfig config = {}, Clock clock = std::chrono::steady_clock::now);

  // POST /decode
  Response decode(std::string_view content_type, std::span<const std::uint8_t> body);
  // POST /sessions
  Response create(std::string_view content_type, std::span<const std::uint8_t> body);
  // POST /sessions/{id}/answer with {"value": "..."}
  Response answer(const std::string& id, std::string_view body);
  // POST /sessions/{id}/next, for sessions left running after non-terminal output
  Response next(const std::string& id);

  /// Live sessions after purging expired ones.
  std::size_t session_count();
  const ServiceConfig& config() const noexcept { return config_; }

 private:
  struct Entry {
    Entry(Session s, std::chrono::steady_clock::time_point now)
        : session(std::move(s)), created_at(now), last_access(now) {}

    std::mutex mutex;
    Session session;
    std::chrono::steady_clock::time_point created_at;
    std::chrono::steady_clock::time_point last_access;
  };

  std::shared_ptr<Entry> find(const std::string& id);
  void purge_locked(std::chrono::steady_clock::time_point now);
  std::string new_id();

  ServiceConfig config_;
  Clock clock_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::mt19937_64 id_source_;
};

/// HTTP front end over a SessionService.
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds to `port`, or to a free port when `port` is 0. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop() is called.
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace qrscript::service
