#include "qrscript/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <json.hpp>

#include "qrscript/codec.hpp"
#include "qrscript/error.hpp"
#include "qrscript/qrio.hpp"

namespace qrscript::service {

namespace {

using nlohmann::json;

struct HttpError {
  int status;
  std::string message;
};

Response reply(int status, const json& body) { return {status, body.dump()}; }
Response error_reply(int status, const std::string& message) { return reply(status, json{{"error", message}}); }

std::string media_type(std::string_view content_type) {
  const auto semi = content_type.find(';');
  std::string out(content_type.substr(0, semi));
  out.erase(std::remove_if(out.begin(), out.end(), [](unsigned char c) { return std::isspace(c); }), out.end());
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw HttpError{400, "hex string has odd length"};
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw HttpError{400, "invalid hex digit"};
  };
  std::vector<std::uint8_t> out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(nibble(hex[i]) << 4 | nibble(hex[i + 1])));
  }
  return out;
}

std::vector<std::uint8_t> payload_from_image(std::span<const std::uint8_t> png) {
  try {
    return qrio::qr_to_payload(qrio::decode_png(png));
  } catch (const ImageError& e) {
    throw HttpError{400, e.what()};
  } catch (const QrReadError& e) {
    throw HttpError{400, e.what()};
  }
}

struct ProgramRequest {
  std::vector<std::uint8_t> payload;
  std::optional<ReferenceTable> refs;
};

ProgramRequest read_program_request(std::string_view content_type, std::span<const std::uint8_t> body) {
  ProgramRequest request;
  const std::string type = media_type(content_type);
  if (type == "application/json") {
    json j;
    try {
      j = json::parse(body.begin(), body.end());
    } catch (const json::exception& e) {
      throw HttpError{400, std::string("malformed JSON: ") + e.what()};
    }
    if (!j.is_object()) throw HttpError{400, "request body must be a JSON object"};
    if (j.contains("payload") && j["payload"].is_string()) {
      request.payload = from_hex(j["payload"].get<std::string>());
    } else if (j.contains("image") && j["image"].is_string()) {
      request.payload = payload_from_image(from_hex(j["image"].get<std::string>()));
    } else {
      throw HttpError{400, "expected a hex 'payload' or 'image' field"};
    }
    if (j.contains("refs")) {
      const json& refs = j["refs"];
      try {
        if (refs.is_string()) {
          request.refs = ReferenceTable::parse(refs.get<std::string>());
        } else if (refs.is_object()) {
          ReferenceTable table;
          for (const auto& [key, value] : refs.items()) {
            std::size_t used = 0;
            const auto number = std::stoull(key, &used);
            if (used != key.size() || !value.is_string()) throw HttpError{400, "malformed reference entry"};
            table.insert(number, value.get<std::string>());
          }
          request.refs = std::move(table);
        } else if (!refs.is_null()) {
          throw HttpError{400, "'refs' must be an object or a string"};
        }
      } catch (const SourceError& e) {
        throw HttpError{400, std::string("malformed reference table: ") + e.what()};
      } catch (const std::logic_error&) {
        throw HttpError{400, "malformed reference number"};
      }
    }
  } else if (type == "image/png" || qrio::looks_like_png(body)) {
    request.payload = payload_from_image(body);
  } else {
    request.payload.assign(body.begin(), body.end());
  }
  return request;
}

DecodedProgram decode_checked(const std::vector<std::uint8_t>& payload, std::size_t max_bytes) {
  if (payload.size() > max_bytes) {
    throw HttpError{413, "payload of " + std::to_string(payload.size()) + " bytes exceeds the limit of " +
                             std::to_string(max_bytes)};
  }
  try {
    return decode_payload(payload);
  } catch (const UnsupportedDialectError& e) {
    throw HttpError{422, e.what()};
  } catch (const CodecError& e) {
    throw HttpError{400, e.what()};
  }
}

json event_json(const SessionEvent& event) {
  json j{{"kind", std::string(to_string(event.kind))}};
  switch (event.kind) {
    case SessionEvent::Kind::PromptChoice:
      j["message"] = event.message;
      j["options"] = event.options;
      j["other"] = event.other;
      break;
    case SessionEvent::Kind::PromptText: j["message"] = event.message; break;
    case SessionEvent::Kind::Output:
      j["message"] = event.message;
      j["terminal"] = event.terminal;
      break;
    case SessionEvent::Kind::Terminated: break;
    case SessionEvent::Kind::Failed: j["reason"] = event.reason; break;
  }
  return j;
}

template <typename Handler>
Response guarded(Handler&& handler) {
  try {
    return handler();
  } catch (const HttpError& e) {
    return error_reply(e.status, e.message);
  } catch (const std::exception& e) {
    return error_reply(500, e.what());
  }
}

}  // namespace

std::string event_to_json(const SessionEvent& event) { return event_json(event).dump(); }

SessionEvent event_from_json(std::string_view text) {
  const json j = json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  SessionEvent event;
  if (kind == "prompt_choice") {
    event.kind = SessionEvent::Kind::PromptChoice;
  } else if (kind == "prompt_text") {
    event.kind = SessionEvent::Kind::PromptText;
  } else if (kind == "output") {
    event.kind = SessionEvent::Kind::Output;
  } else if (kind == "terminated") {
    event.kind = SessionEvent::Kind::Terminated;
  } else if (kind == "failed") {
    event.kind = SessionEvent::Kind::Failed;
  } else {
    throw std::invalid_argument("unknown event kind '" + kind + "'");
  }
  event.message = j.value("message", std::string{});
  event.options = j.value("options", std::vector<std::string>{});
  event.other = j.value("other", false);
  event.terminal = j.value("terminal", false);
  event.reason = j.value("reason", std::string{});
  return event;
}

SessionService::SessionService(ServiceConfig config, Clock clock)
    : config_(config), clock_(std::move(clock)), id_source_(std::random_device{}()) {}

Response SessionService::decode(std::string_view content_type, std::span<const std::uint8_t> body) {
  return guarded([&] {
    const auto request = read_program_request(content_type, body);
    const auto decoded = decode_checked(request.payload, config_.max_payload_bytes);
    const SizeReport size = measure(decoded.program, decoded.dialect);
    json listing = json::array();
    for (std::size_t i = 1; i <= decoded.program.size(); ++i) {
      listing.push_back(format_instruction(decoded.program.at(i), i));
    }
    return reply(200, json{{"dialect", decoded.dialect.value},
                           {"tac", format_tac(decoded.program)},
                           {"instructions", listing},
                           {"size",
                            {{"instruction_bits", size.instruction_bits},
                             {"total_bits", size.total_bits},
                             {"padding_bits", size.padding_bits},
                             {"padded_bytes", size.padded_bytes},
                             {"payload_bytes", request.payload.size()}}}});
  });
}

Response SessionService::create(std::string_view content_type, std::span<const std::uint8_t> body) {
  return guarded([&] {
    auto request = read_program_request(content_type, body);
    auto decoded = decode_checked(request.payload, config_.max_payload_bytes);
    const auto now = clock_();
    auto entry = std::make_shared<Entry>(Session(std::move(decoded.program), std::move(request.refs)), now);
    const SessionEvent first = entry->session.advance();
    const std::string state(to_string(entry->session.state()));
    std::string id;
    {
      std::lock_guard lock(mutex_);
      purge_locked(now);
      id = new_id();
      sessions_.emplace(id, std::move(entry));
    }
    return reply(201, json{{"id", id}, {"event", event_json(first)}, {"state", state}});
  });
}

Response SessionService::answer(const std::string& id, std::string_view body) {
  return guarded([&] {
    std::string value;
    try {
      const json j = json::parse(body);
      if (!j.is_object() || !j.contains("value") || !j["value"].is_string()) {
        throw HttpError{400, "expected {\"value\": string}"};
      }
      value = j["value"].get<std::string>();
    } catch (const json::exception& e) {
      throw HttpError{400, std::string("malformed JSON: ") + e.what()};
    }
    const auto entry = find(id);
    if (!entry) throw HttpError{404, "unknown or expired session"};
    std::lock_guard lock(entry->mutex);
    const auto state = entry->session.state();
    if (state != Session::State::AwaitingChoice && state != Session::State::AwaitingText) {
      throw HttpError{409, "session is " + std::string(to_string(state)) + ", not awaiting input"};
    }
    return reply(200, event_json(entry->session.submit_answer(std::move(value))));
  });
}

Response SessionService::next(const std::string& id) {
  return guarded([&] {
    const auto entry = find(id);
    if (!entry) throw HttpError{404, "unknown or expired session"};
    std::lock_guard lock(entry->mutex);
    if (entry->session.state() != Session::State::Running) {
      throw HttpError{409, "session is " + std::string(to_string(entry->session.state())) + ", not running"};
    }
    return reply(200, event_json(entry->session.advance()));
  });
}

std::size_t SessionService::session_count() {
  std::lock_guard lock(mutex_);
  purge_locked(clock_());
  return sessions_.size();
}

std::shared_ptr<SessionService::Entry> SessionService::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  const auto now = clock_();
  purge_locked(now);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  it->second->last_access = now;
  return it->second;
}

void SessionService::purge_locked(std::chrono::steady_clock::time_point now) {
  std::erase_if(sessions_, [&](const auto& item) { return now - item.second->last_access > config_.ttl; });
}

std::string SessionService::new_id() {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string id;
  do {
    id.clear();
    for (int word = 0; word < 2; ++word) {
      std::uint64_t bits = id_source_();
      for (int i = 0; i < 16; ++i, bits >>= 4) id.push_back(kDigits[bits & 0xF]);
    }
  } while (sessions_.contains(id));
  return id;
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(SessionService& service) : impl_(std::make_unique<Impl>()) {
  auto& server = impl_->server;
  server.set_payload_max_length(16 * 1024 * 1024);
  auto send = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  auto bytes = [](const httplib::Request& req) {
    return std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(req.body.data()), req.body.size());
  };

  server.Post("/decode", [&service, send, bytes](const httplib::Request& req, httplib::Response& res) {
    send(res, service.decode(req.get_header_value("Content-Type"), bytes(req)));
  });
  server.Post("/sessions", [&service, send, bytes](const httplib::Request& req, httplib::Response& res) {
    send(res, service.create(req.get_header_value("Content-Type"), bytes(req)));
  });
  server.Post(R"(/sessions/([0-9a-f]+)/answer)", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.answer(req.matches[1].str(), req.body));
  });
  server.Post(R"(/sessions/([0-9a-f]+)/next)", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.next(req.matches[1].str()));
  });
  server.Get("/health", [send](const httplib::Request&, httplib::Response& res) {
    send(res, reply(200, json{{"status", "ok"}}));
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace qrscript::service
