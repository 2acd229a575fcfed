#include <atomic>
#include <charconv>
#include <csignal>
#include <pthread.h>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "vta/error.hpp"
#include "vta/server.hpp"

namespace vta::http {
namespace {

using ordered_json = nlohmann::ordered_json;

JsonResponse error_response(int status, std::string_view message) {
  ordered_json body;
  body["error"] = message;
  return {status, body.dump()};
}

std::optional<std::uint64_t> parse_seed(std::string_view text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

const char* reason_for(int status) {
  switch (status) {
    case 404: return "not found";
    case 405: return "method not allowed";
    case 413: return "request body exceeds 16384 bytes";
    case 414: return "uri too long";
    default: return "bad request";
  }
}

}  // namespace

struct ChatService::Impl {
  std::shared_ptr<const Assistant> assistant;
  ServiceOptions options;
  httplib::Server server;

  bool origin_allowed(const std::string& origin) const {
    for (const auto& o : options.cors_origins) {
      if (o == "*" || o == origin) return true;
    }
    return false;
  }
};

ChatService::ChatService(std::shared_ptr<const Assistant> assistant, ServiceOptions options)
    : impl_(std::make_unique<Impl>()) {
  if (!assistant) throw PreconditionError("chat service needs an assistant");
  impl_->assistant = std::move(assistant);
  impl_->options = std::move(options);
  auto& server = impl_->server;
  server.set_payload_max_length(kMaxBodyBytes);

  auto send = [](httplib::Response& res, const JsonResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };

  server.Post("/api/chat", [this, send](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::uint64_t> seed;
    if (req.has_param("seed")) {
      seed = parse_seed(req.get_param_value("seed"));
      if (!seed) return send(res, error_response(400, "seed must be a non-negative integer"));
    }
    send(res, chat(req.body, seed));
  });
  server.Get("/api/health", [this, send](const httplib::Request&, httplib::Response& res) { send(res, health()); });
  server.Get("/api/model", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, model_info());
  });

  if (!impl_->options.cors_origins.empty()) {
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server.set_post_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
      const auto origin = req.get_header_value("Origin");
      if (origin.empty() || !impl_->origin_allowed(origin)) return;
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
  }

  // Statuses produced inside httplib (413, 404, ...) get a JSON body too.
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    res.set_content(error_response(res.status, reason_for(res.status)).body, "application/json");
    return httplib::Server::HandlerResponse::Handled;
  });

  if (impl_->options.static_dir) {
    const auto dir = impl_->options.static_dir->string();
    if (!server.set_mount_point("/", dir)) throw PreconditionError("static directory not found: " + dir);
  }
}

ChatService::~ChatService() { stop(); }

JsonResponse ChatService::chat(std::string_view body, std::optional<std::uint64_t> seed) const {
  if (body.size() > kMaxBodyBytes) return error_response(413, reason_for(413));
  const auto doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded()) return error_response(400, "body is not valid JSON");
  if (!doc.is_object()) return error_response(400, "body must be a JSON object");
  const auto it = doc.find("message");
  if (it == doc.end()) return error_response(400, "missing field: message");
  if (!it->is_string()) return error_response(400, "field message must be a string");

  const auto reply = impl_->assistant->respond(it->get_ref<const std::string&>(), seed);
  ordered_json out;
  out["intent"] = reply.intent ? ordered_json(*reply.intent) : ordered_json(nullptr);
  out["confidence"] = reply.confidence;
  out["response"] = reply.response;
  out["fallback"] = reply.is_fallback;
  return {200, out.dump()};
}

JsonResponse ChatService::health() const {
  ordered_json out;
  out["status"] = "ok";
  out["model_version"] = nn::kModelVersion;
  return {200, out.dump()};
}

JsonResponse ChatService::model_info() const {
  const auto& a = *impl_->assistant;
  ordered_json out;
  out["labels"] = a.labels();
  out["vocab_size"] = a.model().vocabulary.size();
  out["threshold"] = a.threshold();
  return {200, out.dump()};
}

int ChatService::bind_any_port(const std::string& host) {
  const int port = impl_->server.bind_to_any_port(host);
  if (port < 0) throw Error("cannot bind " + host);
  return port;
}

void ChatService::bind(const std::string& host, int port) {
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
}

void ChatService::listen_after_bind() { impl_->server.listen_after_bind(); }

void ChatService::stop() {
  if (impl_) impl_->server.stop();
}

bool ChatService::is_running() const { return impl_->server.is_running(); }

void ServeConfig::validate() const {
  if (port < 1 || port > 65535) throw PreconditionError("port must be in [1, 65535], got " + std::to_string(port));
}

int serve(const ServeConfig& config, std::ostream& log) {
  std::shared_ptr<const Assistant> assistant;
  std::unique_ptr<ChatService> service;
  try {
    config.validate();
    auto model = nn::load_model_file(config.model_path.string());
    const auto corpus = load_corpus_file(config.corpus_path).corpus;
    assistant = std::make_shared<const Assistant>(Assistant::from_corpus(std::move(model), corpus, config.pipeline));
    service = std::make_unique<ChatService>(assistant, ServiceOptions{config.static_dir, config.cors_origins});
    service->bind(config.host, config.port);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }

  // Block the shutdown signals here so every server thread inherits the mask,
  // then wait for them on a dedicated thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);

  std::atomic<bool> done{false};
  std::thread watcher([&] {
    const timespec tick{0, 200'000'000};
    bool requested = false;
    while (!done.load()) {
      if (sigtimedwait(&signals, nullptr, &tick) > 0) requested = true;
      // Repeated because a stop() that lands before the listener starts is lost.
      if (requested) service->stop();
    }
  });

  log << "serving " << assistant->labels().size() << " intents on http://" << config.host << ':' << config.port
      << std::endl;
  service->listen_after_bind();
  done = true;
  watcher.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  log << "shut down" << std::endl;
  return 0;
}

}  // namespace vta::http
