#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "vta/assistant.hpp"

namespace vta::http {

/// Larger request bodies are rejected with 413.
inline constexpr std::size_t kMaxBodyBytes = 16 * 1024;

struct ServiceOptions {
  /// Served at "/" when set.
  std::optional<std::filesystem::path> static_dir;
  /// Origins answered with CORS headers; "*" allows any. Empty disables CORS.
  std::vector<std::string> cors_origins;
};

struct JsonResponse {
  int status = 200;
  std::string body;
};

/// JSON endpoints over one shared, read-only Assistant:
///   POST /api/chat   {"message": "..."} (optional ?seed=N)
///   GET  /api/health
///   GET  /api/model
class ChatService {
 public:
  explicit ChatService(std::shared_ptr<const Assistant> assistant, ServiceOptions options = {});
  ~ChatService();
  ChatService(const ChatService&) = delete;
  ChatService& operator=(const ChatService&) = delete;

  /// Handler bodies, callable without a socket.
  JsonResponse chat(std::string_view body, std::optional<std::uint64_t> seed = std::nullopt) const;
  JsonResponse health() const;
  JsonResponse model_info() const;

  /// Returns the chosen port. Throws Error when binding fails.
  int bind_any_port(const std::string& host = "127.0.0.1");
  void bind(const std::string& host, int port);
  /// Blocks until stop() is called.
  void listen_after_bind();
  /// Safe from any thread; in-flight requests finish first.
  void stop();
  bool is_running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ServeConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path model_path;
  /// Source of the response texts for the model's tags.
  std::filesystem::path corpus_path;
  std::optional<std::filesystem::path> static_dir;
  std::vector<std::string> cors_origins;
  text::PipelineConfig pipeline = text::PipelineConfig::defaults();

  /// Throws PreconditionError for a port outside [1, 65535].
  void validate() const;
};

/// Loads the model, binds, and serves until SIGINT or SIGTERM. Returns the
/// process exit code: 0 after a clean shutdown, 1 on load or bind failure.
int serve(const ServeConfig& config, std::ostream& log);

}  // namespace vta::http
