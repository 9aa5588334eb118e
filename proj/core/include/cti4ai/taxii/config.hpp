#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cti4ai::taxii {

/// `application/taxii+json;version=2.1`
inline constexpr const char* kMediaType = "application/taxii+json;version=2.1";

struct CollectionConfig {
  std::string id;
  std::string title;
  std::optional<std::string> description;
  std::optional<std::string> alias;
  bool can_read = true;
  bool can_write = true;

  bool operator==(const CollectionConfig&) const = default;
};

struct ApiRootConfig {
  /// URL path segment, e.g. "aiti" for `/aiti/`.
  std::string name;
  std::string title;
  std::optional<std::string> description;
  std::vector<CollectionConfig> collections;
};

struct TokenConfig {
  std::string token;
  bool can_read = false;
  bool can_write = false;
};

/// Server settings, usually loaded from a JSON file:
///
///     {
///       "title": "...", "description": "...",
///       "bind": "127.0.0.1", "port": 8080,
///       "log_file": "store.jsonl",
///       "api_roots": [{"name": "aiti", "title": "...",
///                      "collections": [{"id": "<uuid>", "title": "ai-vulns",
///                                       "alias": "ai-vulns",
///                                       "can_read": true, "can_write": true}]}],
///       "tokens": [{"token": "secret", "scopes": ["read", "write"]}]
///     }
///
/// A relative log_file is resolved against the config file's directory.
/// Omitting log_file keeps the store in memory only.
struct ServerConfig {
  std::string title = "CTI4AI sharing service";
  std::optional<std::string> description;
  std::string bind = "127.0.0.1";
  int port = 0;
  std::optional<std::filesystem::path> log_file;
  std::vector<ApiRootConfig> api_roots;
  std::vector<TokenConfig> tokens;

  /// Throws ArgumentError on duplicate root names, collection ids or aliases.
  void check() const;

  static ServerConfig from_json(const nlohmann::json& doc,
                                const std::filesystem::path& base_dir = {});
  static ServerConfig load(const std::filesystem::path& path);
};

}  // namespace cti4ai::taxii
