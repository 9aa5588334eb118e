#include "cti4ai/taxii/config.hpp"

#include <set>

#include "cti4ai/common/errors.hpp"
#include "cti4ai/redteam/io.hpp"

namespace cti4ai::taxii {

namespace {

std::optional<std::string> optional_text(const nlohmann::json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

void ServerConfig::check() const {
  std::set<std::string> roots;
  for (const auto& root : api_roots) {
    if (root.name.empty() || root.name.find('/') != std::string::npos) {
      throw ArgumentError("api root name must be a nonempty path segment");
    }
    if (!roots.insert(root.name).second) throw ArgumentError("duplicate api root '" + root.name + "'");
    std::set<std::string> keys;
    for (const auto& c : root.collections) {
      if (c.id.empty()) throw ArgumentError("collection id must not be empty");
      if (!keys.insert(c.id).second) throw ArgumentError("duplicate collection id '" + c.id + "'");
      if (c.alias && !keys.insert(*c.alias).second) {
        throw ArgumentError("collection alias '" + *c.alias + "' collides with another id or alias");
      }
    }
  }
  if (port < 0 || port > 65535) throw ArgumentError("port out of range");
}

ServerConfig ServerConfig::from_json(const nlohmann::json& doc,
                                     const std::filesystem::path& base_dir) {
  try {
    ServerConfig cfg;
    cfg.title = doc.value("title", cfg.title);
    cfg.description = optional_text(doc, "description");
    cfg.bind = doc.value("bind", cfg.bind);
    cfg.port = doc.value("port", 0);
    if (const auto log = optional_text(doc, "log_file")) {
      std::filesystem::path p(*log);
      cfg.log_file = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    for (const auto& r : doc.value("api_roots", nlohmann::json::array())) {
      ApiRootConfig root;
      root.name = r.at("name").get<std::string>();
      root.title = r.value("title", root.name);
      root.description = optional_text(r, "description");
      for (const auto& c : r.value("collections", nlohmann::json::array())) {
        CollectionConfig col;
        col.id = c.at("id").get<std::string>();
        col.title = c.value("title", col.id);
        col.description = optional_text(c, "description");
        col.alias = optional_text(c, "alias");
        col.can_read = c.value("can_read", true);
        col.can_write = c.value("can_write", true);
        root.collections.push_back(std::move(col));
      }
      cfg.api_roots.push_back(std::move(root));
    }
    for (const auto& t : doc.value("tokens", nlohmann::json::array())) {
      TokenConfig token;
      token.token = t.at("token").get<std::string>();
      for (const auto& scope : t.value("scopes", nlohmann::json::array())) {
        const auto s = scope.get<std::string>();
        if (s == "read") {
          token.can_read = true;
        } else if (s == "write") {
          token.can_write = true;
        } else {
          throw ArgumentError("unknown token scope '" + s + "'");
        }
      }
      cfg.tokens.push_back(std::move(token));
    }
    cfg.check();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed server config: ") + e.what());
  }
}

ServerConfig ServerConfig::load(const std::filesystem::path& path) {
  const auto doc = nlohmann::json::parse(redteam::read_text_file(path), nullptr, false);
  if (doc.is_discarded()) throw IoError("server config " + path.string() + " is not valid JSON");
  return from_json(doc, path.parent_path());
}

}  // namespace cti4ai::taxii
