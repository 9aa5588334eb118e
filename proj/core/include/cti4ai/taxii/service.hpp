#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cti4ai/common/timestamp.hpp"
#include "cti4ai/taxii/config.hpp"
#include "cti4ai/taxii/store.hpp"

namespace cti4ai::taxii {

/// A request that fails with an HTTP status (400, 401, 403, 404, 422).
class TaxiiError : public std::runtime_error {
 public:
  TaxiiError(int status, std::string title)
      : std::runtime_error(std::move(title)), status_(status) {}

  int status() const noexcept { return status_; }

  /// TAXII error message body.
  nlohmann::ordered_json to_json() const;

 private:
  int status_;
};

struct ObjectQuery {
  /// Any of these types, in canonical (`ai-attack`) or paper-compatible
  /// (`AI Attack-Evasion`, `AI Use Cases`) spelling.
  std::vector<std::string> match_type;
  std::vector<std::string> match_id;
  /// Exclusive lower bound on date_added.
  std::optional<Timestamp> added_after;
  std::optional<std::size_t> limit;
  /// Cursor from a previous page's `next`.
  std::optional<std::string> next;
};

struct ObjectPage {
  nlohmann::ordered_json envelope;
  std::optional<Timestamp> first_added;
  std::optional<Timestamp> last_added;
};

inline constexpr std::size_t kDefaultPageLimit = 100;
inline constexpr std::size_t kMaxPageLimit = 1000;

/// Transport-independent TAXII 2.1 subset: discovery, api roots,
/// collections, objects (GET/POST) and object-by-id.
///
/// Authentication is checked before any lookup, so an unauthenticated
/// request gets 401 even for unknown roots or collections.
class TaxiiService {
 public:
  explicit TaxiiService(ServerConfig config, Clock clock = system_clock(),
                        WarningSink warn = stderr_warnings());
  ~TaxiiService();

  const ServerConfig& config() const { return config_; }
  const RecoveryReport& recovery() const;

  nlohmann::ordered_json discovery() const;
  nlohmann::ordered_json api_root(const std::string& root,
                                  const std::optional<std::string>& token) const;
  nlohmann::ordered_json collections(const std::string& root,
                                     const std::optional<std::string>& token) const;
  nlohmann::ordered_json collection(const std::string& root, const std::string& id_or_alias,
                                    const std::optional<std::string>& token) const;

  /// Returns a status resource. Processing is synchronous so the status is
  /// always "complete".
  nlohmann::ordered_json add_objects(const std::string& root, const std::string& collection,
                                     std::string_view body,
                                     const std::optional<std::string>& token);
  nlohmann::ordered_json add_objects(const std::string& root, const std::string& collection,
                                     const nlohmann::json& envelope,
                                     const std::optional<std::string>& token);

  /// Objects in (date_added, seq) order, latest version of each id only.
  ObjectPage get_objects(const std::string& root, const std::string& collection,
                         const ObjectQuery& query, const std::optional<std::string>& token) const;

  /// Latest version of one object, in the spelling it was received with.
  ObjectPage get_object(const std::string& root, const std::string& collection,
                        const std::string& object_id,
                        const std::optional<std::string>& token) const;

 private:
  enum class Access { read, write };

  const TokenConfig& authenticate(const std::optional<std::string>& token) const;
  const ApiRootConfig& find_root(const std::string& root) const;
  const CollectionConfig& find_collection(const ApiRootConfig& root,
                                          const std::string& id_or_alias) const;
  const CollectionConfig& authorize(const std::string& root, const std::string& collection,
                                    const std::optional<std::string>& token, Access access) const;

  ServerConfig config_;
  Clock clock_;
  std::unique_ptr<ObjectStore> store_;
};

}  // namespace cti4ai::taxii
