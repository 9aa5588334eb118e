#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cti4ai/taxii/service.hpp"

namespace cti4ai::taxii {

/// The server could not be reached or the response was not TAXII JSON.
class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 401 or 403 from the server.
class AuthError : public TaxiiError {
 public:
  using TaxiiError::TaxiiError;
};

struct ClientPage {
  nlohmann::json envelope;
  std::optional<std::string> first_added;
  std::optional<std::string> last_added;

  bool more() const;
  std::optional<std::string> next() const;
  const nlohmann::json& objects() const;
};

/// Minimal TAXII 2.1 consumer/producer over HTTP.
///
///     Client c("http://127.0.0.1:8080", "secret");
///     c.add_objects("api1", "models", {{"objects", objects}});
///     for (auto& o : c.get_all_objects("api1", "models")) { ... }
class Client {
 public:
  /// `base_url` is scheme://host[:port]; only http is supported.
  Client(const std::string& base_url, std::optional<std::string> token);
  ~Client();

  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  nlohmann::json discovery();
  nlohmann::json collections(const std::string& root);
  nlohmann::json add_objects(const std::string& root, const std::string& collection,
                             const nlohmann::json& envelope);
  ClientPage get_objects_page(const std::string& root, const std::string& collection,
                              const ObjectQuery& query);
  /// Follows `next` until `more` is false.
  std::vector<nlohmann::json> get_all_objects(const std::string& root,
                                              const std::string& collection,
                                              ObjectQuery query = {});
  ClientPage get_object(const std::string& root, const std::string& collection,
                        const std::string& object_id);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cti4ai::taxii
