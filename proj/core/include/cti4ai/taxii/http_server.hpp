#pragma once

#include <memory>
#include <string>

#include "cti4ai/taxii/service.hpp"

namespace cti4ai::taxii {

/// Serves a TaxiiService over HTTP/1.1:
///
///     GET  /taxii2/
///     GET  /{root}/
///     GET  /{root}/collections/
///     GET  /{root}/collections/{id}/
///     GET  /{root}/collections/{id}/objects/     match[type], match[id], added_after, limit, next
///     POST /{root}/collections/{id}/objects/
///     GET  /{root}/collections/{id}/objects/{object_id}/
///
/// Object pages carry X-TAXII-Date-Added-First/Last headers.
class HttpServer {
 public:
  explicit HttpServer(TaxiiService& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds without serving yet. Port 0 picks an ephemeral port. Returns the
  /// bound port; throws IoError when binding fails.
  int bind(const std::string& host, int port);

  /// Serves on the calling thread until stop().
  void listen();
  /// Serves on a background thread.
  void start();
  void stop();

  bool running() const;
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cti4ai::taxii
