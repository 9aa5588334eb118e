#include "cti4ai/taxii/http_server.hpp"

#include <atomic>
#include <thread>

#include <httplib.h>

#include "cti4ai/common/errors.hpp"
#include "cti4ai/common/text.hpp"

namespace cti4ai::taxii {

namespace {

std::optional<std::string> bearer_token(const httplib::Request& req) {
  if (!req.has_header("Authorization")) return std::nullopt;
  const std::string value = req.get_header_value("Authorization");
  constexpr std::string_view kScheme = "Bearer ";
  if (value.size() <= kScheme.size() || value.compare(0, kScheme.size(), kScheme) != 0) {
    return std::nullopt;
  }
  return std::string(trim(std::string_view(value).substr(kScheme.size())));
}

void reply(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), kMediaType);
}

void reply_page(httplib::Response& res, const ObjectPage& page) {
  if (page.first_added) res.set_header("X-TAXII-Date-Added-First", page.first_added->to_rfc3339());
  if (page.last_added) res.set_header("X-TAXII-Date-Added-Last", page.last_added->to_rfc3339());
  reply(res, 200, page.envelope);
}

// Comma-separated values across all occurrences of a query parameter.
std::vector<std::string> list_param(const httplib::Request& req, const std::string& key) {
  std::vector<std::string> out;
  const auto n = req.get_param_value_count(key);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string raw = req.get_param_value(key, i);
    for (const auto part : split(raw, ',')) {
      const auto value = trim(part);
      if (!value.empty()) out.emplace_back(value);
    }
  }
  return out;
}

ObjectQuery parse_query(const httplib::Request& req) {
  ObjectQuery q;
  q.match_type = list_param(req, "match[type]");
  q.match_id = list_param(req, "match[id]");
  if (req.has_param("added_after")) {
    const auto value = req.get_param_value("added_after");
    q.added_after = Timestamp::try_parse(value);
    if (!q.added_after) throw TaxiiError(400, "added_after is not a valid timestamp");
  }
  if (req.has_param("limit")) {
    const auto limit = parse_integer(req.get_param_value("limit"));
    if (!limit || *limit <= 0) throw TaxiiError(400, "limit must be a positive integer");
    q.limit = static_cast<std::size_t>(*limit);
  }
  if (req.has_param("next")) q.next = req.get_param_value("next");
  return q;
}

template <typename Handler>
httplib::Server::Handler guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const TaxiiError& e) {
      reply(res, e.status(), e.to_json());
    } catch (const std::exception& e) {
      reply(res, 500, TaxiiError(500, e.what()).to_json());
    }
  };
}

}  // namespace

struct HttpServer::Impl {
  explicit Impl(TaxiiService& s) : service(s) {}

  TaxiiService& service;
  httplib::Server server;
  std::thread thread;
  int port = -1;
  std::atomic<bool> started{false};
};

HttpServer::HttpServer(TaxiiService& service) : impl_(std::make_unique<Impl>(service)) {
  auto& svr = impl_->server;
  TaxiiService& svc = service;

  svr.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  svr.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    const int status = res.status;
    reply(res, status, TaxiiError(status, status == 404 ? "no such resource" : "request failed").to_json());
    return httplib::Server::HandlerResponse::Handled;
  });

  svr.Get(R"(/taxii2/?)", guarded([&svc](const httplib::Request&, httplib::Response& res) {
            reply(res, 200, svc.discovery());
          }));
  svr.Get(R"(/([^/]+)/?)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
            reply(res, 200, svc.api_root(req.matches[1], bearer_token(req)));
          }));
  svr.Get(R"(/([^/]+)/collections/?)",
          guarded([&svc](const httplib::Request& req, httplib::Response& res) {
            reply(res, 200, svc.collections(req.matches[1], bearer_token(req)));
          }));
  svr.Get(R"(/([^/]+)/collections/([^/]+)/?)",
          guarded([&svc](const httplib::Request& req, httplib::Response& res) {
            reply(res, 200, svc.collection(req.matches[1], req.matches[2], bearer_token(req)));
          }));
  svr.Get(R"(/([^/]+)/collections/([^/]+)/objects/?)",
          guarded([&svc](const httplib::Request& req, httplib::Response& res) {
            const auto token = bearer_token(req);
            const ObjectQuery query = parse_query(req);
            reply_page(res, svc.get_objects(req.matches[1], req.matches[2], query, token));
          }));
  svr.Post(R"(/([^/]+)/collections/([^/]+)/objects/?)",
           guarded([&svc](const httplib::Request& req, httplib::Response& res) {
             reply(res, 202,
                   svc.add_objects(req.matches[1], req.matches[2], std::string_view(req.body),
                                   bearer_token(req)));
           }));
  svr.Get(R"(/([^/]+)/collections/([^/]+)/objects/(.+?)/?)",
          guarded([&svc](const httplib::Request& req, httplib::Response& res) {
            reply_page(res, svc.get_object(req.matches[1], req.matches[2], req.matches[3],
                                           bearer_token(req)));
          }));
}

HttpServer::~HttpServer() {
  // httplib only closes the listening socket of a running server.
  if (impl_->port >= 0 && !impl_->started) start();
  stop();
}

int HttpServer::bind(const std::string& host, int port) {
  auto& svr = impl_->server;
  if (port == 0) {
    impl_->port = svr.bind_to_any_port(host);
  } else {
    impl_->port = svr.bind_to_port(host, port) ? port : -1;
  }
  if (impl_->port < 0) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  return impl_->port;
}

void HttpServer::listen() {
  if (impl_->port < 0) throw IoError("listen() called before bind()");
  impl_->started = true;
  impl_->server.listen_after_bind();
}

void HttpServer::start() {
  if (impl_->port < 0) throw IoError("start() called before bind()");
  impl_->started = true;
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

int HttpServer::port() const { return impl_->port; }

}  // namespace cti4ai::taxii
