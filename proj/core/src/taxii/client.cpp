#include "cti4ai/taxii/client.hpp"

#include <httplib.h>

#include "cti4ai/common/text.hpp"

namespace cti4ai::taxii {

bool ClientPage::more() const { return envelope.value("more", false); }

std::optional<std::string> ClientPage::next() const {
  const auto it = envelope.find("next");
  if (it == envelope.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

const nlohmann::json& ClientPage::objects() const {
  static const nlohmann::json empty = nlohmann::json::array();
  const auto it = envelope.find("objects");
  return it != envelope.end() && it->is_array() ? *it : empty;
}

namespace {

std::string join_encoded(const std::vector<std::string>& values) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ',';
    out += percent_encode(v);
  }
  return out;
}

std::string query_string(const ObjectQuery& q) {
  std::vector<std::string> parts;
  if (!q.match_type.empty()) parts.push_back("match%5Btype%5D=" + join_encoded(q.match_type));
  if (!q.match_id.empty()) parts.push_back("match%5Bid%5D=" + join_encoded(q.match_id));
  if (q.added_after) parts.push_back("added_after=" + percent_encode(q.added_after->to_rfc3339()));
  if (q.limit) parts.push_back("limit=" + std::to_string(*q.limit));
  if (q.next) parts.push_back("next=" + percent_encode(*q.next));
  std::string out;
  for (const auto& p : parts) {
    out += out.empty() ? '?' : '&';
    out += p;
  }
  return out;
}

std::string collection_path(const std::string& root, const std::string& collection) {
  return "/" + percent_encode(root) + "/collections/" + percent_encode(collection) + "/";
}

}  // namespace

struct Client::Impl {
  Impl(const std::string& base_url, std::optional<std::string> t)
      : http(base_url), token(std::move(t)) {
    if (!http.is_valid()) throw NetworkError("invalid server URL '" + base_url + "'");
    http.set_url_encode(false);
    http.set_connection_timeout(5);
    http.set_read_timeout(30);
  }

  httplib::Headers headers() const {
    httplib::Headers h{{"Accept", std::string(kMediaType)}};
    if (token) h.emplace("Authorization", "Bearer " + *token);
    return h;
  }

  std::pair<nlohmann::json, httplib::Headers> check(const httplib::Result& res) {
    if (!res) throw NetworkError("request failed: " + httplib::to_string(res.error()));
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception&) {
      throw NetworkError("server returned HTTP " + std::to_string(res->status) +
                         " with a non-JSON body");
    }
    if (res->status >= 400) {
      const std::string title =
          body.is_object() ? body.value("title", std::string("HTTP error")) : "HTTP error";
      if (res->status == 401 || res->status == 403) throw AuthError(res->status, title);
      throw TaxiiError(res->status, title);
    }
    return {std::move(body), res->headers};
  }

  nlohmann::json get_json(const std::string& path) { return check(http.Get(path, headers())).first; }

  ClientPage get_page(const std::string& path) {
    auto [body, hdrs] = check(http.Get(path, headers()));
    ClientPage page{std::move(body), std::nullopt, std::nullopt};
    if (auto it = hdrs.find("X-TAXII-Date-Added-First"); it != hdrs.end()) page.first_added = it->second;
    if (auto it = hdrs.find("X-TAXII-Date-Added-Last"); it != hdrs.end()) page.last_added = it->second;
    return page;
  }

  httplib::Client http;
  std::optional<std::string> token;
};

Client::Client(const std::string& base_url, std::optional<std::string> token)
    : impl_(std::make_unique<Impl>(base_url, std::move(token))) {}

Client::~Client() = default;

nlohmann::json Client::discovery() { return impl_->get_json("/taxii2/"); }

nlohmann::json Client::collections(const std::string& root) {
  return impl_->get_json("/" + percent_encode(root) + "/collections/");
}

nlohmann::json Client::add_objects(const std::string& root, const std::string& collection,
                                   const nlohmann::json& envelope) {
  return impl_
      ->check(impl_->http.Post(collection_path(root, collection) + "objects/", impl_->headers(),
                               envelope.dump(), std::string(kMediaType)))
      .first;
}

ClientPage Client::get_objects_page(const std::string& root, const std::string& collection,
                                    const ObjectQuery& query) {
  return impl_->get_page(collection_path(root, collection) + "objects/" + query_string(query));
}

std::vector<nlohmann::json> Client::get_all_objects(const std::string& root,
                                                    const std::string& collection,
                                                    ObjectQuery query) {
  std::vector<nlohmann::json> out;
  for (;;) {
    const ClientPage page = get_objects_page(root, collection, query);
    for (const auto& o : page.objects()) out.push_back(o);
    const auto next = page.next();
    if (!page.more() || !next) break;
    query.next = next;
  }
  return out;
}

ClientPage Client::get_object(const std::string& root, const std::string& collection,
                              const std::string& object_id) {
  return impl_->get_page(collection_path(root, collection) + "objects/" +
                         percent_encode(object_id) + "/");
}

}  // namespace cti4ai::taxii
