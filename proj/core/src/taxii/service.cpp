#include "cti4ai/taxii/service.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "cti4ai/aiti/codec.hpp"
#include "cti4ai/aiti/identifier.hpp"
#include "cti4ai/aiti/validate.hpp"
#include "cti4ai/common/text.hpp"

namespace cti4ai::taxii {

using ordered_json = nlohmann::ordered_json;

nlohmann::ordered_json TaxiiError::to_json() const {
  ordered_json doc;
  doc["title"] = what();
  doc["http_status"] = std::to_string(status_);
  return doc;
}

namespace {

std::string store_key(const std::string& root, const std::string& collection_id) {
  return root + "/" + collection_id;
}

std::vector<std::string> store_keys(const ServerConfig& config) {
  std::vector<std::string> keys;
  for (const auto& root : config.api_roots) {
    for (const auto& c : root.collections) keys.push_back(store_key(root.name, c.id));
  }
  return keys;
}

ordered_json collection_resource(const CollectionConfig& c) {
  ordered_json doc;
  doc["id"] = c.id;
  doc["title"] = c.title;
  if (c.description) doc["description"] = *c.description;
  if (c.alias) doc["alias"] = *c.alias;
  doc["can_read"] = c.can_read;
  doc["can_write"] = c.can_write;
  doc["media_types"] = ordered_json::array({kMediaType});
  return doc;
}

// One match[type] value; paper-style AI attack spellings also pin the category.
struct TypeFilter {
  aiti::ObjectKind kind;
  std::optional<std::string> category;

  bool matches(const aiti::AitiObject& obj) const {
    if (obj.kind != kind) return false;
    if (!category) return true;
    return std::get<aiti::AiAttackBody>(obj.body).attack_category == *category;
  }
};

std::optional<TypeFilter> parse_type_filter(const std::string& value) {
  if (const auto kind = aiti::kind_from_canonical(value)) return TypeFilter{*kind, std::nullopt};
  constexpr std::string_view kPrefix = "AI Attack-";
  if (value.starts_with(kPrefix)) {
    return TypeFilter{aiti::ObjectKind::ai_attack,
                      aiti::category_from_display(std::string_view(value).substr(kPrefix.size()))};
  }
  if (const auto kind = aiti::kind_from_paper(value)) return TypeFilter{*kind, std::nullopt};
  return std::nullopt;
}

// Records superseded by a newer version of the same id are hidden.
std::set<std::uint64_t> latest_versions(const std::vector<StoredObjectPtr>& records) {
  std::map<std::string, const StoredObject*> latest;
  for (const auto& r : records) {
    auto& slot = latest[r->object.id.str()];
    if (slot == nullptr || r->version() >= slot->version()) slot = r.get();
  }
  std::set<std::uint64_t> seqs;
  for (const auto& [id, record] : latest) seqs.insert(record->seq);
  return seqs;
}

}  // namespace

TaxiiService::TaxiiService(ServerConfig config, Clock clock, WarningSink warn)
    : config_(std::move(config)), clock_(std::move(clock)) {
  config_.check();
  store_ = std::make_unique<ObjectStore>(store_keys(config_), config_.log_file, clock_,
                                         std::move(warn));
}

TaxiiService::~TaxiiService() = default;

const RecoveryReport& TaxiiService::recovery() const { return store_->recovery(); }

const TokenConfig& TaxiiService::authenticate(const std::optional<std::string>& token) const {
  if (!token || token->empty()) throw TaxiiError(401, "authentication required");
  for (const auto& t : config_.tokens) {
    if (t.token == *token) return t;
  }
  throw TaxiiError(401, "invalid bearer token");
}

const ApiRootConfig& TaxiiService::find_root(const std::string& root) const {
  for (const auto& r : config_.api_roots) {
    if (r.name == root) return r;
  }
  throw TaxiiError(404, "unknown api root '" + root + "'");
}

const CollectionConfig& TaxiiService::find_collection(const ApiRootConfig& root,
                                                      const std::string& id_or_alias) const {
  for (const auto& c : root.collections) {
    if (c.id == id_or_alias || (c.alias && *c.alias == id_or_alias)) return c;
  }
  throw TaxiiError(404, "unknown collection '" + id_or_alias + "'");
}

const CollectionConfig& TaxiiService::authorize(const std::string& root,
                                                const std::string& collection,
                                                const std::optional<std::string>& token,
                                                Access access) const {
  const TokenConfig& who = authenticate(token);
  const CollectionConfig& c = find_collection(find_root(root), collection);
  if (access == Access::read && !(c.can_read && who.can_read)) {
    throw TaxiiError(403, "read access to collection '" + c.id + "' denied");
  }
  if (access == Access::write && !(c.can_write && who.can_write)) {
    throw TaxiiError(403, "write access to collection '" + c.id + "' denied");
  }
  return c;
}

ordered_json TaxiiService::discovery() const {
  ordered_json doc;
  doc["title"] = config_.title;
  if (config_.description) doc["description"] = *config_.description;
  auto roots = ordered_json::array();
  for (const auto& r : config_.api_roots) roots.push_back("/" + r.name + "/");
  if (!roots.empty()) doc["default"] = roots.front();
  doc["api_roots"] = std::move(roots);
  return doc;
}

ordered_json TaxiiService::api_root(const std::string& root,
                                    const std::optional<std::string>& token) const {
  authenticate(token);
  const ApiRootConfig& r = find_root(root);
  ordered_json doc;
  doc["title"] = r.title;
  if (r.description) doc["description"] = *r.description;
  doc["versions"] = ordered_json::array({kMediaType});
  doc["max_content_length"] = 10 * 1024 * 1024;
  return doc;
}

ordered_json TaxiiService::collections(const std::string& root,
                                       const std::optional<std::string>& token) const {
  authenticate(token);
  const ApiRootConfig& r = find_root(root);
  auto list = ordered_json::array();
  for (const auto& c : r.collections) list.push_back(collection_resource(c));
  ordered_json doc;
  doc["collections"] = std::move(list);
  return doc;
}

ordered_json TaxiiService::collection(const std::string& root, const std::string& id_or_alias,
                                      const std::optional<std::string>& token) const {
  authenticate(token);
  return collection_resource(find_collection(find_root(root), id_or_alias));
}

ordered_json TaxiiService::add_objects(const std::string& root, const std::string& collection,
                                       std::string_view body,
                                       const std::optional<std::string>& token) {
  authorize(root, collection, token, Access::write);
  const auto doc = nlohmann::json::parse(body.begin(), body.end(), nullptr, false);
  if (doc.is_discarded()) throw TaxiiError(422, "request body is not valid JSON");
  return add_objects(root, collection, doc, token);
}

ordered_json TaxiiService::add_objects(const std::string& root, const std::string& collection,
                                       const nlohmann::json& envelope,
                                       const std::optional<std::string>& token) {
  const CollectionConfig& c = authorize(root, collection, token, Access::write);
  if (!envelope.is_object() || !envelope.contains("objects") || !envelope["objects"].is_array()) {
    throw TaxiiError(422, "envelope must be an object with an 'objects' array");
  }

  const Timestamp request_time = clock_();
  auto failures = ordered_json::array();
  std::vector<IncomingObject> accepted;
  const auto& items = envelope["objects"];
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    const std::string path = "/objects/" + std::to_string(i);
    std::string id;
    if (item.is_object() && item.contains("id") && item["id"].is_string()) {
      id = item["id"].get<std::string>();
    }
    try {
      auto obj = aiti::parse_object_auto(item, path);
      const auto diagnostics = aiti::validate_object(obj, aiti::ValidationLevel::lenient, path);
      if (aiti::has_errors(diagnostics)) {
        ordered_json f;
        f["id"] = id;
        f["message"] = aiti::format(diagnostics.front());
        failures.push_back(std::move(f));
        continue;
      }
      accepted.push_back(IncomingObject{std::move(obj), item});
    } catch (const aiti::ParseError& e) {
      ordered_json f;
      f["id"] = id;
      f["message"] = aiti::format(e.diagnostics().front());
      failures.push_back(std::move(f));
    }
  }

  auto successes = ordered_json::array();
  std::vector<std::pair<std::string, Timestamp>> ids;
  for (const auto& a : accepted) ids.emplace_back(a.object.id.str(), a.object.version());
  store_->add(store_key(root, c.id), std::move(accepted));
  for (const auto& [id, version] : ids) {
    ordered_json s;
    s["id"] = id;
    s["version"] = version.to_rfc3339();
    successes.push_back(std::move(s));
  }

  static std::mutex uuid_mutex;
  static aiti::UuidSource status_ids = aiti::UuidSource::from_entropy();
  std::string status_id;
  {
    std::lock_guard lock(uuid_mutex);
    status_id = status_ids.next();
  }

  ordered_json status;
  status["id"] = status_id;
  status["status"] = "complete";
  status["request_timestamp"] = request_time.to_rfc3339();
  status["total_count"] = items.size();
  status["success_count"] = successes.size();
  status["successes"] = std::move(successes);
  status["failure_count"] = failures.size();
  status["failures"] = std::move(failures);
  status["pending_count"] = 0;
  return status;
}

ObjectPage TaxiiService::get_objects(const std::string& root, const std::string& collection,
                                     const ObjectQuery& query,
                                     const std::optional<std::string>& token) const {
  const CollectionConfig& c = authorize(root, collection, token, Access::read);

  std::size_t limit = query.limit.value_or(kDefaultPageLimit);
  if (limit == 0) throw TaxiiError(400, "limit must be a positive integer");
  limit = std::min(limit, kMaxPageLimit);

  std::uint64_t after_seq = 0;
  if (query.next) {
    const auto parsed = parse_integer(*query.next);
    if (!parsed || *parsed < 0) throw TaxiiError(400, "invalid next cursor");
    after_seq = static_cast<std::uint64_t>(*parsed);
  }

  // Unrecognised type names match nothing.
  std::vector<TypeFilter> type_filters;
  for (const auto& t : query.match_type) {
    if (auto f = parse_type_filter(t)) type_filters.push_back(*f);
  }
  const std::set<std::string> id_filter(query.match_id.begin(), query.match_id.end());

  const Snapshot snapshot = store_->snapshot(store_key(root, c.id));
  const auto latest = latest_versions(*snapshot);

  auto matches = [&](const StoredObject& r) {
    if (r.seq <= after_seq || !latest.contains(r.seq)) return false;
    if (query.added_after && !(r.date_added > *query.added_after)) return false;
    if (!id_filter.empty() && !id_filter.contains(r.object.id.str())) return false;
    if (!query.match_type.empty()) {
      const bool any = std::any_of(type_filters.begin(), type_filters.end(),
                                   [&](const TypeFilter& f) { return f.matches(r.object); });
      if (!any) return false;
    }
    return true;
  };

  ObjectPage page;
  auto objects = ordered_json::array();
  bool more = false;
  std::uint64_t last_seq = 0;
  for (const auto& record : *snapshot) {
    if (!matches(*record)) continue;
    if (objects.size() == limit) {
      more = true;
      break;
    }
    objects.push_back(aiti::to_json(record->object, aiti::Mode::canonical));
    if (!page.first_added) page.first_added = record->date_added;
    page.last_added = record->date_added;
    last_seq = record->seq;
  }

  page.envelope["more"] = more;
  if (more) page.envelope["next"] = std::to_string(last_seq);
  page.envelope["objects"] = std::move(objects);
  return page;
}

ObjectPage TaxiiService::get_object(const std::string& root, const std::string& collection,
                                    const std::string& object_id,
                                    const std::optional<std::string>& token) const {
  const CollectionConfig& c = authorize(root, collection, token, Access::read);
  const Snapshot snapshot = store_->snapshot(store_key(root, c.id));

  const StoredObject* latest = nullptr;
  for (const auto& record : *snapshot) {
    if (record->object.id.str() != object_id) continue;
    if (latest == nullptr || record->version() >= latest->version()) latest = record.get();
  }
  if (latest == nullptr) throw TaxiiError(404, "object '" + object_id + "' not found");

  ObjectPage page;
  page.envelope["more"] = false;
  page.envelope["objects"] = ordered_json::array({ordered_json(latest->received)});
  page.first_added = latest->date_added;
  page.last_added = latest->date_added;
  return page;
}

}  // namespace cti4ai::taxii
