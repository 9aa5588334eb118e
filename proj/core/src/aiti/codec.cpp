#include "cti4ai/aiti/codec.hpp"

#include <cctype>
#include <set>

#include "cti4ai/common/errors.hpp"

namespace cti4ai::aiti {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kPaperAttackPrefix = "AI Attack-";
constexpr const char* kPaperPatternKey = "AI Attack Pattern";

bool istarts_with(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

// Reads typed properties from one object, remembering which keys were used
// and collecting diagnostics instead of stopping at the first problem.
class PropertyReader {
 public:
  PropertyReader(const json& doc, std::string base, std::vector<Diagnostic>& diagnostics)
      : doc_(doc), base_(std::move(base)), diagnostics_(diagnostics) {}

  std::string path(std::string_view key) const { return base_ + "/" + pointer_segment(key); }

  void error(std::string_view key, std::string code, std::string message) {
    diagnostics_.push_back(
        Diagnostic{Severity::error, std::move(code), path(key), std::move(message)});
  }

  const json* find(const std::string& key, bool required) {
    used_.insert(key);
    const auto it = doc_.find(key);
    if (it == doc_.end() || it->is_null()) {
      if (required) error(key, "missing-field", "required property '" + key + "' is missing");
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> text(const std::string& key, bool required = false) {
    const json* v = find(key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) {
      error(key, "wrong-type", "property '" + key + "' must be a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<std::vector<std::string>> text_list(const std::string& key, bool required) {
    const json* v = find(key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_array()) {
      error(key, "wrong-type", "property '" + key + "' must be an array of strings");
      return std::nullopt;
    }
    std::vector<std::string> out;
    for (const auto& item : *v) {
      if (!item.is_string()) {
        error(key, "wrong-type", "property '" + key + "' must be an array of strings");
        return std::nullopt;
      }
      out.push_back(item.get<std::string>());
    }
    return out;
  }

  std::optional<Identifier> identifier(const std::string& key, bool required) {
    const auto raw = text(key, required);
    if (!raw) return std::nullopt;
    try {
      return Identifier(*raw);
    } catch (const ArgumentError& e) {
      error(key, "invalid-id", e.what());
      return std::nullopt;
    }
  }

  std::optional<std::vector<Identifier>> identifier_list(const std::string& key) {
    const auto raw = text_list(key, false);
    if (!raw) return std::nullopt;
    std::vector<Identifier> out;
    for (std::size_t i = 0; i < raw->size(); ++i) {
      try {
        out.emplace_back((*raw)[i]);
      } catch (const ArgumentError& e) {
        diagnostics_.push_back(Diagnostic{Severity::error, "invalid-id",
                                          path(key) + "/" + std::to_string(i), e.what()});
        return std::nullopt;
      }
    }
    return out;
  }

  std::optional<Timestamp> timestamp(const std::string& key, bool required) {
    const auto raw = text(key, required);
    if (!raw) return std::nullopt;
    auto t = Timestamp::try_parse(*raw);
    if (!t) error(key, "invalid-timestamp", "property '" + key + "' is not an RFC 3339 timestamp");
    return t;
  }

  std::optional<long long> integer(const std::string& key) {
    const json* v = find(key, false);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number_integer()) {
      error(key, "wrong-type", "property '" + key + "' must be an integer");
      return std::nullopt;
    }
    return v->get<long long>();
  }

  void mark_used(const std::string& key) { used_.insert(key); }

  std::map<std::string, json> leftovers() const {
    std::map<std::string, json> out;
    for (const auto& [key, value] : doc_.items()) {
      if (!used_.contains(key)) out.emplace(key, value);
    }
    return out;
  }

 private:
  const json& doc_;
  std::string base_;
  std::vector<Diagnostic>& diagnostics_;
  std::set<std::string> used_;
};

const Identifier& placeholder_id() {
  static const Identifier id("invalid");
  return id;
}

ObjectBody read_body(ObjectKind kind, Mode mode, PropertyReader& in,
                     std::optional<std::string> category_from_type) {
  switch (kind) {
    case ObjectKind::ai_attack: {
      AiAttackBody body;
      if (category_from_type) {
        body.attack_category = *category_from_type;
      } else {
        body.attack_category = in.text("attack_category", true).value_or("");
      }
      body.ai_attack_pattern =
          in.text(mode == Mode::paper_compat ? kPaperPatternKey : "ai_attack_pattern");
      body.description = in.text("description");
      body.sophistication = in.text("sophistication");
      body.resource_level = in.text("resource_level");
      body.primary_motivation = in.text("primary_motivation");
      return body;
    }
    case ObjectKind::ai_attack_pattern: {
      AiAttackPatternBody body;
      body.name = in.text("name", true).value_or("");
      body.description = in.text("description");
      body.procedure = in.text("procedure");
      return body;
    }
    case ObjectKind::affected_user_personas: {
      AffectedUserPersonasBody body;
      body.personas = in.text_list("personas", true).value_or(std::vector<std::string>{});
      body.description = in.text("description");
      return body;
    }
    case ObjectKind::ai_paradigm_under_threat: {
      AiParadigmUnderThreatBody body;
      body.paradigms = in.text_list("paradigms", true).value_or(std::vector<std::string>{});
      body.description = in.text("description");
      return body;
    }
    case ObjectKind::ai_use_case: {
      AiUseCaseBody body;
      body.use_case = in.text("use_case", true).value_or("");
      body.description = in.text("description");
      return body;
    }
    case ObjectKind::relationship: {
      const auto type = in.text("relationship_type", true);
      const auto source = in.identifier("source_ref", true);
      const auto target = in.identifier("target_ref", true);
      return RelationshipBody{type.value_or(""), source.value_or(placeholder_id()),
                              target.value_or(placeholder_id()), in.text("description")};
    }
    case ObjectKind::sighting: {
      const auto of = in.identifier("sighting_of_ref", true);
      SightingBody body{of.value_or(placeholder_id()), std::nullopt, std::nullopt, std::nullopt};
      body.count = in.integer("count");
      body.first_seen = in.timestamp("first_seen", false);
      body.last_seen = in.timestamp("last_seen", false);
      return body;
    }
    default: {
      DomainObjectBody body;
      body.name = in.text("name");
      body.description = in.text("description");
      body.object_refs = in.identifier_list("object_refs").value_or(std::vector<Identifier>{});
      return body;
    }
  }
}

std::string timestamp_text(Timestamp t, Mode mode) {
  return mode == Mode::canonical ? t.to_rfc3339() : t.to_zoneless();
}

void put(ordered_json& doc, const char* key, const std::optional<std::string>& value) {
  if (value) doc[key] = *value;
}

void write_body(ordered_json& doc, const AitiObject& obj, Mode mode) {
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, AiAttackBody>) {
          if (mode == Mode::canonical) {
            doc["attack_category"] = body.attack_category;
            put(doc, "ai_attack_pattern", body.ai_attack_pattern);
          } else {
            put(doc, kPaperPatternKey, body.ai_attack_pattern);
          }
          put(doc, "description", body.description);
          put(doc, "sophistication", body.sophistication);
          put(doc, "resource_level", body.resource_level);
          put(doc, "primary_motivation", body.primary_motivation);
        } else if constexpr (std::is_same_v<T, AiAttackPatternBody>) {
          doc["name"] = body.name;
          put(doc, "description", body.description);
          put(doc, "procedure", body.procedure);
        } else if constexpr (std::is_same_v<T, AffectedUserPersonasBody>) {
          doc["personas"] = body.personas;
          put(doc, "description", body.description);
        } else if constexpr (std::is_same_v<T, AiParadigmUnderThreatBody>) {
          doc["paradigms"] = body.paradigms;
          put(doc, "description", body.description);
        } else if constexpr (std::is_same_v<T, AiUseCaseBody>) {
          doc["use_case"] = body.use_case;
          put(doc, "description", body.description);
        } else if constexpr (std::is_same_v<T, DomainObjectBody>) {
          put(doc, "name", body.name);
          put(doc, "description", body.description);
          if (!body.object_refs.empty()) {
            auto refs = ordered_json::array();
            for (const auto& r : body.object_refs) refs.push_back(r.str());
            doc["object_refs"] = std::move(refs);
          }
        } else if constexpr (std::is_same_v<T, RelationshipBody>) {
          doc["relationship_type"] = body.relationship_type;
          doc["source_ref"] = body.source_ref.str();
          doc["target_ref"] = body.target_ref.str();
          put(doc, "description", body.description);
        } else if constexpr (std::is_same_v<T, SightingBody>) {
          doc["sighting_of_ref"] = body.sighting_of_ref.str();
          if (body.count) doc["count"] = *body.count;
          if (body.first_seen) doc["first_seen"] = timestamp_text(*body.first_seen, mode);
          if (body.last_seen) doc["last_seen"] = timestamp_text(*body.last_seen, mode);
        }
      },
      obj.body);
}

// Every key the schema can produce for a kind in a mode, used to keep custom
// properties from shadowing schema keys.
std::set<std::string> schema_keys(ObjectKind kind, Mode mode) {
  std::set<std::string> keys = {"type", "id", "created", "modified"};
  switch (kind) {
    case ObjectKind::ai_attack:
      if (mode == Mode::canonical) {
        keys.insert({"attack_category", "ai_attack_pattern"});
      } else {
        keys.insert(kPaperPatternKey);
      }
      keys.insert({"description", "sophistication", "resource_level", "primary_motivation"});
      break;
    case ObjectKind::ai_attack_pattern:
      keys.insert({"name", "description", "procedure"});
      break;
    case ObjectKind::affected_user_personas:
      keys.insert({"personas", "description"});
      break;
    case ObjectKind::ai_paradigm_under_threat:
      keys.insert({"paradigms", "description"});
      break;
    case ObjectKind::ai_use_case:
      keys.insert({"use_case", "description"});
      break;
    case ObjectKind::relationship:
      keys.insert({"relationship_type", "source_ref", "target_ref", "description"});
      break;
    case ObjectKind::sighting:
      keys.insert({"sighting_of_ref", "count", "first_seen", "last_seen"});
      break;
    default:
      keys.insert({"name", "description", "object_refs"});
      break;
  }
  return keys;
}

json parse_text(std::string_view text) {
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded()) {
    throw ParseError({Diagnostic{Severity::error, "malformed-json", "", "document is not valid JSON"}});
  }
  return doc;
}

}  // namespace

std::string_view to_string(Mode m) {
  return m == Mode::canonical ? "canonical" : "paper-compat";
}

Mode mode_from_string(std::string_view name) {
  if (name == "canonical") return Mode::canonical;
  if (name == "paper-compat" || name == "paper_compat" || name == "paper") return Mode::paper_compat;
  throw ArgumentError("unknown mode '" + std::string(name) + "' (expected canonical or paper-compat)");
}

Mode detect_mode(const json& doc) {
  if (doc.is_object()) {
    const auto it = doc.find("type");
    if (it != doc.end() && it->is_string() && kind_from_canonical(it->get<std::string>())) {
      return Mode::canonical;
    }
  }
  return Mode::paper_compat;
}

std::string category_display_name(std::string_view category) {
  std::string out;
  bool start = true;
  for (const char c : category) {
    if (c == '-') {
      out.push_back(' ');
      start = true;
    } else {
      out.push_back(start ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c);
      start = false;
    }
  }
  return out;
}

std::string category_from_display(std::string_view display) {
  std::string out;
  for (const char c : display) {
    out.push_back(c == ' ' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

AitiObject parse_object(const json& doc, Mode mode, const std::string& path) {
  std::vector<Diagnostic> diagnostics;
  if (!doc.is_object()) {
    throw ParseError({Diagnostic{Severity::error, "wrong-type", path, "object must be a JSON object"}});
  }
  PropertyReader in(doc, path, diagnostics);

  std::optional<ObjectKind> kind;
  std::optional<std::string> category_from_type;
  if (const auto type = in.text("type", true)) {
    if (mode == Mode::canonical) {
      kind = kind_from_canonical(*type);
    } else if (istarts_with(*type, kPaperAttackPrefix)) {
      kind = ObjectKind::ai_attack;
      category_from_type = category_from_display(type->substr(kPaperAttackPrefix.size()));
    } else {
      kind = kind_from_paper(*type);
      if (!kind) kind = kind_from_canonical(*type);
    }
    if (!kind) {
      in.error("type", "unknown-type", "unknown object type '" + *type + "'");
    }
  }

  const auto id = in.identifier("id", true);
  const auto created = in.timestamp("created", true);
  const auto modified = in.timestamp("modified", false);

  if (!kind) {
    sort_diagnostics(diagnostics);
    throw ParseError(std::move(diagnostics));
  }

  // A paper-style AI attack without a category suffix may carry the category
  // as a property instead.
  if (mode == Mode::paper_compat && *kind == ObjectKind::ai_attack && !category_from_type) {
    category_from_type = in.text("attack_category", true).value_or("");
  }

  ObjectBody body = read_body(*kind, mode, in, category_from_type);
  if (has_errors(diagnostics)) {
    sort_diagnostics(diagnostics);
    throw ParseError(std::move(diagnostics));
  }

  return AitiObject{*kind, *id, *created, modified, std::move(body), in.leftovers()};
}

AitiObject parse_object(std::string_view text, Mode mode) {
  return parse_object(parse_text(text), mode);
}

AitiObject parse_object_auto(const json& doc, const std::string& path) {
  return parse_object(doc, detect_mode(doc), path);
}

ordered_json to_json(const AitiObject& obj, Mode mode) {
  ordered_json doc;
  if (obj.kind == ObjectKind::ai_attack && mode == Mode::paper_compat) {
    const auto& body = std::get<AiAttackBody>(obj.body);
    doc["type"] = std::string(kPaperAttackPrefix) + category_display_name(body.attack_category);
  } else if (mode == Mode::paper_compat) {
    doc["type"] = std::string(paper_type_name(obj.kind));
  } else {
    doc["type"] = std::string(canonical_type_name(obj.kind));
  }
  doc["id"] = obj.id.str();
  doc["created"] = timestamp_text(obj.created, mode);
  if (obj.modified) doc["modified"] = timestamp_text(*obj.modified, mode);
  write_body(doc, obj, mode);

  const auto reserved = schema_keys(obj.kind, mode);
  for (const auto& [key, value] : obj.custom_properties) {
    if (!reserved.contains(key)) doc[key] = value;
  }
  return doc;
}

std::string serialize_object(const AitiObject& obj, Mode mode) { return to_json(obj, mode).dump(); }

Bundle parse_bundle(const json& doc, std::optional<Mode> mode) {
  std::vector<Diagnostic> diagnostics;
  if (!doc.is_object()) {
    throw ParseError({Diagnostic{Severity::error, "wrong-type", "", "bundle must be a JSON object"}});
  }
  PropertyReader in(doc, "", diagnostics);
  const auto type = in.text("type", true);
  if (type && *type != "bundle") {
    in.error("type", "unknown-type", "bundle type must be 'bundle'");
  }
  const auto id = in.identifier("id", true);

  std::vector<AitiObject> objects;
  const auto it = doc.find("objects");
  if (it != doc.end() && !it->is_null()) {
    if (!it->is_array()) {
      in.error("objects", "wrong-type", "objects must be an array");
    } else {
      for (std::size_t i = 0; i < it->size(); ++i) {
        const json& item = (*it)[i];
        const std::string path = "/objects/" + std::to_string(i);
        try {
          objects.push_back(parse_object(item, mode.value_or(detect_mode(item)), path));
        } catch (const ParseError& e) {
          diagnostics.insert(diagnostics.end(), e.diagnostics().begin(), e.diagnostics().end());
        }
      }
    }
  }

  if (has_errors(diagnostics)) {
    sort_diagnostics(diagnostics);
    throw ParseError(std::move(diagnostics));
  }
  return Bundle{*id, std::move(objects)};
}

Bundle parse_bundle(std::string_view text, std::optional<Mode> mode) {
  return parse_bundle(parse_text(text), mode);
}

ordered_json to_json(const Bundle& bundle, Mode mode) {
  ordered_json doc;
  doc["type"] = "bundle";
  doc["id"] = bundle.id.str();
  auto objects = ordered_json::array();
  for (const auto& obj : bundle.objects) objects.push_back(to_json(obj, mode));
  doc["objects"] = std::move(objects);
  return doc;
}

std::string serialize_bundle(const Bundle& bundle, Mode mode) { return to_json(bundle, mode).dump(); }

}  // namespace cti4ai::aiti
