#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cti4ai/aiti/diagnostic.hpp"
#include "cti4ai/aiti/object.hpp"

namespace cti4ai::aiti {

/// Wire spelling.
///
/// canonical: STIX 2.1 style. `type` is the hyphenated kind, attack_category
/// is its own property, timestamps end in `Z` with milliseconds.
///
/// paper_compat: AI attacks are typed `AI Attack-<Category>`, the attack
/// pattern key is `AI Attack Pattern`, other kinds use title-style type
/// names, and timestamps are zone-less.
enum class Mode { canonical, paper_compat };

std::string_view to_string(Mode m);
/// Accepts `canonical`, `paper-compat` and `paper`.
Mode mode_from_string(std::string_view name);

/// canonical when `type` is a hyphenated kind name, else paper_compat.
Mode detect_mode(const nlohmann::json& doc);

/// `Model Replication` style label for a category value.
std::string category_display_name(std::string_view category);
/// Lowercases and replaces spaces with hyphens.
std::string category_from_display(std::string_view display);

/// Throws ParseError. Diagnostic paths are prefixed with `path`.
AitiObject parse_object(const nlohmann::json& doc, Mode mode, const std::string& path = "");
AitiObject parse_object(std::string_view text, Mode mode);
inline AitiObject parse_object(const std::string& text, Mode mode) {
  return parse_object(std::string_view(text), mode);
}
inline AitiObject parse_object(const char* text, Mode mode) {
  return parse_object(std::string_view(text), mode);
}
/// Parses using detect_mode.
AitiObject parse_object_auto(const nlohmann::json& doc, const std::string& path = "");

/// Key order: type, id, created, modified, body fields in schema order,
/// then custom properties in lexicographic order. Custom properties whose
/// names collide with schema keys of the chosen mode are not emitted.
nlohmann::ordered_json to_json(const AitiObject& object, Mode mode);
/// Compact JSON text of to_json.
std::string serialize_object(const AitiObject& object, Mode mode);

/// `{"type": "bundle", "id": ..., "objects": [...]}`. With no mode each
/// object's spelling is detected individually.
Bundle parse_bundle(const nlohmann::json& doc, std::optional<Mode> mode = std::nullopt);
Bundle parse_bundle(std::string_view text, std::optional<Mode> mode = std::nullopt);
inline Bundle parse_bundle(const std::string& text, std::optional<Mode> mode = std::nullopt) {
  return parse_bundle(std::string_view(text), mode);
}

nlohmann::ordered_json to_json(const Bundle& bundle, Mode mode);
std::string serialize_bundle(const Bundle& bundle, Mode mode);

}  // namespace cti4ai::aiti
