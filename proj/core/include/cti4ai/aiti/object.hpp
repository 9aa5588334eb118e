#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "cti4ai/aiti/identifier.hpp"
#include "cti4ai/common/timestamp.hpp"

namespace cti4ai::aiti {

enum class ObjectKind {
  ai_attack,
  ai_attack_pattern,
  affected_user_personas,
  ai_paradigm_under_threat,
  ai_use_case,
  course_of_action,
  identity,
  indicator,
  observed_data,
  threat_actor,
  report,
  vulnerability,
  relationship,
  sighting,
};

inline constexpr std::array kAllKinds = {
    ObjectKind::ai_attack,       ObjectKind::ai_attack_pattern,
    ObjectKind::affected_user_personas, ObjectKind::ai_paradigm_under_threat,
    ObjectKind::ai_use_case,     ObjectKind::course_of_action,
    ObjectKind::identity,        ObjectKind::indicator,
    ObjectKind::observed_data,   ObjectKind::threat_actor,
    ObjectKind::report,          ObjectKind::vulnerability,
    ObjectKind::relationship,    ObjectKind::sighting,
};

/// Hyphenated STIX-style type name, e.g. `ai-attack`.
std::string_view canonical_type_name(ObjectKind kind);
std::optional<ObjectKind> kind_from_canonical(std::string_view name);

/// Title-style name used by the paper-compatible form, e.g. `AI Use Cases`.
/// AI attacks are spelled `AI Attack-<Category>` instead; see codec.hpp.
std::string_view paper_type_name(ObjectKind kind);
/// Case-insensitive match against paper_type_name.
std::optional<ObjectKind> kind_from_paper(std::string_view name);

// Vocabularies. attack_category is closed; the rest are open and seeded.
inline constexpr std::array<std::string_view, 4> kAttackCategories = {
    "evasion", "poisoning", "model-replication", "exploiting-traditional-software-flaws"};
inline constexpr std::array<std::string_view, 3> kUserPersonas = {
    "average-user", "security-researcher", "ai-ml-researcher"};
inline constexpr std::array<std::string_view, 3> kAiParadigms = {
    "cloud-hosted", "public-server-hosted", "edge"};
inline constexpr std::array<std::string_view, 2> kAiUseCases = {"security-sensitive",
                                                                "non-security-sensitive"};
inline constexpr std::array<std::string_view, 7> kSophistication = {
    "none", "minimal", "intermediate", "advanced", "expert", "innovator", "strategic"};
inline constexpr std::array<std::string_view, 6> kResourceLevels = {
    "individual", "club", "contest", "team", "organization", "government"};
inline constexpr std::array<std::string_view, 10> kMotivations = {
    "accidental",    "coercion",          "dominance",   "ideology",
    "notoriety",     "organizational-gain", "personal-gain", "personal-satisfaction",
    "revenge",       "unpredictable"};

bool in_vocabulary(std::span<const std::string_view> vocabulary, std::string_view value);

struct AiAttackBody {
  /// Stored as text so that out-of-vocabulary values reach validation.
  std::string attack_category;
  std::optional<std::string> ai_attack_pattern;
  std::optional<std::string> description;
  std::optional<std::string> sophistication;
  std::optional<std::string> resource_level;
  std::optional<std::string> primary_motivation;

  bool operator==(const AiAttackBody&) const = default;
};

/// Tactics, techniques and procedures used against AI models.
struct AiAttackPatternBody {
  std::string name;
  std::optional<std::string> description;
  std::optional<std::string> procedure;

  bool operator==(const AiAttackPatternBody&) const = default;
};

struct AffectedUserPersonasBody {
  std::vector<std::string> personas;
  std::optional<std::string> description;

  bool operator==(const AffectedUserPersonasBody&) const = default;
};

struct AiParadigmUnderThreatBody {
  std::vector<std::string> paradigms;
  std::optional<std::string> description;

  bool operator==(const AiParadigmUnderThreatBody&) const = default;
};

struct AiUseCaseBody {
  std::string use_case;
  std::optional<std::string> description;

  bool operator==(const AiUseCaseBody&) const = default;
};

/// Minimal body shared by the kinds inherited from STIX.
struct DomainObjectBody {
  std::optional<std::string> name;
  std::optional<std::string> description;
  std::vector<Identifier> object_refs;

  bool operator==(const DomainObjectBody&) const = default;
};

struct RelationshipBody {
  std::string relationship_type;
  Identifier source_ref;
  Identifier target_ref;
  std::optional<std::string> description;

  bool operator==(const RelationshipBody&) const = default;
};

struct SightingBody {
  Identifier sighting_of_ref;
  std::optional<long long> count;
  std::optional<Timestamp> first_seen;
  std::optional<Timestamp> last_seen;

  bool operator==(const SightingBody&) const = default;
};

using ObjectBody = std::variant<AiAttackBody, AiAttackPatternBody, AffectedUserPersonasBody,
                                AiParadigmUnderThreatBody, AiUseCaseBody, DomainObjectBody,
                                RelationshipBody, SightingBody>;

/// True when `body` holds the alternative that `kind` requires.
bool body_matches_kind(ObjectKind kind, const ObjectBody& body);

struct AitiObject {
  ObjectKind kind;
  Identifier id;
  Timestamp created;
  std::optional<Timestamp> modified;
  ObjectBody body;
  /// Unrecognised properties, preserved verbatim and emitted in key order.
  std::map<std::string, nlohmann::json> custom_properties;

  /// modified if present, else created.
  Timestamp version() const { return modified.value_or(created); }

  /// (property name, referenced id) pairs: relationship endpoints, sighting
  /// targets and object_refs entries.
  std::vector<std::pair<std::string, Identifier>> references() const;

  bool operator==(const AitiObject&) const = default;
};

struct Bundle {
  Identifier id;
  std::vector<AitiObject> objects;

  bool operator==(const Bundle&) const = default;
};

}  // namespace cti4ai::aiti
