#include "cti4ai/aiti/object.hpp"

#include <algorithm>
#include <cctype>

namespace cti4ai::aiti {

namespace {

struct KindNames {
  ObjectKind kind;
  std::string_view canonical;
  std::string_view paper;
};

constexpr std::array<KindNames, 14> kNames = {{
    {ObjectKind::ai_attack, "ai-attack", "AI Attack"},
    {ObjectKind::ai_attack_pattern, "ai-attack-pattern", "AI Attack Pattern"},
    {ObjectKind::affected_user_personas, "affected-user-personas", "Affected User Personas"},
    {ObjectKind::ai_paradigm_under_threat, "ai-paradigm-under-threat",
     "AI Paradigms under Threat"},
    {ObjectKind::ai_use_case, "ai-use-case", "AI Use Cases"},
    {ObjectKind::course_of_action, "course-of-action", "Course of Action"},
    {ObjectKind::identity, "identity", "Identity"},
    {ObjectKind::indicator, "indicator", "Indicator"},
    {ObjectKind::observed_data, "observed-data", "Observed Data"},
    {ObjectKind::threat_actor, "threat-actor", "Threat Actor"},
    {ObjectKind::report, "report", "Report"},
    {ObjectKind::vulnerability, "vulnerability", "Vulnerability"},
    {ObjectKind::relationship, "relationship", "Relationship"},
    {ObjectKind::sighting, "sighting", "Sighting"},
}};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string_view canonical_type_name(ObjectKind kind) {
  return kNames[static_cast<std::size_t>(kind)].canonical;
}

std::optional<ObjectKind> kind_from_canonical(std::string_view name) {
  for (const auto& n : kNames) {
    if (n.canonical == name) return n.kind;
  }
  return std::nullopt;
}

std::string_view paper_type_name(ObjectKind kind) {
  return kNames[static_cast<std::size_t>(kind)].paper;
}

std::optional<ObjectKind> kind_from_paper(std::string_view name) {
  for (const auto& n : kNames) {
    if (iequals(n.paper, name)) return n.kind;
  }
  return std::nullopt;
}

bool in_vocabulary(std::span<const std::string_view> vocabulary, std::string_view value) {
  return std::find(vocabulary.begin(), vocabulary.end(), value) != vocabulary.end();
}

bool body_matches_kind(ObjectKind kind, const ObjectBody& body) {
  switch (kind) {
    case ObjectKind::ai_attack:
      return std::holds_alternative<AiAttackBody>(body);
    case ObjectKind::ai_attack_pattern:
      return std::holds_alternative<AiAttackPatternBody>(body);
    case ObjectKind::affected_user_personas:
      return std::holds_alternative<AffectedUserPersonasBody>(body);
    case ObjectKind::ai_paradigm_under_threat:
      return std::holds_alternative<AiParadigmUnderThreatBody>(body);
    case ObjectKind::ai_use_case:
      return std::holds_alternative<AiUseCaseBody>(body);
    case ObjectKind::relationship:
      return std::holds_alternative<RelationshipBody>(body);
    case ObjectKind::sighting:
      return std::holds_alternative<SightingBody>(body);
    default:
      return std::holds_alternative<DomainObjectBody>(body);
  }
}

std::vector<std::pair<std::string, Identifier>> AitiObject::references() const {
  std::vector<std::pair<std::string, Identifier>> refs;
  if (const auto* rel = std::get_if<RelationshipBody>(&body)) {
    refs.emplace_back("source_ref", rel->source_ref);
    refs.emplace_back("target_ref", rel->target_ref);
  } else if (const auto* sighting = std::get_if<SightingBody>(&body)) {
    refs.emplace_back("sighting_of_ref", sighting->sighting_of_ref);
  } else if (const auto* sdo = std::get_if<DomainObjectBody>(&body)) {
    for (std::size_t i = 0; i < sdo->object_refs.size(); ++i) {
      refs.emplace_back("object_refs/" + std::to_string(i), sdo->object_refs[i]);
    }
  }
  return refs;
}

}  // namespace cti4ai::aiti
