#include "cti4ai/aiti/validate.hpp"

#include <map>

#include "cti4ai/common/errors.hpp"

namespace cti4ai::aiti {

std::string_view to_string(ValidationLevel level) {
  return level == ValidationLevel::strict ? "strict" : "lenient";
}

ValidationLevel validation_level_from_string(std::string_view name) {
  if (name == "strict") return ValidationLevel::strict;
  if (name == "lenient") return ValidationLevel::lenient;
  throw ArgumentError("unknown validation level '" + std::string(name) +
                      "' (expected strict or lenient)");
}

namespace {

class Checker {
 public:
  Checker(ValidationLevel level, std::vector<Diagnostic>& out) : level_(level), out_(out) {}

  void error(std::string_view code, std::string path, std::string message) {
    out_.push_back(Diagnostic{Severity::error, std::string(code), std::move(path), std::move(message)});
  }

  void warning(std::string_view code, std::string path, std::string message) {
    out_.push_back(
        Diagnostic{Severity::warning, std::string(code), std::move(path), std::move(message)});
  }

  bool strict() const { return level_ == ValidationLevel::strict; }

  void vocabulary(std::span<const std::string_view> vocab, const std::string& value,
                  const std::string& path, std::string_view what) {
    if (strict() && !in_vocabulary(vocab, value)) {
      warning(codes::kOpenVocabulary, path,
              "'" + value + "' is not a suggested " + std::string(what) + " value");
    }
  }

  void optional_vocabulary(std::span<const std::string_view> vocab,
                           const std::optional<std::string>& value, const std::string& path,
                           std::string_view what) {
    if (value) vocabulary(vocab, *value, path, what);
  }

  void nonempty(const std::string& value, const std::string& path, std::string_view field) {
    if (value.empty()) error(codes::kEmptyField, path, std::string(field) + " must not be empty");
  }

  void object(const AitiObject& obj, const std::string& base) {
    if (!body_matches_kind(obj.kind, obj.body)) {
      error(codes::kKindMismatch, base + "/type",
            "body does not match type '" + std::string(canonical_type_name(obj.kind)) + "'");
      return;
    }
    if (obj.modified && *obj.modified < obj.created) {
      error(codes::kModifiedBeforeCreated, base + "/modified", "modified precedes created");
    }
    if (strict() && !obj.id.is_canonical()) {
      warning(codes::kNonCanonicalId, base + "/id",
              "'" + obj.id.str() + "' is not of the form <type>--<uuid>");
    }
    std::visit([&](const auto& body) { this->body(body, base); }, obj.body);
  }

 private:
  void body(const AiAttackBody& b, const std::string& base) {
    if (!in_vocabulary(kAttackCategories, b.attack_category)) {
      error(codes::kAttackCategory, base + "/attack_category",
            "attack category '" + b.attack_category +
                "' is not one of evasion, poisoning, model-replication, "
                "exploiting-traditional-software-flaws");
    }
    optional_vocabulary(kSophistication, b.sophistication, base + "/sophistication",
                        "sophistication");
    optional_vocabulary(kResourceLevels, b.resource_level, base + "/resource_level",
                        "resource level");
    optional_vocabulary(kMotivations, b.primary_motivation, base + "/primary_motivation",
                        "motivation");
  }

  void body(const AiAttackPatternBody& b, const std::string& base) {
    nonempty(b.name, base + "/name", "name");
  }

  void body(const AffectedUserPersonasBody& b, const std::string& base) {
    if (b.personas.empty()) error(codes::kEmptyList, base + "/personas", "personas must not be empty");
    for (std::size_t i = 0; i < b.personas.size(); ++i) {
      vocabulary(kUserPersonas, b.personas[i], base + "/personas/" + std::to_string(i), "persona");
    }
  }

  void body(const AiParadigmUnderThreatBody& b, const std::string& base) {
    if (b.paradigms.empty()) {
      error(codes::kEmptyList, base + "/paradigms", "paradigms must not be empty");
    }
    for (std::size_t i = 0; i < b.paradigms.size(); ++i) {
      vocabulary(kAiParadigms, b.paradigms[i], base + "/paradigms/" + std::to_string(i),
                 "paradigm");
    }
  }

  void body(const AiUseCaseBody& b, const std::string& base) {
    nonempty(b.use_case, base + "/use_case", "use_case");
    if (!b.use_case.empty()) vocabulary(kAiUseCases, b.use_case, base + "/use_case", "use case");
  }

  void body(const DomainObjectBody&, const std::string&) {}

  void body(const RelationshipBody& b, const std::string& base) {
    nonempty(b.relationship_type, base + "/relationship_type", "relationship_type");
    if (b.source_ref == b.target_ref) {
      error(codes::kSelfReference, base + "/target_ref", "source_ref and target_ref are equal");
    }
  }

  void body(const SightingBody& b, const std::string& base) {
    if (b.count && *b.count < 1) error(codes::kInvalidCount, base + "/count", "count must be positive");
    if (b.first_seen && b.last_seen && *b.last_seen < *b.first_seen) {
      error(codes::kLastSeenBeforeFirstSeen, base + "/last_seen", "last_seen precedes first_seen");
    }
  }

  ValidationLevel level_;
  std::vector<Diagnostic>& out_;
};

}  // namespace

std::vector<Diagnostic> validate_object(const AitiObject& object, ValidationLevel level,
                                        const std::string& path) {
  std::vector<Diagnostic> out;
  Checker(level, out).object(object, path);
  sort_diagnostics(out);
  return out;
}

std::vector<Diagnostic> validate(const Bundle& bundle, ValidationLevel level) {
  std::vector<Diagnostic> out;
  Checker check(level, out);

  std::map<std::string, std::size_t> first_index;
  for (std::size_t i = 0; i < bundle.objects.size(); ++i) {
    const std::string base = "/objects/" + std::to_string(i);
    const AitiObject& obj = bundle.objects[i];
    const auto [it, inserted] = first_index.emplace(obj.id.str(), i);
    if (!inserted) {
      check.error(codes::kDuplicateId, base + "/id",
                  "id '" + obj.id.str() + "' already used by /objects/" + std::to_string(it->second));
    }
    check.object(obj, base);
  }

  for (std::size_t i = 0; i < bundle.objects.size(); ++i) {
    for (const auto& [property, ref] : bundle.objects[i].references()) {
      if (first_index.contains(ref.str())) continue;
      const std::string path = "/objects/" + std::to_string(i) + "/" + property;
      const std::string message = "'" + ref.str() + "' does not resolve to an object in the bundle";
      if (check.strict()) {
        check.error(codes::kDanglingRef, path, message);
      } else {
        check.warning(codes::kDanglingRef, path, message);
      }
    }
  }

  sort_diagnostics(out);
  return out;
}

}  // namespace cti4ai::aiti
