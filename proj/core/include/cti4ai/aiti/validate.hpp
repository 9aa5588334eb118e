#pragma once

#include <string_view>
#include <vector>

#include "cti4ai/aiti/diagnostic.hpp"
#include "cti4ai/aiti/object.hpp"

namespace cti4ai::aiti {

/// strict: dangling references are errors; open-vocabulary values outside
/// the seeded lists and non-canonical ids produce warnings.
/// lenient: dangling references are warnings; vocabulary and id-format
/// checks are skipped. Both levels report the same structural errors.
enum class ValidationLevel { strict, lenient };

std::string_view to_string(ValidationLevel level);
ValidationLevel validation_level_from_string(std::string_view name);

/// Diagnostic codes emitted by validate().
namespace codes {
inline constexpr std::string_view kDuplicateId = "duplicate-id";
inline constexpr std::string_view kDanglingRef = "dangling-ref";
inline constexpr std::string_view kSelfReference = "self-reference";
inline constexpr std::string_view kAttackCategory = "attack-category";
inline constexpr std::string_view kOpenVocabulary = "open-vocabulary";
inline constexpr std::string_view kEmptyField = "empty-field";
inline constexpr std::string_view kEmptyList = "empty-list";
inline constexpr std::string_view kModifiedBeforeCreated = "modified-before-created";
inline constexpr std::string_view kLastSeenBeforeFirstSeen = "last-seen-before-first-seen";
inline constexpr std::string_view kInvalidCount = "invalid-count";
inline constexpr std::string_view kNonCanonicalId = "non-canonical-id";
inline constexpr std::string_view kKindMismatch = "kind-mismatch";
}  // namespace codes

/// Problems are returned, never thrown. The bundle is valid at `level`
/// when no diagnostic has error severity. Output is sorted by (path, code).
std::vector<Diagnostic> validate(const Bundle& bundle, ValidationLevel level);

/// Checks one object in isolation; references are not resolved.
std::vector<Diagnostic> validate_object(const AitiObject& object, ValidationLevel level,
                                        const std::string& path = "");

}  // namespace cti4ai::aiti
