#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cti4ai/aiti/object.hpp"
#include "cti4ai/common/timestamp.hpp"
#include "cti4ai/redteam/report.hpp"

namespace cti4ai::tie {

/// Fresh version-4 uuids from a seeded source.
struct RandomIds {
  std::uint64_t seed = 0;
};

/// Name-based uuids derived from the report's canonical JSON and each
/// object's role, so the same report always yields the same ids.
struct ContentDerivedIds {};

/// The AI attack object takes this id as-is; companion objects derive
/// name-based ids from it.
struct VerbatimId {
  std::string id;
};

using IdStrategy = std::variant<ContentDerivedIds, RandomIds, VerbatimId>;

struct EncoderOptions {
  IdStrategy id_strategy = ContentDerivedIds{};
  /// Stamps `created` on every emitted object. Defaults to the system clock.
  Clock clock;
  bool emit_pattern_object = false;
  bool emit_sighting = false;
  std::optional<std::string> producer_identity;

  /// e.g. "object recognition"; when absent the description says "AI model".
  std::optional<std::string> model_task;

  // Threat-actor context. Precedence: these options, then the report's
  // hyperparameters of the same name, then the built-in defaults.
  std::optional<std::string> sophistication;
  std::optional<std::string> resource_level;
  std::optional<std::string> primary_motivation;

  // Emitted only when supplied, each linked from the attack by "targets".
  std::vector<std::string> personas;
  std::vector<std::string> paradigms;
  std::optional<std::string> use_case;

  /// Throws ArgumentError when a verbatim id is empty.
  void check() const;
};

/// "<attack_name> attack, hyperparameter: epsilon = <epsilon>"
std::string attack_pattern_text(const redteam::VulnerabilityReport& report);

/// Description sentence naming the attack, model and dataset.
std::string attack_description(const redteam::VulnerabilityReport& report,
                               const std::optional<std::string>& model_task);

/// Bundle holding the AI attack first, then (if requested) the attack
/// pattern with a "uses" relationship, a sighting, a producer identity and
/// any caller-supplied persona/paradigm/use-case objects.
aiti::Bundle encode(const redteam::VulnerabilityReport& report, const EncoderOptions& options);

}  // namespace cti4ai::tie
