#include "cti4ai/tie/encoder.hpp"

#include <cctype>

#include "cti4ai/aiti/identifier.hpp"
#include "cti4ai/common/errors.hpp"
#include "cti4ai/common/text.hpp"

namespace cti4ai::tie {

using aiti::AitiObject;
using aiti::Identifier;
using aiti::ObjectKind;

void EncoderOptions::check() const {
  if (const auto* verbatim = std::get_if<VerbatimId>(&id_strategy)) {
    if (verbatim->id.empty()) throw ArgumentError("verbatim id strategy requires a nonempty id");
    Identifier check_format(verbatim->id);
  }
}

namespace {

std::string epsilon_text(const redteam::VulnerabilityReport& report) {
  const auto it = report.hyperparameters.find("epsilon");
  if (it == report.hyperparameters.end()) throw ArgumentError("report has no epsilon");
  if (it->second.is_number()) return format_double(it->second.get<double>());
  if (it->second.is_string()) return it->second.get<std::string>();
  return it->second.dump();
}

std::optional<std::string> hyperparameter_text(const redteam::VulnerabilityReport& report,
                                               const std::string& key) {
  const auto it = report.hyperparameters.find(key);
  if (it == report.hyperparameters.end() || !it->second.is_string()) return std::nullopt;
  return it->second.get<std::string>();
}

// FGM whose only tuned knob is epsilon, i.e. the untargeted variant.
bool single_knob_fgm(const redteam::VulnerabilityReport& report) {
  const bool fgm = report.attack_name.find("FGM") != std::string::npos ||
                   report.attack_name.find("Fast Gradient") != std::string::npos;
  const auto targeted = report.hyperparameters.find("targeted");
  const bool untargeted = targeted != report.hyperparameters.end() &&
                          targeted->second.is_boolean() && !targeted->second.get<bool>();
  return fgm && untargeted;
}

std::string pick(const std::optional<std::string>& option,
                 const redteam::VulnerabilityReport& report, const std::string& key,
                 std::string fallback) {
  if (option) return *option;
  return hyperparameter_text(report, key).value_or(std::move(fallback));
}

class IdMaker {
 public:
  IdMaker(const IdStrategy& strategy, const redteam::VulnerabilityReport& report) {
    if (const auto* verbatim = std::get_if<VerbatimId>(&strategy)) {
      verbatim_ = verbatim->id;
      name_seed_ = "verbatim:" + verbatim->id;
    } else if (const auto* random = std::get_if<RandomIds>(&strategy)) {
      source_.emplace(random->seed);
    } else {
      name_seed_ = "report:" + redteam::to_json(report).dump();
    }
  }

  Identifier make(ObjectKind kind, const std::string& role) {
    if (role == "attack" && verbatim_) return Identifier(*verbatim_);
    if (source_) return aiti::new_id(kind, *source_);
    return aiti::name_based_id(kind, name_seed_ + "/" + role);
  }

  Identifier bundle_id() {
    if (source_) return Identifier("bundle--" + source_->next());
    return Identifier("bundle--" + aiti::name_based_uuid(name_seed_ + "/bundle"));
  }

 private:
  std::optional<std::string> verbatim_;
  std::optional<aiti::UuidSource> source_;
  std::string name_seed_;
};

}  // namespace

std::string attack_pattern_text(const redteam::VulnerabilityReport& report) {
  return report.attack_name + " attack, hyperparameter: epsilon = " + epsilon_text(report);
}

std::string attack_description(const redteam::VulnerabilityReport& report,
                               const std::optional<std::string>& model_task) {
  std::string target = "an AI model";
  if (model_task && !model_task->empty()) {
    const char first = static_cast<char>(std::tolower(static_cast<unsigned char>(model_task->front())));
    const bool vowel = std::string_view("aeiou").find(first) != std::string_view::npos;
    target = (vowel ? "an " : "a ") + *model_task + " AI model";
  }
  return "An " + report.attack_name + " attack is possible against " + target +
         " trained using the " + report.dataset_name + " dataset based on the " +
         report.model_name + " architecture.";
}

aiti::Bundle encode(const redteam::VulnerabilityReport& report, const EncoderOptions& options) {
  options.check();
  report.check();

  const Timestamp now = options.clock ? options.clock() : system_clock()();
  IdMaker ids(options.id_strategy, report);
  std::vector<AitiObject> objects;

  aiti::AiAttackBody attack;
  attack.attack_category = report.attack_category;
  attack.ai_attack_pattern = attack_pattern_text(report);
  attack.description = attack_description(report, options.model_task);
  attack.sophistication = pick(options.sophistication, report, "sophistication",
                               single_knob_fgm(report) ? "easy" : "unknown");
  attack.resource_level = pick(options.resource_level, report, "resource_level", "individual");
  attack.primary_motivation =
      pick(options.primary_motivation, report, "primary_motivation", "unknown");

  const Identifier attack_id = ids.make(ObjectKind::ai_attack, "attack");
  objects.push_back(AitiObject{ObjectKind::ai_attack, attack_id, now, std::nullopt,
                               std::move(attack), {}});

  auto link = [&](const std::string& role, const std::string& type, const Identifier& target) {
    objects.push_back(AitiObject{ObjectKind::relationship,
                                 ids.make(ObjectKind::relationship, role),
                                 now,
                                 std::nullopt,
                                 aiti::RelationshipBody{type, attack_id, target, std::nullopt},
                                 {}});
  };

  if (options.emit_pattern_object) {
    const Identifier pattern_id = ids.make(ObjectKind::ai_attack_pattern, "pattern");
    std::string procedure;
    for (const auto& [key, value] : report.hyperparameters) {
      if (!procedure.empty()) procedure += ", ";
      procedure += key + "=" + (value.is_string() ? value.get<std::string>() : value.dump());
    }
    objects.push_back(AitiObject{
        ObjectKind::ai_attack_pattern, pattern_id, now, std::nullopt,
        aiti::AiAttackPatternBody{report.attack_name, attack_pattern_text(report), procedure},
        {}});
    link("uses", "uses", pattern_id);
  }

  if (options.emit_sighting) {
    objects.push_back(AitiObject{
        ObjectKind::sighting, ids.make(ObjectKind::sighting, "sighting"), now, std::nullopt,
        aiti::SightingBody{attack_id, static_cast<long long>(report.sample_count),
                           report.created, report.created},
        {}});
  }

  if (options.producer_identity) {
    objects.push_back(AitiObject{ObjectKind::identity, ids.make(ObjectKind::identity, "producer"),
                                 now, std::nullopt,
                                 aiti::DomainObjectBody{*options.producer_identity, std::nullopt, {}},
                                 {}});
  }

  if (!options.personas.empty()) {
    const Identifier id = ids.make(ObjectKind::affected_user_personas, "personas");
    objects.push_back(AitiObject{ObjectKind::affected_user_personas, id, now, std::nullopt,
                                 aiti::AffectedUserPersonasBody{options.personas, std::nullopt},
                                 {}});
    link("targets-personas", "targets", id);
  }
  if (!options.paradigms.empty()) {
    const Identifier id = ids.make(ObjectKind::ai_paradigm_under_threat, "paradigms");
    objects.push_back(AitiObject{ObjectKind::ai_paradigm_under_threat, id, now, std::nullopt,
                                 aiti::AiParadigmUnderThreatBody{options.paradigms, std::nullopt},
                                 {}});
    link("targets-paradigms", "targets", id);
  }
  if (options.use_case) {
    const Identifier id = ids.make(ObjectKind::ai_use_case, "use-case");
    objects.push_back(AitiObject{ObjectKind::ai_use_case, id, now, std::nullopt,
                                 aiti::AiUseCaseBody{*options.use_case, std::nullopt}, {}});
    link("targets-use-case", "targets", id);
  }

  return aiti::Bundle{ids.bundle_id(), std::move(objects)};
}

}  // namespace cti4ai::tie
