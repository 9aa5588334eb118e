#include "cti4ai/redteam/report.hpp"

#include <cmath>

#include "cti4ai/aiti/object.hpp"
#include "cti4ai/common/errors.hpp"

namespace cti4ai::redteam {

namespace {

void check_rate(const char* field, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ArgumentError(std::string("report ") + field + " must lie in [0, 1]");
  }
}

template <typename T>
T required(const nlohmann::json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw ArgumentError(std::string("report is missing '") + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ArgumentError(std::string("report field '") + key + "' has the wrong type");
  }
}

}  // namespace

void VulnerabilityReport::check() const {
  check_rate("clean_accuracy", clean_accuracy);
  check_rate("adversarial_accuracy", adversarial_accuracy);
  check_rate("success_rate", success_rate);
  if (sample_count == 0) throw ArgumentError("report sample_count must be positive");
  if (!aiti::in_vocabulary(aiti::kAttackCategories, attack_category)) {
    throw ArgumentError("report attack_category '" + attack_category +
                        "' is not an AI attack category");
  }
  // correct-before-and-after = clean * (1 - success_rate) must fit inside
  // both the clean and the adversarial share of samples.
  constexpr double kSlack = 1e-9;
  const double kept = clean_accuracy * (1.0 - success_rate);
  if (kept > adversarial_accuracy + kSlack ||
      adversarial_accuracy > kept + (1.0 - clean_accuracy) + kSlack) {
    throw ArgumentError("report success_rate is inconsistent with its accuracies");
  }
  if (clean_accuracy == 0.0 && success_rate != 0.0) {
    throw ArgumentError("report success_rate must be 0 when nothing was classified correctly");
  }
  for (const char* key : {"epsilon", "norm", "targeted"}) {
    if (!hyperparameters.contains(key)) {
      throw ArgumentError(std::string("report hyperparameters must include '") + key + "'");
    }
  }
}

nlohmann::ordered_json to_json(const VulnerabilityReport& report) {
  nlohmann::ordered_json hyper = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.hyperparameters) hyper[key] = value;

  nlohmann::ordered_json doc;
  doc["model_name"] = report.model_name;
  doc["dataset_name"] = report.dataset_name;
  doc["attack_name"] = report.attack_name;
  doc["attack_category"] = report.attack_category;
  doc["hyperparameters"] = std::move(hyper);
  doc["clean_accuracy"] = report.clean_accuracy;
  doc["adversarial_accuracy"] = report.adversarial_accuracy;
  doc["success_rate"] = report.success_rate;
  doc["sample_count"] = report.sample_count;
  doc["created"] = report.created.to_rfc3339();
  return doc;
}

VulnerabilityReport report_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ArgumentError("report document must be a JSON object");
  VulnerabilityReport r;
  r.model_name = required<std::string>(doc, "model_name");
  r.dataset_name = required<std::string>(doc, "dataset_name");
  r.attack_name = required<std::string>(doc, "attack_name");
  r.attack_category = required<std::string>(doc, "attack_category");
  const auto hyper = required<nlohmann::json>(doc, "hyperparameters");
  if (!hyper.is_object()) throw ArgumentError("report hyperparameters must be an object");
  for (const auto& [key, value] : hyper.items()) r.hyperparameters[key] = value;
  r.clean_accuracy = required<double>(doc, "clean_accuracy");
  r.adversarial_accuracy = required<double>(doc, "adversarial_accuracy");
  r.success_rate = required<double>(doc, "success_rate");
  const auto count = required<long long>(doc, "sample_count");
  if (count <= 0) throw ArgumentError("report sample_count must be positive");
  r.sample_count = static_cast<std::size_t>(count);
  r.created = Timestamp::parse(required<std::string>(doc, "created"));
  r.check();
  return r;
}

}  // namespace cti4ai::redteam
