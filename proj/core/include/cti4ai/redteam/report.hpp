#pragma once

#include <cstddef>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "cti4ai/common/timestamp.hpp"

namespace cti4ai::redteam {

/// Measured outcome of one attack run against one model and dataset.
struct VulnerabilityReport {
  std::string model_name;
  std::string dataset_name;
  std::string attack_name;
  std::string attack_category;
  std::map<std::string, nlohmann::json> hyperparameters;
  double clean_accuracy = 0.0;
  double adversarial_accuracy = 0.0;
  /// Fraction of originally-correct samples that the attack misclassifies.
  double success_rate = 0.0;
  std::size_t sample_count = 0;
  Timestamp created;

  /// Throws ArgumentError on out-of-range rates, a zero sample count, or
  /// missing epsilon/norm/targeted hyperparameters.
  void check() const;

  bool operator==(const VulnerabilityReport&) const = default;
};

/// Field order is fixed; `created` is RFC 3339 UTC.
nlohmann::ordered_json to_json(const VulnerabilityReport& report);
VulnerabilityReport report_from_json(const nlohmann::json& doc);

}  // namespace cti4ai::redteam
