#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cti4ai/common/timestamp.hpp"
#include "cti4ai/redteam/classifier.hpp"
#include "cti4ai/redteam/dataset.hpp"
#include "cti4ai/redteam/report.hpp"

namespace cti4ai::redteam {

enum class Norm { inf, one, two };

std::string_view to_string(Norm n);
/// Accepts inf/one/two and the aliases "np.inf", "1", "2".
Norm norm_from_string(std::string_view name);

struct ClipRange {
  double lo = 0.0;
  double hi = 1.0;

  bool operator==(const ClipRange&) const = default;
};

/// Fast Gradient Method hyperparameters.
struct FgmConfig {
  double epsilon = 0.0;
  Norm norm = Norm::inf;
  bool targeted = false;
  /// Positionally aligned with dataset rows. Present iff targeted.
  std::optional<std::vector<ClassIndex>> target_labels;
  std::optional<ClipRange> clip_range;

  /// Throws ArgumentError on a negative or non-finite epsilon, an inverted
  /// clip range, target labels missing (targeted) or present (untargeted),
  /// or a target label >= n_classes.
  void check(std::size_t n_classes) const;
};

/// Untargeted: x + eps * dir(grad L(x, label)), moving away from the true label.
/// Targeted: x - eps * dir(grad L(x, label)), moving toward `label`.
/// dir is sign(g) for inf, g/|g|_2 for two, g/|g|_1 for one. A zero gradient
/// under the one/two norms leaves x unchanged. Coordinates are clamped to
/// the clip range when one is configured.
std::vector<double> fgm_perturb(const DifferentiableClassifier& model, std::span<const double> x,
                                ClassIndex label, const FgmConfig& config);

struct AttackResult {
  VulnerabilityReport report;
  Matrix adversarial;
};

inline constexpr std::string_view kFgmAttackName = "Fast Gradient Method (FGM)";

/// Perturbs every row of `data` and measures clean and adversarial accuracy.
AttackResult run_fgm_attack(const DifferentiableClassifier& model, const Dataset& data,
                            const FgmConfig& config, const Clock& clock = system_clock());

VulnerabilityReport evaluate_attack(const DifferentiableClassifier& model, const Dataset& data,
                                    const FgmConfig& config, const Clock& clock = system_clock());

}  // namespace cti4ai::redteam
