#include "cti4ai/redteam/fgm.hpp"

#include <algorithm>
#include <cmath>

#include "cti4ai/common/errors.hpp"

namespace cti4ai::redteam {

std::string_view to_string(Norm n) {
  switch (n) {
    case Norm::inf:
      return "inf";
    case Norm::one:
      return "one";
    case Norm::two:
      return "two";
  }
  return "inf";
}

Norm norm_from_string(std::string_view name) {
  if (name == "inf" || name == "np.inf" || name == "linf") return Norm::inf;
  if (name == "one" || name == "1" || name == "l1") return Norm::one;
  if (name == "two" || name == "2" || name == "l2") return Norm::two;
  throw ArgumentError("unknown norm '" + std::string(name) + "' (expected inf, one or two)");
}

void FgmConfig::check(std::size_t n_classes) const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ArgumentError("epsilon must be a finite nonnegative number");
  }
  if (clip_range && !(clip_range->lo < clip_range->hi)) {
    throw ArgumentError("clip range requires lo < hi");
  }
  if (targeted && !target_labels) throw ArgumentError("targeted attack requires target labels");
  if (!targeted && target_labels) {
    throw ArgumentError("target labels given for an untargeted attack");
  }
  if (target_labels) {
    for (const ClassIndex t : *target_labels) {
      if (t >= n_classes) {
        throw ArgumentError("target label " + std::to_string(t) + " >= n_classes " +
                            std::to_string(n_classes));
      }
    }
  }
}

namespace {

double scaled_l2(std::span<const double> g) {
  double peak = 0.0;
  for (const double v : g) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  double sum = 0.0;
  for (const double v : g) sum += (v / peak) * (v / peak);
  return peak * std::sqrt(sum);
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

std::vector<double> fgm_perturb(const DifferentiableClassifier& model, std::span<const double> x,
                                ClassIndex label, const FgmConfig& config) {
  config.check(model.n_classes());
  const std::vector<double> g = input_gradient(model, x, label);
  std::vector<double> out(x.begin(), x.end());
  if (config.epsilon == 0.0) return out;

  const double direction = config.targeted ? -1.0 : 1.0;
  switch (config.norm) {
    case Norm::inf:
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = x[i] + direction * config.epsilon * sign(g[i]);
      }
      break;
    case Norm::two: {
      const double norm = scaled_l2(g);
      if (norm == 0.0) return out;
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = x[i] + direction * config.epsilon * (g[i] / norm);
      }
      break;
    }
    case Norm::one: {
      double norm = 0.0;
      for (const double v : g) norm += std::abs(v);
      if (norm == 0.0) return out;
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = x[i] + direction * config.epsilon * (g[i] / norm);
      }
      break;
    }
  }

  if (config.clip_range) {
    for (double& v : out) v = std::clamp(v, config.clip_range->lo, config.clip_range->hi);
  }
  return out;
}

AttackResult run_fgm_attack(const DifferentiableClassifier& model, const Dataset& data,
                            const FgmConfig& config, const Clock& clock) {
  data.check();
  if (data.n_features() != model.input_width()) {
    throw ArgumentError("dataset width " + std::to_string(data.n_features()) +
                        " does not match model input width " +
                        std::to_string(model.input_width()));
  }
  config.check(model.n_classes());
  if (config.targeted && config.target_labels->size() != data.size()) {
    throw ArgumentError("target labels (" + std::to_string(config.target_labels->size()) +
                        ") must align with dataset rows (" + std::to_string(data.size()) + ")");
  }

  AttackResult result;
  result.adversarial = Matrix(data.size(), data.n_features());
  std::size_t clean_correct = 0;
  std::size_t adversarial_correct = 0;
  std::size_t correct_both = 0;

  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.features.row(i);
    const ClassIndex y = data.labels[i];
    const ClassIndex attack_label = config.targeted ? (*config.target_labels)[i] : y;
    const std::vector<double> adv = fgm_perturb(model, x, attack_label, config);
    std::copy(adv.begin(), adv.end(), result.adversarial.row(i).begin());

    const bool before = predict(model, x) == y;
    const bool after = predict(model, adv) == y;
    clean_correct += before;
    adversarial_correct += after;
    correct_both += before && after;
  }

  const double n = static_cast<double>(data.size());
  VulnerabilityReport& report = result.report;
  report.model_name = model.name();
  report.dataset_name = data.name;
  report.attack_name = std::string(kFgmAttackName);
  report.attack_category = "evasion";
  report.hyperparameters["epsilon"] = config.epsilon;
  report.hyperparameters["norm"] = std::string(to_string(config.norm));
  report.hyperparameters["targeted"] = config.targeted;
  report.hyperparameters["clip_range"] =
      config.clip_range ? nlohmann::json::array({config.clip_range->lo, config.clip_range->hi})
                        : nlohmann::json(nullptr);
  report.clean_accuracy = static_cast<double>(clean_correct) / n;
  report.adversarial_accuracy = static_cast<double>(adversarial_correct) / n;
  report.success_rate =
      clean_correct == 0 ? 0.0
                         : static_cast<double>(clean_correct - correct_both) /
                               static_cast<double>(clean_correct);
  report.sample_count = data.size();
  report.created = clock();
  return result;
}

VulnerabilityReport evaluate_attack(const DifferentiableClassifier& model, const Dataset& data,
                                    const FgmConfig& config, const Clock& clock) {
  return run_fgm_attack(model, data, config, clock).report;
}

}  // namespace cti4ai::redteam
