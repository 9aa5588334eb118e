#include <algorithm>
#include <cmath>

#include "cti4ai/common/errors.hpp"
#include "cti4ai/redteam/classifier.hpp"
#include "redteam/backprop.hpp"
#include "redteam/rng.hpp"

namespace cti4ai::redteam {

DifferentiableClassifier initialize(const DifferentiableClassifier& architecture,
                                    std::uint64_t seed) {
  detail::PortableRng rng(seed);
  std::vector<Layer> layers = architecture.layers();
  for (Layer& layer : layers) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(layer.inputs() + layer.outputs()));
    for (double& w : layer.weights.data()) w = rng.uniform(-limit, limit);
    std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
  }
  return DifferentiableClassifier(architecture.name(), std::move(layers));
}

DifferentiableClassifier train(const DifferentiableClassifier& architecture,
                               const Dataset& data, const TrainingOptions& options) {
  if (!(options.learning_rate > 0.0)) throw ArgumentError("learning rate must be positive");
  if (options.epochs < 0) throw ArgumentError("epochs must be nonnegative");
  data.check();
  if (data.n_features() != architecture.input_width()) {
    throw ArgumentError("dataset width " + std::to_string(data.n_features()) +
                        " does not match model input width " +
                        std::to_string(architecture.input_width()));
  }
  if (data.n_classes > architecture.n_classes()) {
    throw ArgumentError("dataset has more classes than the model outputs");
  }

  std::vector<Layer> layers = initialize(architecture, options.seed).layers();
  const double n = static_cast<double>(data.size());

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::vector<Layer> grads;
    grads.reserve(layers.size());
    for (const Layer& layer : layers) {
      grads.push_back(Layer{Matrix(layer.outputs(), layer.inputs()),
                            std::vector<double>(layer.outputs(), 0.0), layer.activation});
    }

    double total_loss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto trace = detail::trace_forward(layers, data.features.row(i));
      total_loss += cross_entropy_from_logits(trace.logits(), data.labels[i]);
      detail::backward(layers, trace, data.labels[i], &grads);
    }
    if (!std::isfinite(total_loss)) throw TrainingDivergenceError(epoch);

    const double step = options.learning_rate / n;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      auto w = layers[l].weights.data();
      const auto gw = grads[l].weights.data();
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= step * gw[i];
      for (std::size_t k = 0; k < layers[l].bias.size(); ++k) {
        layers[l].bias[k] -= step * grads[l].bias[k];
      }
    }
  }

  for (const Layer& layer : layers) {
    for (const double w : layer.weights.data()) {
      if (!std::isfinite(w)) throw TrainingDivergenceError(options.epochs);
    }
  }
  return DifferentiableClassifier(architecture.name(), std::move(layers));
}

}  // namespace cti4ai::redteam
