#include "cti4ai/redteam/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cti4ai/common/errors.hpp"
#include "redteam/backprop.hpp"

namespace cti4ai::redteam {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::identity:
      return "identity";
    case Activation::relu:
      return "relu";
    case Activation::tanh:
      return "tanh";
  }
  return "identity";
}

Activation activation_from_string(std::string_view name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  throw ArgumentError("unknown activation '" + std::string(name) + "'");
}

DifferentiableClassifier::DifferentiableClassifier(std::string name, std::vector<Layer> layers)
    : name_(std::move(name)), layers_(std::move(layers)) {
  if (layers_.empty()) throw ArgumentError("classifier '" + name_ + "' has no layers");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& layer = layers_[i];
    if (layer.inputs() == 0 || layer.outputs() == 0) {
      throw ArgumentError("layer " + std::to_string(i) + " has an empty weight matrix");
    }
    if (layer.bias.size() != layer.outputs()) {
      throw ArgumentError("layer " + std::to_string(i) + " bias length " +
                          std::to_string(layer.bias.size()) + " != output width " +
                          std::to_string(layer.outputs()));
    }
    if (i + 1 < layers_.size() && layers_[i + 1].inputs() != layer.outputs()) {
      throw ArgumentError("layer " + std::to_string(i) + " output width " +
                          std::to_string(layer.outputs()) + " != layer " +
                          std::to_string(i + 1) + " input width " +
                          std::to_string(layers_[i + 1].inputs()));
    }
  }
  if (layers_.back().activation != Activation::identity) {
    throw ArgumentError("final layer activation must be identity (logits)");
  }
}

DifferentiableClassifier DifferentiableClassifier::with_architecture(
    std::string name, std::size_t input_width, std::span<const std::size_t> hidden_widths,
    Activation hidden_activation, std::size_t n_classes) {
  std::vector<Layer> layers;
  std::size_t width = input_width;
  for (const std::size_t h : hidden_widths) {
    layers.push_back(Layer{Matrix(h, width), std::vector<double>(h, 0.0), hidden_activation});
    width = h;
  }
  layers.push_back(
      Layer{Matrix(n_classes, width), std::vector<double>(n_classes, 0.0), Activation::identity});
  return DifferentiableClassifier(std::move(name), std::move(layers));
}

namespace detail {

void check_input(const std::vector<Layer>& layers, std::span<const double> x) {
  if (x.size() != layers.front().inputs()) {
    throw ArgumentError("input width " + std::to_string(x.size()) +
                        " does not match model input width " +
                        std::to_string(layers.front().inputs()));
  }
}

namespace {

double activate(Activation a, double z) {
  switch (a) {
    case Activation::identity:
      return z;
    case Activation::relu:
      return z > 0.0 ? z : 0.0;
    case Activation::tanh:
      return std::tanh(z);
  }
  return z;
}

// Derivative expressed through the pre-activation z and output a = f(z).
double activate_derivative(Activation act, double z, double a) {
  switch (act) {
    case Activation::identity:
      return 1.0;
    case Activation::relu:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::tanh:
      return 1.0 - a * a;
  }
  return 1.0;
}

}  // namespace

ForwardTrace trace_forward(const std::vector<Layer>& layers, std::span<const double> x) {
  check_input(layers, x);
  ForwardTrace trace;
  trace.activations.reserve(layers.size() + 1);
  trace.pre_activations.reserve(layers.size());
  trace.activations.emplace_back(x.begin(), x.end());
  for (const Layer& layer : layers) {
    const std::vector<double>& in = trace.activations.back();
    std::vector<double> z(layer.outputs());
    std::vector<double> a(layer.outputs());
    for (std::size_t k = 0; k < layer.outputs(); ++k) {
      double sum = layer.bias[k];
      const auto w = layer.weights.row(k);
      for (std::size_t j = 0; j < in.size(); ++j) sum += w[j] * in[j];
      z[k] = sum;
      a[k] = activate(layer.activation, sum);
    }
    trace.pre_activations.push_back(std::move(z));
    trace.activations.push_back(std::move(a));
  }
  return trace;
}

std::vector<double> softmax(std::span<const double> logits) {
  const double shift = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - shift);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

std::vector<double> backward(const std::vector<Layer>& layers, const ForwardTrace& trace,
                             ClassIndex y, std::vector<Layer>* param_grads) {
  // Output layer is identity, so dL/dz_L = softmax(z_L) - onehot(y).
  std::vector<double> delta = softmax(trace.logits());
  delta[y] -= 1.0;

  for (std::size_t l = layers.size(); l-- > 0;) {
    const Layer& layer = layers[l];
    const std::vector<double>& in = trace.activations[l];

    if (param_grads != nullptr) {
      Layer& g = (*param_grads)[l];
      for (std::size_t k = 0; k < layer.outputs(); ++k) {
        auto grow = g.weights.row(k);
        for (std::size_t j = 0; j < in.size(); ++j) grow[j] += delta[k] * in[j];
        g.bias[k] += delta[k];
      }
    }

    std::vector<double> upstream(layer.inputs(), 0.0);
    for (std::size_t k = 0; k < layer.outputs(); ++k) {
      const auto w = layer.weights.row(k);
      for (std::size_t j = 0; j < upstream.size(); ++j) upstream[j] += w[j] * delta[k];
    }
    if (l > 0) {
      const Layer& below = layers[l - 1];
      const std::vector<double>& z = trace.pre_activations[l - 1];
      for (std::size_t j = 0; j < upstream.size(); ++j) {
        upstream[j] *= activate_derivative(below.activation, z[j], in[j]);
      }
    }
    delta = std::move(upstream);
  }
  return delta;
}

}  // namespace detail

std::vector<double> forward(const DifferentiableClassifier& model, std::span<const double> x) {
  return detail::trace_forward(model.layers(), x).logits();
}

ClassIndex argmax(std::span<const double> values) {
  ClassIndex best = 0;
  for (ClassIndex i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

ClassIndex predict(const DifferentiableClassifier& model, std::span<const double> x) {
  return argmax(forward(model, x));
}

double cross_entropy_from_logits(std::span<const double> logits, ClassIndex y) {
  if (y >= logits.size()) {
    throw ArgumentError("label " + std::to_string(y) + " out of range for " +
                        std::to_string(logits.size()) + " classes");
  }
  const double shift = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (const double z : logits) total += std::exp(z - shift);
  return std::log(total) - (logits[y] - shift);
}

double cross_entropy_loss(const DifferentiableClassifier& model, std::span<const double> x,
                          ClassIndex y) {
  if (y >= model.n_classes()) {
    throw ArgumentError("label " + std::to_string(y) + " out of range for " +
                        std::to_string(model.n_classes()) + " classes");
  }
  return cross_entropy_from_logits(forward(model, x), y);
}

std::vector<double> input_gradient(const DifferentiableClassifier& model,
                                   std::span<const double> x, ClassIndex y) {
  if (y >= model.n_classes()) {
    throw ArgumentError("label " + std::to_string(y) + " out of range for " +
                        std::to_string(model.n_classes()) + " classes");
  }
  const auto trace = detail::trace_forward(model.layers(), x);
  return detail::backward(model.layers(), trace, y, nullptr);
}

std::vector<double> finite_difference_gradient(const DifferentiableClassifier& model,
                                               std::span<const double> x, ClassIndex y,
                                               double h) {
  if (!(h > 0.0)) throw ArgumentError("finite difference step must be positive");
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = cross_entropy_loss(model, probe, y);
    probe[i] = x[i] - h;
    const double down = cross_entropy_loss(model, probe, y);
    probe[i] = x[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

double accuracy(const DifferentiableClassifier& model, const Dataset& data) {
  data.check();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (predict(model, data.features.row(i)) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double mean_loss(const DifferentiableClassifier& model, const Dataset& data) {
  data.check();
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    total += cross_entropy_loss(model, data.features.row(i), data.labels[i]);
  }
  return total / static_cast<double>(data.size());
}

}  // namespace cti4ai::redteam
