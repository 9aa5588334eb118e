#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cti4ai/redteam/dataset.hpp"
#include "cti4ai/redteam/matrix.hpp"

namespace cti4ai::redteam {

enum class Activation { identity, relu, tanh };

std::string_view to_string(Activation a);
/// Throws ArgumentError for names other than identity, relu and tanh.
Activation activation_from_string(std::string_view name);

/// One affine layer followed by an elementwise activation.
/// `weights` is (outputs x inputs): row k holds the weights feeding output k.
struct Layer {
  Matrix weights;
  std::vector<double> bias;
  Activation activation = Activation::identity;

  std::size_t inputs() const { return weights.cols(); }
  std::size_t outputs() const { return weights.rows(); }

  bool operator==(const Layer&) const = default;
};

/// Feed-forward classifier producing logits; class probabilities are the
/// softmax of the final layer's output.
class DifferentiableClassifier {
 public:
  /// Throws ArgumentError if consecutive widths disagree, a bias length does
  /// not match its layer, there are no layers, or the final activation is
  /// not identity.
  DifferentiableClassifier(std::string name, std::vector<Layer> layers);

  /// Zero-weight network of the given shape. Hidden layers use
  /// `hidden_activation`; the output layer is identity.
  static DifferentiableClassifier with_architecture(std::string name, std::size_t input_width,
                                                    std::span<const std::size_t> hidden_widths,
                                                    Activation hidden_activation,
                                                    std::size_t n_classes);

  const std::string& name() const { return name_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t input_width() const { return layers_.front().inputs(); }
  std::size_t n_classes() const { return layers_.back().outputs(); }

  bool operator==(const DifferentiableClassifier&) const = default;

 private:
  std::string name_;
  std::vector<Layer> layers_;
};

std::vector<double> forward(const DifferentiableClassifier& model, std::span<const double> x);

/// Index of the largest value; ties go to the lowest index.
ClassIndex argmax(std::span<const double> values);

ClassIndex predict(const DifferentiableClassifier& model, std::span<const double> x);

/// -log softmax(logits)[y], stabilised by shifting with the max logit.
double cross_entropy_from_logits(std::span<const double> logits, ClassIndex y);

double cross_entropy_loss(const DifferentiableClassifier& model, std::span<const double> x,
                          ClassIndex y);

/// Exact dL/dx of the cross-entropy loss, by backpropagation.
std::vector<double> input_gradient(const DifferentiableClassifier& model,
                                   std::span<const double> x, ClassIndex y);

/// Central differences (L(x + h e_i) - L(x - h e_i)) / 2h for each coordinate.
std::vector<double> finite_difference_gradient(const DifferentiableClassifier& model,
                                               std::span<const double> x, ClassIndex y,
                                               double h);

double accuracy(const DifferentiableClassifier& model, const Dataset& data);
double mean_loss(const DifferentiableClassifier& model, const Dataset& data);

struct TrainingOptions {
  double learning_rate = 0.5;
  int epochs = 200;
  std::uint64_t seed = 0;
};

/// Xavier-uniform weights and zero biases, drawn from `seed`.
DifferentiableClassifier initialize(const DifferentiableClassifier& architecture,
                                    std::uint64_t seed);

/// Full-batch gradient descent on mean cross-entropy, starting from
/// initialize(architecture, options.seed). Throws TrainingDivergenceError
/// when the loss becomes non-finite.
DifferentiableClassifier train(const DifferentiableClassifier& architecture,
                               const Dataset& data, const TrainingOptions& options);

}  // namespace cti4ai::redteam
