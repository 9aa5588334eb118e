#pragma once

#include <span>
#include <vector>

#include "cti4ai/redteam/classifier.hpp"

namespace cti4ai::redteam::detail {

struct ForwardTrace {
  // activations[0] is the input; activations[l + 1] is the output of layer l.
  std::vector<std::vector<double>> activations;
  // pre_activations[l] is W_l a_l + b_l.
  std::vector<std::vector<double>> pre_activations;

  const std::vector<double>& logits() const { return activations.back(); }
};

void check_input(const std::vector<Layer>& layers, std::span<const double> x);

ForwardTrace trace_forward(const std::vector<Layer>& layers, std::span<const double> x);

std::vector<double> softmax(std::span<const double> logits);

/// Returns dL/dx for cross-entropy at label y. When `param_grads` is non-null
/// the parameter gradients are added into it (same shapes as `layers`).
std::vector<double> backward(const std::vector<Layer>& layers, const ForwardTrace& trace,
                             ClassIndex y, std::vector<Layer>* param_grads);

}  // namespace cti4ai::redteam::detail
