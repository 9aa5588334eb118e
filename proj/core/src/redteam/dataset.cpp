#include "cti4ai/redteam/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cti4ai/common/errors.hpp"
#include "redteam/rng.hpp"

namespace cti4ai::redteam {

void Dataset::check() const {
  if (labels.empty()) throw ArgumentError("dataset '" + name + "' has no samples");
  if (features.cols() == 0) throw ArgumentError("dataset '" + name + "' has zero features");
  if (features.rows() != labels.size()) {
    throw ArgumentError("dataset '" + name + "' has " + std::to_string(features.rows()) +
                        " feature rows but " + std::to_string(labels.size()) + " labels");
  }
  if (n_classes == 0) throw ArgumentError("dataset '" + name + "' has n_classes = 0");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= n_classes) {
      throw ArgumentError("dataset '" + name + "' row " + std::to_string(i) + " has label " +
                          std::to_string(labels[i]) + " >= n_classes " +
                          std::to_string(n_classes));
    }
  }
}

Dataset generate_blobs(const BlobOptions& options) {
  if (options.n_per_class == 0 || options.n_classes == 0 || options.n_features == 0) {
    throw ArgumentError("generate_blobs: counts must be >= 1");
  }
  if (!(options.separation > 0.0) || !std::isfinite(options.separation)) {
    throw ArgumentError("generate_blobs: separation must be a positive finite number");
  }

  const std::size_t k = options.n_classes;
  const std::size_t d = options.n_features;

  Matrix centres(k, d);
  if (k > 1) {
    if (d == 1) {
      for (std::size_t c = 0; c < k; ++c) centres(c, 0) = options.separation * c;
    } else {
      const double radius = options.separation / (2.0 * std::sin(std::numbers::pi / k));
      for (std::size_t c = 0; c < k; ++c) {
        const double angle = 2.0 * std::numbers::pi * c / k;
        centres(c, 0) = radius * std::cos(angle);
        centres(c, 1) = radius * std::sin(angle);
      }
    }
  }

  detail::PortableRng rng(options.seed);
  Dataset out;
  out.name = options.name;
  out.n_classes = k;
  out.features = Matrix(k * options.n_per_class, d);
  out.labels.reserve(k * options.n_per_class);

  std::size_t r = 0;
  for (std::size_t i = 0; i < options.n_per_class; ++i) {
    for (std::size_t c = 0; c < k; ++c, ++r) {
      for (std::size_t j = 0; j < d; ++j) out.features(r, j) = centres(c, j) + rng.normal();
      out.labels.push_back(c);
    }
  }

  for (std::size_t j = 0; j < d; ++j) {
    double lo = out.features(0, j);
    double hi = lo;
    for (std::size_t i = 1; i < out.features.rows(); ++i) {
      lo = std::min(lo, out.features(i, j));
      hi = std::max(hi, out.features(i, j));
    }
    const double span = hi - lo;
    for (std::size_t i = 0; i < out.features.rows(); ++i) {
      out.features(i, j) = span > 0.0 ? (out.features(i, j) - lo) / span : 0.5;
    }
  }
  return out;
}

}  // namespace cti4ai::redteam
