#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cti4ai/redteam/matrix.hpp"

namespace cti4ai::redteam {

using ClassIndex = std::size_t;

/// Labelled feature matrix used as the source of perturbation.
struct Dataset {
  std::string name;
  Matrix features;
  std::vector<ClassIndex> labels;
  std::size_t n_classes = 0;

  std::size_t size() const { return labels.size(); }
  std::size_t n_features() const { return features.cols(); }

  /// Throws ArgumentError unless every row has the same nonzero width, there
  /// is at least one sample, and every label is below n_classes.
  void check() const;

  bool operator==(const Dataset&) const = default;
};

struct BlobOptions {
  std::uint64_t seed = 0;
  std::size_t n_per_class = 50;
  std::size_t n_classes = 2;
  std::size_t n_features = 2;
  double separation = 4.0;
  std::string name = "blobs";
};

/// Gaussian clusters with unit standard deviation, one per class.
///
/// Class centres sit on a circle in the first two feature dimensions with
/// neighbouring centres `separation` apart (on a line when n_features == 1).
/// Rows are interleaved by class, and each feature is min-max rescaled into
/// [0, 1]. Output is a pure function of the options.
Dataset generate_blobs(const BlobOptions& options);

}  // namespace cti4ai::redteam
