#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cti4ai/redteam/classifier.hpp"
#include "cti4ai/redteam/io.hpp"

namespace cti4ai::testkit {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(CTI4AI_FIXTURE_DIR) / name;
}

inline std::string fixture_text(const std::string& name) {
  return redteam::read_text_file(fixture(name));
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("cti4ai-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// W = [[1, -1], [-1, 1]], b = 0.
inline redteam::DifferentiableClassifier toy_model() {
  redteam::Layer layer{redteam::Matrix::from_rows({{1.0, -1.0}, {-1.0, 1.0}}), {0.0, 0.0},
                       redteam::Activation::identity};
  return redteam::DifferentiableClassifier("toy", {layer});
}

/// Hand-rolled generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin() { return index(2) == 1; }

  std::vector<double> vector(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

  redteam::Layer layer(std::size_t in, std::size_t out, redteam::Activation act) {
    redteam::Matrix w(out, in);
    for (auto& x : w.data()) x = uniform(-2.0, 2.0);
    return {w, vector(out, -1.0, 1.0), act};
  }

  /// One or two layers, widths in [1, 8], at least two classes.
  redteam::DifferentiableClassifier model() {
    const std::size_t in = 1 + index(8);
    const std::size_t classes = 2 + index(7);
    std::vector<redteam::Layer> layers;
    if (coin()) {
      const std::size_t hidden = 1 + index(8);
      const auto act = coin() ? redteam::Activation::tanh : redteam::Activation::identity;
      layers.push_back(layer(in, hidden, act));
      layers.push_back(layer(hidden, classes, redteam::Activation::identity));
    } else {
      layers.push_back(layer(in, classes, redteam::Activation::identity));
    }
    return redteam::DifferentiableClassifier("random", std::move(layers));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace cti4ai::testkit
