#pragma once

#include <stdexcept>
#include <string>

namespace cti4ai {

/// Raised when a caller passes arguments that violate an operation's preconditions.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by training when the loss stops being finite.
class TrainingDivergenceError : public std::runtime_error {
 public:
  explicit TrainingDivergenceError(int epoch)
      : std::runtime_error("training diverged: non-finite loss at epoch " + std::to_string(epoch)),
        epoch_(epoch) {}

  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

/// Raised when a file cannot be read, written or decoded.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cti4ai
