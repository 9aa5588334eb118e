#include "cti4ai/redteam/matrix.hpp"

#include "cti4ai/common/errors.hpp"

namespace cti4ai::redteam {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m;
  for (const auto& r : rows) m.append_row(r);
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m;
  for (const auto& r : rows) m.append_row(std::span<const double>(r.begin(), r.size()));
  return m;
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && data_.empty()) {
    cols_ = values.size();
  } else if (values.size() != cols_) {
    throw ArgumentError("matrix row width " + std::to_string(values.size()) +
                        " does not match " + std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

}  // namespace cti4ai::redteam
