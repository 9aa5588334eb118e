#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cti4ai/redteam/classifier.hpp"
#include "cti4ai/redteam/dataset.hpp"

namespace cti4ai::redteam {

// Dataset CSV: header `f0,...,f{k-1},label`, one sample per LF-terminated line.
void write_dataset_csv(std::ostream& out, const Dataset& data);
/// `n_classes` is max(label) + 1 unless a larger value is supplied.
Dataset read_dataset_csv(std::istream& in, std::string name, std::size_t n_classes = 0);

void save_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset load_dataset(const std::filesystem::path& path, std::size_t n_classes = 0);

/// Writes the feature matrix with the same header, using the given labels.
void write_features_csv(std::ostream& out, const Matrix& features,
                        std::span<const ClassIndex> labels);

nlohmann::ordered_json to_json(const DifferentiableClassifier& model);
DifferentiableClassifier classifier_from_json(const nlohmann::json& doc);

void save_model(const std::filesystem::path& path, const DifferentiableClassifier& model);
DifferentiableClassifier load_model(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
/// Writes via a temporary sibling file and rename.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace cti4ai::redteam
