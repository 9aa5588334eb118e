#include "cti4ai/redteam/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cti4ai/common/errors.hpp"
#include "cti4ai/common/text.hpp"

namespace cti4ai::redteam {

namespace {

void write_header(std::ostream& out, std::size_t width) {
  for (std::size_t j = 0; j < width; ++j) out << 'f' << j << ',';
  out << "label\n";
}

}  // namespace

void write_features_csv(std::ostream& out, const Matrix& features,
                        std::span<const ClassIndex> labels) {
  write_header(out, features.cols());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    for (const double v : features.row(i)) out << format_double(v) << ',';
    out << labels[i] << '\n';
  }
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  data.check();
  write_features_csv(out, data.features, data.labels);
}

Dataset read_dataset_csv(std::istream& in, std::string name, std::size_t n_classes) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("dataset CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ',');
  if (header.size() < 2 || trim(header.back()) != "label") {
    throw IoError("dataset CSV header must be f0,...,f{k-1},label");
  }
  const std::size_t width = header.size() - 1;
  for (std::size_t j = 0; j < width; ++j) {
    if (trim(header[j]) != "f" + std::to_string(j)) {
      throw IoError("dataset CSV header column " + std::to_string(j) + " must be f" +
                    std::to_string(j));
    }
  }

  Dataset data;
  data.name = std::move(name);
  std::vector<double> row(width);
  std::size_t line_no = 1;
  std::size_t max_label = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != width + 1) {
      throw IoError("dataset CSV line " + std::to_string(line_no) + " has " +
                    std::to_string(cells.size()) + " columns, expected " +
                    std::to_string(width + 1));
    }
    for (std::size_t j = 0; j < width; ++j) {
      const auto v = parse_double(cells[j]);
      if (!v) throw IoError("dataset CSV line " + std::to_string(line_no) + ": bad number");
      row[j] = *v;
    }
    const auto label = parse_integer(cells[width]);
    if (!label || *label < 0) {
      throw IoError("dataset CSV line " + std::to_string(line_no) + ": bad label");
    }
    data.features.append_row(row);
    data.labels.push_back(static_cast<ClassIndex>(*label));
    max_label = std::max<std::size_t>(max_label, static_cast<std::size_t>(*label));
  }
  if (data.labels.empty()) throw IoError("dataset CSV has no samples");
  data.n_classes = std::max(n_classes, max_label + 1);
  data.check();
  return data;
}

void save_dataset(const std::filesystem::path& path, const Dataset& data) {
  std::ostringstream out;
  write_dataset_csv(out, data);
  write_text_file(path, out.str());
}

Dataset load_dataset(const std::filesystem::path& path, std::size_t n_classes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset file " + path.string());
  return read_dataset_csv(in, path.stem().string(), n_classes);
}

nlohmann::ordered_json to_json(const DifferentiableClassifier& model) {
  nlohmann::ordered_json doc;
  doc["name"] = model.name();
  doc["n_classes"] = model.n_classes();
  auto layers = nlohmann::ordered_json::array();
  for (const Layer& layer : model.layers()) {
    auto weights = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < layer.outputs(); ++k) {
      const auto r = layer.weights.row(k);
      weights.push_back(std::vector<double>(r.begin(), r.end()));
    }
    nlohmann::ordered_json entry;
    entry["weights"] = std::move(weights);
    entry["bias"] = layer.bias;
    entry["activation"] = std::string(to_string(layer.activation));
    layers.push_back(std::move(entry));
  }
  doc["layers"] = std::move(layers);
  return doc;
}

DifferentiableClassifier classifier_from_json(const nlohmann::json& doc) {
  try {
    std::vector<Layer> layers;
    for (const auto& entry : doc.at("layers")) {
      Layer layer;
      layer.weights = Matrix::from_rows(entry.at("weights").get<std::vector<std::vector<double>>>());
      layer.bias = entry.at("bias").get<std::vector<double>>();
      layer.activation = activation_from_string(entry.value("activation", "identity"));
      layers.push_back(std::move(layer));
    }
    DifferentiableClassifier model(doc.value("name", "model"), std::move(layers));
    if (doc.contains("n_classes") && doc.at("n_classes").get<std::size_t>() != model.n_classes()) {
      throw ArgumentError("model n_classes does not match the final layer width");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed model document: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const DifferentiableClassifier& model) {
  write_text_file(path, to_json(model).dump(2) + "\n");
}

DifferentiableClassifier load_model(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw IoError("model file " + path.string() + " is not valid JSON");
  return classifier_from_json(doc);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace cti4ai::redteam
