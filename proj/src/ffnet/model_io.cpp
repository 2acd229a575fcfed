#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vta/error.hpp"
#include "vta/ffnet.hpp"

namespace vta::nn {
namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;
using Kind = ModelFormatError::Kind;

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

[[noreturn]] void corrupt(const std::string& what) { throw ModelFormatError(Kind::corrupt, "corrupt model: " + what); }
[[noreturn]] void bad_shape(const std::string& what) { throw ModelFormatError(Kind::shape, "model shape mismatch: " + what); }

const json& member(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) corrupt(std::string("missing '") + key + "'");
  return *it;
}

std::size_t read_dim(const json& obj, const char* key) {
  const auto& v = member(obj, key);
  if (!v.is_number_unsigned()) corrupt(std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

std::vector<double> read_vector(const json& v, const char* name, std::size_t expected) {
  if (!v.is_array()) corrupt(std::string("'") + name + "' must be an array of numbers");
  if (v.size() != expected) {
    bad_shape(std::string(name) + " has " + std::to_string(v.size()) + " entries, expected " + std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) corrupt(std::string("'") + name + "' holds a non-numeric value");
    out.push_back(x.get<double>());
  }
  return out;
}

Matrix read_matrix(const json& v, const char* name, std::size_t rows, std::size_t cols) {
  if (!v.is_array()) corrupt(std::string("'") + name + "' must be an array of rows");
  if (v.size() != rows) {
    bad_shape(std::string(name) + " has " + std::to_string(v.size()) + " rows, expected " + std::to_string(rows));
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = read_vector(v[r], name, cols);
    std::copy(row.begin(), row.end(), m.row(r).begin());
  }
  return m;
}

std::vector<std::string> read_strings(const json& v, const char* name) {
  if (!v.is_array()) corrupt(std::string("'") + name + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) corrupt(std::string("'") + name + "' must be an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

}  // namespace

std::string serialize_model(const ModelFile& model) {
  const auto c = model.config();
  ordered_json doc;
  doc["version"] = kModelVersion;
  doc["config"] = {{"input_dim", c.input_dim}, {"hidden_dim", c.hidden_dim}, {"output_dim", c.output_dim}};
  doc["vocab"] = model.vocabulary.words();
  doc["labels"] = model.labels;
  doc["threshold"] = model.threshold;
  ordered_json weights;
  weights["W1"] = matrix_json(model.params.w1);
  weights["b1"] = model.params.b1;
  weights["W2"] = matrix_json(model.params.w2);
  weights["b2"] = model.params.b2;
  weights["W3"] = matrix_json(model.params.w3);
  weights["b3"] = model.params.b3;
  doc["weights"] = std::move(weights);
  return doc.dump() + "\n";
}

void save_model(const ModelFile& model, std::ostream& out) {
  const auto c = model.config();
  if (model.vocabulary.size() != c.input_dim || model.labels.size() != c.output_dim) {
    throw ModelFormatError(Kind::shape, "vocabulary/labels do not match the network shape");
  }
  out << serialize_model(model);
  if (!out) throw Error("failed to write model");
}

void save_model_file(const ModelFile& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  save_model(model, out);
}

ModelFile parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    corrupt(e.what());
  }
  if (!doc.is_object()) corrupt("document is not a JSON object");
  const auto& version = member(doc, "version");
  if (!version.is_number_integer()) corrupt("'version' must be an integer");
  if (version.get<long long>() != kModelVersion) {
    throw ModelFormatError(Kind::version, "unsupported model version " + std::to_string(version.get<long long>()) +
                                              " (expected " + std::to_string(kModelVersion) + ")");
  }

  const auto& cfg = member(doc, "config");
  if (!cfg.is_object()) corrupt("'config' must be an object");
  NetConfig net{read_dim(cfg, "input_dim"), read_dim(cfg, "hidden_dim"), read_dim(cfg, "output_dim")};
  if (net.input_dim < 1 || net.hidden_dim < 1 || net.output_dim < 1) bad_shape("dimensions must be >= 1");

  ModelFile model;
  auto words = read_strings(member(doc, "vocab"), "vocab");
  if (words.size() != net.input_dim) bad_shape("vocab size differs from input_dim");
  for (std::size_t i = 1; i < words.size(); ++i) {
    if (!(words[i - 1] < words[i])) corrupt("vocab must be sorted and duplicate-free");
  }
  model.vocabulary = Vocabulary(std::move(words));
  model.labels = read_strings(member(doc, "labels"), "labels");
  if (model.labels.size() != net.output_dim) bad_shape("label count differs from output_dim");

  const auto& threshold = member(doc, "threshold");
  if (!threshold.is_number()) corrupt("'threshold' must be a number");
  model.threshold = threshold.get<double>();
  if (!(model.threshold > 0.0 && model.threshold < 1.0)) corrupt("threshold must lie in (0, 1)");

  const auto& w = member(doc, "weights");
  if (!w.is_object()) corrupt("'weights' must be an object");
  model.params.w1 = read_matrix(member(w, "W1"), "W1", net.input_dim, net.hidden_dim);
  model.params.b1 = read_vector(member(w, "b1"), "b1", net.hidden_dim);
  model.params.w2 = read_matrix(member(w, "W2"), "W2", net.hidden_dim, net.hidden_dim);
  model.params.b2 = read_vector(member(w, "b2"), "b2", net.hidden_dim);
  model.params.w3 = read_matrix(member(w, "W3"), "W3", net.hidden_dim, net.output_dim);
  model.params.b3 = read_vector(member(w, "b3"), "b3", net.output_dim);
  return model;
}

ModelFile load_model(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

ModelFile load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("no such file: " + path);
  return load_model(in);
}

}  // namespace vta::nn
