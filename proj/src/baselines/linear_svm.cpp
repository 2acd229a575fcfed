#include <cmath>
#include <numeric>

#include "vta/baselines.hpp"
#include "vta/rng.hpp"

namespace vta::baselines {
namespace {

std::vector<std::size_t> active_features(const BowVector& x) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i]) out.push_back(i);
  }
  return out;
}

// w = scale * u, so the per-step shrink (1 - eta*lambda) costs O(1) and the
// hinge update touches only the active features.
struct ScaledVector {
  std::vector<double> u;
  double scale = 1.0;

  double dot(std::span<const std::size_t> active, std::size_t bias_index) const {
    double s = u[bias_index];
    for (auto i : active) s += u[i];
    return scale * s;
  }

  void shrink(double factor) {
    if (factor == 0.0) {
      std::fill(u.begin(), u.end(), 0.0);
      scale = 1.0;
      return;
    }
    scale *= factor;
    if (scale < 1e-9) {
      for (double& v : u) v *= scale;
      scale = 1.0;
    }
  }

  void add(std::span<const std::size_t> active, std::size_t bias_index, double amount) {
    const double delta = amount / scale;
    u[bias_index] += delta;
    for (auto i : active) u[i] += delta;
  }
};

}  // namespace

SVMModel train_linear_svm(const LabeledDataset& data, double lambda, int epochs, std::uint64_t seed) {
  if (!(lambda > 0.0)) throw PreconditionError("SVM lambda must be > 0");
  if (epochs < 1) throw PreconditionError("SVM epochs must be >= 1");
  if (data.size() == 0) throw PreconditionError("cannot train an SVM on an empty dataset");
  const std::size_t k = data.label_names.size();
  const std::size_t v = data.vocabulary.size();
  {
    std::vector<bool> seen(k, false);
    std::size_t distinct = 0;
    for (auto l : data.labels) distinct += seen[l] ? 0 : (seen[l] = true, 1);
    if (distinct < 2) throw PreconditionError("linear SVM needs at least two classes in the training data");
  }

  std::vector<std::vector<std::size_t>> active(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) active[i] = active_features(data.features[i]);

  std::vector<ScaledVector> w(k, ScaledVector{std::vector<double>(v + 1, 0.0), 1.0});
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  std::uint64_t t = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(std::span(order));
    for (auto i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      for (std::size_t c = 0; c < k; ++c) {
        const double y = data.labels[i] == c ? 1.0 : -1.0;
        const double margin = y * w[c].dot(active[i], v);
        w[c].shrink(1.0 - eta * lambda);
        if (margin < 1.0) w[c].add(active[i], v, eta * y);
      }
    }
  }

  SVMModel model;
  model.vocabulary = data.vocabulary;
  model.weights = Matrix(k, v + 1);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t j = 0; j <= v; ++j) model.weights(c, j) = w[c].scale * w[c].u[j];
  }
  return model;
}

std::vector<double> SVMModel::margins(const BowVector& x) const {
  const std::size_t v = vocabulary.size();
  if (x.size() != v) throw DimensionError("feature vector does not match vocabulary size");
  std::vector<double> out(weights.rows());
  for (std::size_t c = 0; c < out.size(); ++c) {
    const auto row = weights.row(c);
    double s = row[v];
    for (std::size_t j = 0; j < v; ++j) {
      if (x[j]) s += row[j];
    }
    out[c] = s;
  }
  return out;
}

std::size_t SVMModel::predict(const BowVector& x) const { return argmax(margins(x)); }

}  // namespace vta::baselines
