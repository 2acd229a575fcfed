#include <cmath>

#include "vta/baselines.hpp"

namespace vta::baselines {
namespace {

void softmax_in_place(std::vector<double>& z) {
  const double peak = z[argmax(z)];
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - peak);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

void check_nonempty(const LabeledDataset& data) {
  if (data.size() == 0) throw PreconditionError("cannot train logistic regression on an empty dataset");
}

}  // namespace

LRModel lr_zero_model(const LabeledDataset& data) {
  LRModel m;
  m.vocabulary = data.vocabulary;
  m.weights = Matrix(data.label_names.size(), data.vocabulary.size(), 0.0);
  m.bias.assign(data.label_names.size(), 0.0);
  return m;
}

std::vector<double> LRModel::probabilities(const BowVector& x) const {
  const std::size_t v = vocabulary.size();
  if (x.size() != v) throw DimensionError("feature vector does not match vocabulary size");
  std::vector<double> z(bias);
  for (std::size_t c = 0; c < z.size(); ++c) {
    const auto row = weights.row(c);
    for (std::size_t j = 0; j < v; ++j) {
      if (x[j]) z[c] += row[j];
    }
  }
  softmax_in_place(z);
  return z;
}

std::size_t LRModel::predict(const BowVector& x) const { return argmax(probabilities(x)); }

double lr_objective(const LRModel& model, const LabeledDataset& data, double l2) {
  check_nonempty(data);
  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = model.probabilities(data.features[i]);
    loss -= std::log(std::max(p[data.labels[i]], 1e-300));
  }
  loss /= static_cast<double>(data.size());
  double norm = 0.0;
  for (double w : model.weights.values()) norm += w * w;
  return loss + 0.5 * l2 * norm;
}

LRGradient lr_gradient(const LRModel& model, const LabeledDataset& data, double l2) {
  check_nonempty(data);
  const std::size_t k = model.weights.rows();
  const std::size_t v = model.weights.cols();
  LRGradient g{Matrix(k, v, 0.0), std::vector<double>(k, 0.0)};
  const double inv_n = 1.0 / static_cast<double>(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto p = model.probabilities(data.features[i]);
    p[data.labels[i]] -= 1.0;
    const auto& x = data.features[i];
    for (std::size_t c = 0; c < k; ++c) {
      const double d = p[c] * inv_n;
      g.bias[c] += d;
      auto row = g.weights.row(c);
      for (std::size_t j = 0; j < v; ++j) {
        if (x[j]) row[j] += d;
      }
    }
  }
  auto gw = g.weights.values();
  const auto w = model.weights.values();
  for (std::size_t j = 0; j < gw.size(); ++j) gw[j] += l2 * w[j];
  return g;
}

LRModel train_logistic_regression(const LabeledDataset& data, double l2, double learning_rate, int epochs) {
  if (l2 < 0.0) throw PreconditionError("logistic regression l2 must be >= 0");
  if (!(learning_rate > 0.0)) throw PreconditionError("logistic regression learning rate must be > 0");
  if (epochs < 1) throw PreconditionError("logistic regression epochs must be >= 1");
  check_nonempty(data);
  LRModel model = lr_zero_model(data);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    const auto g = lr_gradient(model, data, l2);
    auto w = model.weights.values();
    const auto gw = g.weights.values();
    for (std::size_t j = 0; j < w.size(); ++j) w[j] -= learning_rate * gw[j];
    for (std::size_t c = 0; c < model.bias.size(); ++c) model.bias[c] -= learning_rate * g.bias[c];
  }
  return model;
}

}  // namespace vta::baselines
