#include <algorithm>
#include <cmath>

#include "vta/baselines.hpp"

namespace vta::baselines {

NBModel train_naive_bayes(const LabeledDataset& data, double alpha) {
  if (!(alpha > 0.0)) throw PreconditionError("naive Bayes alpha must be > 0");
  if (data.size() == 0) throw PreconditionError("cannot train naive Bayes on an empty dataset");
  const std::size_t k = data.label_names.size();
  const std::size_t v = data.vocabulary.size();

  std::vector<std::size_t> class_count(k, 0);
  std::vector<double> token_total(k, 0.0);
  Matrix counts(k, v, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto c = data.labels[i];
    ++class_count[c];
    const auto& x = data.features[i];
    for (std::size_t w = 0; w < v; ++w) {
      if (x[w]) {
        counts(c, w) += 1.0;
        token_total[c] += 1.0;
      }
    }
  }

  NBModel model;
  model.vocabulary = data.vocabulary;
  model.log_prior.resize(k);
  model.log_likelihood = Matrix(k, v);
  const double n = static_cast<double>(data.size());
  for (std::size_t c = 0; c < k; ++c) {
    // Classes without examples get probability zero; argmax never picks them
    // unless every class is empty.
    model.log_prior[c] = class_count[c] == 0 ? -INFINITY : std::log(static_cast<double>(class_count[c]) / n);
    const double denom = token_total[c] + alpha * static_cast<double>(v);
    for (std::size_t w = 0; w < v; ++w) {
      model.log_likelihood(c, w) = std::log((counts(c, w) + alpha) / denom);
    }
  }
  return model;
}

std::vector<double> NBModel::joint_log_likelihood(const BowVector& x) const {
  if (x.size() != vocabulary.size()) throw DimensionError("feature vector does not match vocabulary size");
  std::vector<double> out(log_prior);
  for (std::size_t c = 0; c < out.size(); ++c) {
    const auto row = log_likelihood.row(c);
    for (std::size_t w = 0; w < x.size(); ++w) {
      if (x[w]) out[c] += row[w];
    }
  }
  return out;
}

std::vector<double> NBModel::log_posterior(const BowVector& x) const {
  auto out = joint_log_likelihood(x);
  const double peak = out[argmax(out)];
  double sum = 0.0;
  for (double v : out) sum += std::exp(v - peak);
  const double log_evidence = peak + std::log(sum);
  for (double& v : out) v -= log_evidence;
  return out;
}

// Exactly tied posteriors can differ by rounding in log space, so scores
// within a few ulps of the best count as tied and the lowest class wins.
std::size_t NBModel::predict(const BowVector& x) const {
  const auto scores = joint_log_likelihood(x);
  const double best = scores[argmax(scores)];
  const double slack = 1e-12 * std::max(1.0, std::abs(best));
  for (std::size_t c = 0; c < scores.size(); ++c) {
    if (scores[c] >= best - slack) return c;
  }
  return 0;
}

}  // namespace vta::baselines
