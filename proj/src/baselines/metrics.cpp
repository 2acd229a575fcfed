#include <algorithm>

#include "vta/baselines.hpp"

namespace vta::baselines {

std::string_view to_string(ClassifierKind kind) noexcept {
  switch (kind) {
    case ClassifierKind::naive_bayes: return "naive_bayes";
    case ClassifierKind::decision_tree: return "decision_tree";
    case ClassifierKind::linear_svm: return "linear_svm";
    case ClassifierKind::logistic_regression: return "logistic_regression";
  }
  return "unknown";
}

std::optional<ClassifierKind> parse_classifier(std::string_view name) noexcept {
  for (auto kind : kAllClassifiers) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::size_t argmax(std::span<const double> values) noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

EvalReport evaluate_predictions(std::span<const std::size_t> truth, std::span<const std::size_t> predicted,
                                std::span<const std::string> label_names) {
  if (truth.size() != predicted.size()) {
    throw DimensionError("truth and prediction lengths differ");
  }
  const std::size_t k = label_names.size();
  std::vector<std::size_t> tp(k, 0), fp(k, 0), fn(k, 0), support(k, 0), predicted_count(k, 0);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = truth[i];
    const auto p = predicted[i];
    if (t >= k || p >= k) throw DimensionError("label index out of range");
    ++support[t];
    ++predicted_count[p];
    if (t == p) {
      ++correct;
      ++tp[t];
    } else {
      ++fp[p];
      ++fn[t];
    }
  }

  EvalReport report;
  if (!truth.empty()) report.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
  double f1_sum = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    if (support[c] == 0 && predicted_count[c] == 0) continue;
    ClassMetrics m;
    m.label = label_names[c];
    m.support = support[c];
    if (tp[c] + fp[c] > 0) m.precision = static_cast<double>(tp[c]) / static_cast<double>(tp[c] + fp[c]);
    if (tp[c] + fn[c] > 0) m.recall = static_cast<double>(tp[c]) / static_cast<double>(tp[c] + fn[c]);
    const auto denom = 2 * tp[c] + fp[c] + fn[c];
    if (denom > 0) m.f1 = static_cast<double>(2 * tp[c]) / static_cast<double>(denom);
    f1_sum += m.f1;
    report.per_class.push_back(std::move(m));
  }
  if (!report.per_class.empty()) report.macro_f1 = f1_sum / static_cast<double>(report.per_class.size());
  return report;
}

}  // namespace vta::baselines
