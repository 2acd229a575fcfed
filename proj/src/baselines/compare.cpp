#include <cstdio>
#include <exception>
#include <sstream>

#include "vta/baselines.hpp"

namespace vta::baselines {
namespace {

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

EvalReport train_and_evaluate(ClassifierKind kind, const LabeledDataset& train, const LabeledDataset& test,
                              const HyperParams& params, std::uint64_t seed) {
  switch (kind) {
    case ClassifierKind::naive_bayes:
      return evaluate(train_naive_bayes(train, params.nb_alpha), test, Exec::serial);
    case ClassifierKind::decision_tree:
      return evaluate(train_decision_tree(train, params.dt_max_depth), test, Exec::serial);
    case ClassifierKind::linear_svm:
      return evaluate(train_linear_svm(train, params.svm_lambda, params.svm_epochs, seed), test, Exec::serial);
    case ClassifierKind::logistic_regression:
      return evaluate(train_logistic_regression(train, params.lr_l2, params.lr_learning_rate, params.lr_epochs),
                      test, Exec::serial);
  }
  throw PreconditionError("unknown classifier kind");
}

ComparisonTable compare_refactoring(const Corpus& corpus, std::span<const std::size_t> thresholds,
                                    double test_fraction, std::uint64_t seed, const text::PipelineConfig& config,
                                    const HyperParams& params, Exec exec) {
  if (thresholds.empty()) throw PreconditionError("at least one refactoring threshold is required");
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (thresholds[i] <= thresholds[i - 1]) throw PreconditionError("refactoring thresholds must be ascending");
  }

  ComparisonTable table;
  for (const auto threshold : thresholds) {
    const Corpus refactored = refactor(corpus, threshold);
    const SplitPair parts = split(refactored, test_fraction, seed);
    if (parts.test.empty()) {
      throw PreconditionError("threshold " + std::to_string(threshold) + " leaves no test examples");
    }
    const Vocabulary vocab = build_vocabulary(parts.train, config);
    const auto train = encode_examples(parts.train, parts.label_names, vocab, config, exec);
    const auto test = encode_examples(parts.test, parts.label_names, vocab, config, exec);

    std::array<EvalReport, kAllClassifiers.size()> reports;
    std::array<std::exception_ptr, kAllClassifiers.size()> errors;
    for_each_index(exec, kAllClassifiers.size(), [&](std::size_t i) {
      try {
        reports[i] = train_and_evaluate(kAllClassifiers[i], train, test, params, seed);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (std::size_t i = 0; i < kAllClassifiers.size(); ++i) {
      table.rows.push_back({threshold, kAllClassifiers[i], std::move(reports[i]), train.size(), test.size(),
                            refactored.intents.size()});
    }
  }
  return table;
}

const ComparisonRow& ComparisonTable::at(std::size_t threshold, ClassifierKind kind) const {
  for (const auto& row : rows) {
    if (row.threshold == threshold && row.classifier == kind) return row;
  }
  throw PreconditionError("no comparison row for threshold " + std::to_string(threshold) + " and " +
                          std::string(to_string(kind)));
}

std::string ComparisonTable::to_csv() const {
  std::string out = "threshold,classifier,accuracy,macro_f1\n";
  for (const auto& row : rows) {
    out += std::to_string(row.threshold) + "," + std::string(to_string(row.classifier)) + "," +
           fixed6(row.report.accuracy) + "," + fixed6(row.report.macro_f1) + "\n";
  }
  return out;
}

std::string ComparisonTable::to_text() const {
  char line[160];
  std::string out;
  std::snprintf(line, sizeof line, "%9s  %-19s  %8s  %8s  %4s  %5s  %4s\n", "threshold", "classifier", "accuracy",
                "macro_f1", "tags", "train", "test");
  out += line;
  for (const auto& row : rows) {
    std::snprintf(line, sizeof line, "%9zu  %-19s  %8.4f  %8.4f  %4zu  %5zu  %4zu\n", row.threshold,
                  std::string(to_string(row.classifier)).c_str(), row.report.accuracy, row.report.macro_f1,
                  row.num_tags, row.train_size, row.test_size);
    out += line;
  }
  return out;
}

}  // namespace vta::baselines
