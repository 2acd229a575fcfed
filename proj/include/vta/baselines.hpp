#pragma once

#include <array>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vta/corpus.hpp"
#include "vta/error.hpp"
#include "vta/exec.hpp"
#include "vta/matrix.hpp"
#include "vta/textpipe.hpp"

namespace vta::baselines {

enum class ClassifierKind { naive_bayes, decision_tree, linear_svm, logistic_regression };

inline constexpr std::array<ClassifierKind, 4> kAllClassifiers = {
    ClassifierKind::naive_bayes, ClassifierKind::decision_tree, ClassifierKind::linear_svm,
    ClassifierKind::logistic_regression};

std::string_view to_string(ClassifierKind kind) noexcept;
std::optional<ClassifierKind> parse_classifier(std::string_view name) noexcept;

/// Index of the largest value; ties go to the lowest index.
std::size_t argmax(std::span<const double> values) noexcept;

// --- Naive Bayes ----------------------------------------------------------

/// Multinomial NB over binary features with Laplace smoothing.
struct NBModel {
  Vocabulary vocabulary;
  std::vector<double> log_prior;  ///< log(count_c / N)
  Matrix log_likelihood;          ///< K x V, log((n_cw + alpha) / (n_c + alpha V))

  /// Unnormalized log P(c) + sum_w x_w log P(w|c), one per class.
  std::vector<double> joint_log_likelihood(const BowVector& x) const;
  /// Normalized log P(c | x).
  std::vector<double> log_posterior(const BowVector& x) const;
  std::size_t predict(const BowVector& x) const;
};

NBModel train_naive_bayes(const LabeledDataset& data, double alpha = 1.0);

// --- Decision tree ----------------------------------------------------------

struct DTNode {
  /// Split feature; nullopt for a leaf.
  std::optional<std::size_t> feature;
  std::size_t absent = 0;   ///< child index when x[feature] == 0
  std::size_t present = 0;  ///< child index when x[feature] == 1
  std::size_t label = 0;    ///< majority label of the node's samples
  std::size_t samples = 0;
};

/// Binary CART tree over feature presence, Gini impurity. nodes[0] is the root.
struct DTModel {
  Vocabulary vocabulary;
  std::size_t num_classes = 0;
  std::vector<DTNode> nodes;

  std::size_t predict(const BowVector& x) const;
  std::size_t depth() const;
  std::size_t leaf_count() const;
};

DTModel train_decision_tree(const LabeledDataset& data, std::optional<std::size_t> max_depth = std::nullopt);

// --- Linear SVM -------------------------------------------------------------

/// One-vs-rest linear SVMs; column V of each weight row is the bias, trained
/// as an always-on feature.
struct SVMModel {
  Vocabulary vocabulary;
  Matrix weights;  ///< K x (V + 1)

  std::vector<double> margins(const BowVector& x) const;
  std::size_t predict(const BowVector& x) const;
};

/// Pegasos subgradient descent on the L2-regularized hinge loss, step size
/// 1/(lambda t), example order reshuffled every epoch from seed.
SVMModel train_linear_svm(const LabeledDataset& data, double lambda = 0.01, int epochs = 200,
                          std::uint64_t seed = 0);

// --- Logistic regression ----------------------------------------------------

struct LRModel {
  Vocabulary vocabulary;
  Matrix weights;             ///< K x V
  std::vector<double> bias;   ///< K

  std::vector<double> probabilities(const BowVector& x) const;
  std::size_t predict(const BowVector& x) const;
};

struct LRGradient {
  Matrix weights;
  std::vector<double> bias;
};

/// Mean cross-entropy plus (l2 / 2) * ||W||^2; the bias is not penalized.
double lr_objective(const LRModel& model, const LabeledDataset& data, double l2);
LRGradient lr_gradient(const LRModel& model, const LabeledDataset& data, double l2);
LRModel lr_zero_model(const LabeledDataset& data);

/// Full-batch gradient descent from all-zero weights.
LRModel train_logistic_regression(const LabeledDataset& data, double l2 = 1e-4, double learning_rate = 0.1,
                                  int epochs = 500);

// --- Evaluation -------------------------------------------------------------

struct ClassMetrics {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct EvalReport {
  double accuracy = 0.0;
  /// Unweighted mean of per_class f1.
  double macro_f1 = 0.0;
  /// Classes present in the truth or in the predictions, in label order;
  /// classes that are neither are excluded from the macro mean.
  std::vector<ClassMetrics> per_class;
};

EvalReport evaluate_predictions(std::span<const std::size_t> truth, std::span<const std::size_t> predicted,
                                std::span<const std::string> label_names);

template <class M>
concept Classifier = requires(const M& m, const BowVector& x) {
  { m.predict(x) } -> std::convertible_to<std::size_t>;
  { m.vocabulary } -> std::convertible_to<const Vocabulary&>;
};

/// Predicts every row; rows are independent so Exec::parallel matches serial.
template <Classifier M>
std::vector<std::size_t> predict_all(const M& model, std::span<const BowVector> rows, Exec exec = Exec::parallel) {
  std::vector<std::size_t> out(rows.size());
  for_each_index(exec, rows.size(), [&](std::size_t i) { out[i] = model.predict(rows[i]); });
  return out;
}

template <Classifier M>
EvalReport evaluate(const M& model, const LabeledDataset& test, Exec exec = Exec::parallel) {
  if (!(model.vocabulary == test.vocabulary)) {
    throw VocabularyMismatchError("test data was encoded with a different vocabulary than the model");
  }
  const auto predicted = predict_all(model, test.features, exec);
  return evaluate_predictions(test.labels, predicted, test.label_names);
}

// --- Refactoring comparison -------------------------------------------------

struct HyperParams {
  double nb_alpha = 1.0;
  std::optional<std::size_t> dt_max_depth;
  double svm_lambda = 0.01;
  int svm_epochs = 200;
  double lr_l2 = 1e-4;
  double lr_learning_rate = 0.1;
  int lr_epochs = 500;
};

struct ComparisonRow {
  std::size_t threshold = 0;
  ClassifierKind classifier = ClassifierKind::naive_bayes;
  EvalReport report;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t num_tags = 0;
};

struct ComparisonTable {
  /// Threshold-major, classifiers in kAllClassifiers order.
  std::vector<ComparisonRow> rows;

  const ComparisonRow& at(std::size_t threshold, ClassifierKind kind) const;
  /// threshold,classifier,accuracy,macro_f1 with six decimals.
  std::string to_csv() const;
  std::string to_text() const;
};

/// Trains one classifier on train and scores it on test.
EvalReport train_and_evaluate(ClassifierKind kind, const LabeledDataset& train, const LabeledDataset& test,
                              const HyperParams& params, std::uint64_t seed);

/// For each threshold: refactor -> split(seed) -> encode (vocabulary from the
/// train split) -> train all four -> evaluate. Under Exec::parallel the four
/// trainers run concurrently; each trainer is itself serial.
ComparisonTable compare_refactoring(const Corpus& corpus, std::span<const std::size_t> thresholds,
                                    double test_fraction, std::uint64_t seed,
                                    const text::PipelineConfig& config = text::PipelineConfig::defaults(),
                                    const HyperParams& params = {}, Exec exec = Exec::parallel);

}  // namespace vta::baselines
