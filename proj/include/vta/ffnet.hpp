#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vta/exec.hpp"
#include "vta/matrix.hpp"
#include "vta/textpipe.hpp"

namespace vta::nn {

/// input -> hidden -> hidden -> output; both hidden layers share hidden_dim.
struct NetConfig {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 8;
  std::size_t output_dim = 0;

  void validate() const;
  bool operator==(const NetConfig&) const = default;
};

struct ModelParams {
  Matrix w1;  ///< input_dim x hidden_dim
  std::vector<double> b1;
  Matrix w2;  ///< hidden_dim x hidden_dim
  std::vector<double> b2;
  Matrix w3;  ///< hidden_dim x output_dim
  std::vector<double> b3;

  static ModelParams zeros(const NetConfig& config);
  NetConfig config() const;
  bool all_finite() const;
  std::size_t parameter_count() const;

  /// Every parameter in the fixed order w1, b1, w2, b2, w3, b3.
  template <class Fn>
  void for_each_tensor(Fn&& fn) {
    fn(w1.values()), fn(std::span<double>(b1)), fn(w2.values()), fn(std::span<double>(b2)),
        fn(w3.values()), fn(std::span<double>(b3));
  }
  template <class Fn>
  void for_each_tensor(Fn&& fn) const {
    fn(w1.values()), fn(std::span<const double>(b1)), fn(w2.values()), fn(std::span<const double>(b2)),
        fn(w3.values()), fn(std::span<const double>(b3));
  }

  bool operator==(const ModelParams&) const = default;
};

/// Same layout as the parameters they differentiate.
using Gradients = ModelParams;

/// Weights uniform in [-sqrt(6/fan_in), sqrt(6/fan_in)], biases zero.
ModelParams init_params(const NetConfig& config, std::uint64_t seed);

struct ForwardResult {
  std::vector<double> logits;
  std::vector<double> probs;
};

inline constexpr double kProbabilityFloor = 1e-12;

/// Max-shifted softmax mixed with the uniform distribution:
/// p = (1 - K * 1e-12) softmax(z) + 1e-12. Components stay strictly inside
/// (0, 1) even when exp underflows.
std::vector<double> softmax(std::span<const double> logits);

/// Throws DimensionError when x.size() != input_dim.
ForwardResult forward(const ModelParams& params, std::span<const std::uint8_t> x);

/// -log(max(probs[label], 1e-12)). Throws PreconditionError for a bad label.
double cross_entropy(std::span<const double> probs, std::size_t label);

/// Mean cross-entropy over the batch.
double batch_loss(const ModelParams& params, std::span<const BowVector> xs, std::span<const std::size_t> labels);

/// Exact gradient of batch_loss. ReLU'(0) is taken as 0.
Gradients backward(const ModelParams& params, std::span<const BowVector> xs, std::span<const std::size_t> labels);

struct DatasetScore {
  double mean_loss = 0.0;
  double accuracy = 0.0;
};

/// Mean loss and accuracy over the given rows. Rows are scored independently
/// and reduced in row order, so Exec::parallel is bitwise equal to serial.
DatasetScore score_rows(const ModelParams& params, const LabeledDataset& data, std::span<const std::size_t> rows,
                        Exec exec = Exec::parallel);
DatasetScore score_dataset(const ModelParams& params, const LabeledDataset& data, Exec exec = Exec::parallel);

/// Probability rows for every feature vector.
std::vector<std::vector<double>> predict_proba(const ModelParams& params, std::span<const BowVector> xs,
                                               Exec exec = Exec::parallel);

enum class Optimizer { adam, sgd };

struct EarlyStopping {
  double validation_fraction = 0.1;
  /// Consecutive non-improving checks before stopping.
  int patience = 5;
  int check_every = 10;
};

struct TrainConfig {
  std::size_t batch_size = 8;
  int epochs = 1000;
  double learning_rate = 0.001;
  int checkpoint_every = 100;
  std::uint64_t seed = 0;
  Optimizer optimizer = Optimizer::adam;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::optional<EarlyStopping> early_stop;

  void validate() const;
};

struct Checkpoint {
  int epoch = 0;  ///< epochs completed; 0 is the initialization
  double mean_loss = 0.0;
  double train_accuracy = 0.0;
  std::optional<double> validation_loss;
  std::optional<double> validation_accuracy;

  bool operator==(const Checkpoint&) const = default;
};

struct TrainReport {
  std::vector<Checkpoint> checkpoints;
  bool stopped_early = false;
  int stop_epoch = 0;  ///< last epoch trained

  bool operator==(const TrainReport&) const = default;
};

struct TrainResult {
  ModelParams params;
  TrainReport report;
};

/// Mini-batch training with a seeded per-epoch shuffle. The update loop is
/// serial; exec only affects checkpoint scoring.
TrainResult train(const LabeledDataset& data, const NetConfig& net, const TrainConfig& config,
                  Exec exec = Exec::parallel);

inline constexpr int kModelVersion = 1;
inline constexpr double kDefaultThreshold = 0.75;

/// Everything needed to serve predictions.
struct ModelFile {
  ModelParams params;
  Vocabulary vocabulary;
  std::vector<std::string> labels;
  double threshold = kDefaultThreshold;

  NetConfig config() const { return params.config(); }
  bool operator==(const ModelFile&) const = default;
};

/// JSON model document; doubles are printed with round-trip precision.
std::string serialize_model(const ModelFile& model);
void save_model(const ModelFile& model, std::ostream& out);
void save_model_file(const ModelFile& model, const std::string& path);

/// Throws ModelFormatError (version, shape or corrupt).
ModelFile parse_model(std::string_view text);
ModelFile load_model(std::istream& in);
ModelFile load_model_file(const std::string& path);

}  // namespace vta::nn
