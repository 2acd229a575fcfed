#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vta/error.hpp"
#include "vta/ffnet.hpp"
#include "vta/rng.hpp"
#include "network_internal.hpp"

namespace vta::nn {
namespace {

// Distinct streams for initialization, shuffling and the validation hold-out.
constexpr std::uint64_t kShuffleStream = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kHoldoutStream = 0xD1B54A32D192ED03ULL;

class ParamUpdater {
 public:
  ParamUpdater(const TrainConfig& c, const ModelParams& shape)
      : config_(c), m_(ModelParams::zeros(shape.config())), v_(ModelParams::zeros(shape.config())) {}

  void step(ModelParams& params, const Gradients& grads) {
    ++t_;
    std::vector<std::span<double>> p, m, v;
    std::vector<std::span<const double>> g;
    params.for_each_tensor([&](std::span<double> s) { p.push_back(s); });
    m_.for_each_tensor([&](std::span<double> s) { m.push_back(s); });
    v_.for_each_tensor([&](std::span<double> s) { v.push_back(s); });
    grads.for_each_tensor([&](std::span<const double> s) { g.push_back(s); });

    const double lr = config_.learning_rate;
    if (config_.optimizer == Optimizer::sgd) {
      for (std::size_t k = 0; k < p.size(); ++k) {
        for (std::size_t i = 0; i < p[k].size(); ++i) p[k][i] -= lr * g[k][i];
      }
      return;
    }
    const double b1 = config_.adam_beta1;
    const double b2 = config_.adam_beta2;
    const double correction1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double correction2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    for (std::size_t k = 0; k < p.size(); ++k) {
      for (std::size_t i = 0; i < p[k].size(); ++i) {
        const double gi = g[k][i];
        m[k][i] = b1 * m[k][i] + (1.0 - b1) * gi;
        v[k][i] = b2 * v[k][i] + (1.0 - b2) * gi * gi;
        const double m_hat = m[k][i] / correction1;
        const double v_hat = v[k][i] / correction2;
        p[k][i] -= lr * m_hat / (std::sqrt(v_hat) + config_.adam_epsilon);
      }
    }
  }

 private:
  const TrainConfig& config_;
  ModelParams m_;
  ModelParams v_;
  std::uint64_t t_ = 0;
};

// Stratified: each label keeps at least one training row.
void hold_out(const LabeledDataset& data, double fraction, std::uint64_t seed, std::vector<std::size_t>& train_rows,
              std::vector<std::size_t>& validation_rows) {
  std::vector<std::vector<std::size_t>> by_label(data.label_names.size());
  for (std::size_t i = 0; i < data.size(); ++i) by_label[data.labels[i]].push_back(i);
  Rng rng(seed ^ kHoldoutStream);
  std::vector<bool> held(data.size(), false);
  for (auto& rows : by_label) {
    if (rows.size() < 2) continue;
    const auto wanted = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(rows.size())));
    const std::size_t k = std::min(wanted, rows.size() - 1);
    rng.shuffle(std::span(rows));
    for (std::size_t j = 0; j < k; ++j) held[rows[j]] = true;
  }
  for (std::size_t i = 0; i < data.size(); ++i) (held[i] ? validation_rows : train_rows).push_back(i);
}

}  // namespace

void TrainConfig::validate() const {
  if (batch_size < 1) throw PreconditionError("batch size must be >= 1");
  if (epochs < 1) throw PreconditionError("epochs must be >= 1");
  if (checkpoint_every < 1) throw PreconditionError("checkpoint interval must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw PreconditionError("learning rate must be >= 0");
  if (early_stop) {
    if (!(early_stop->validation_fraction > 0.0 && early_stop->validation_fraction < 1.0)) {
      throw PreconditionError("validation fraction must lie in (0, 1)");
    }
    if (early_stop->patience < 1 || early_stop->check_every < 1) {
      throw PreconditionError("early stopping patience and check interval must be >= 1");
    }
  }
}

TrainResult train(const LabeledDataset& data, const NetConfig& net, const TrainConfig& config, Exec exec) {
  config.validate();
  net.validate();
  if (data.size() == 0) throw PreconditionError("cannot train on an empty dataset");
  if (net.input_dim != data.vocabulary.size() || net.output_dim != data.label_names.size()) {
    throw PreconditionError("network shape " + std::to_string(net.input_dim) + "->" + std::to_string(net.output_dim) +
                            " does not match data (" + std::to_string(data.vocabulary.size()) + " words, " +
                            std::to_string(data.label_names.size()) + " labels)");
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.features[i].size() != net.input_dim) throw DimensionError("dataset row has the wrong width");
    if (data.labels[i] >= net.output_dim) throw PreconditionError("dataset label out of range");
  }

  std::vector<std::size_t> train_rows, validation_rows;
  if (config.early_stop) {
    hold_out(data, config.early_stop->validation_fraction, config.seed, train_rows, validation_rows);
  } else {
    train_rows.resize(data.size());
    std::iota(train_rows.begin(), train_rows.end(), std::size_t{0});
  }

  TrainResult result{init_params(net, config.seed), {}};
  auto& params = result.params;
  auto& report = result.report;
  ParamUpdater optimizer(config, params);
  Rng shuffle_rng(config.seed ^ kShuffleStream);
  Gradients grads = ModelParams::zeros(net);
  detail::Activations scratch;

  auto checkpoint = [&](int epoch) {
    const auto s = score_rows(params, data, train_rows, exec);
    Checkpoint c{epoch, s.mean_loss, s.accuracy, std::nullopt, std::nullopt};
    if (!validation_rows.empty()) {
      const auto v = score_rows(params, data, validation_rows, exec);
      c.validation_loss = v.mean_loss;
      c.validation_accuracy = v.accuracy;
    }
    report.checkpoints.push_back(c);
  };

  checkpoint(0);
  double best_validation = std::numeric_limits<double>::infinity();
  int bad_checks = 0;
  std::vector<std::size_t> order = train_rows;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_rng.shuffle(std::span(order));
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      grads.for_each_tensor([](std::span<double> t) { std::fill(t.begin(), t.end(), 0.0); });
      const double scale = 1.0 / static_cast<double>(end - start);
      for (std::size_t b = start; b < end; ++b) {
        const auto r = order[b];
        detail::accumulate_gradient(params, data.features[r], data.labels[r], scale, grads, scratch);
      }
      optimizer.step(params, grads);
    }
    report.stop_epoch = epoch;

    bool stop = false;
    if (config.early_stop && !validation_rows.empty() && epoch % config.early_stop->check_every == 0) {
      const double loss = score_rows(params, data, validation_rows, exec).mean_loss;
      if (loss < best_validation) {
        best_validation = loss;
        bad_checks = 0;
      } else if (++bad_checks >= config.early_stop->patience) {
        stop = true;
      }
    }
    if (epoch % config.checkpoint_every == 0 || epoch == config.epochs || stop) checkpoint(epoch);
    if (stop) {
      report.stopped_early = true;
      break;
    }
  }
  if (!params.all_finite()) throw Error("training diverged: parameters are no longer finite");
  return result;
}

}  // namespace vta::nn
