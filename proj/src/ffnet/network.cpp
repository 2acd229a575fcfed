#include <algorithm>
#include <cmath>

#include "vta/error.hpp"
#include "vta/ffnet.hpp"
#include "vta/rng.hpp"
#include "network_internal.hpp"

namespace vta::nn {

void NetConfig::validate() const {
  if (input_dim < 1 || hidden_dim < 1 || output_dim < 1) {
    throw PreconditionError("network dimensions must all be >= 1 (got " + std::to_string(input_dim) + "-" +
                            std::to_string(hidden_dim) + "-" + std::to_string(output_dim) + ")");
  }
}

ModelParams ModelParams::zeros(const NetConfig& c) {
  c.validate();
  ModelParams p;
  p.w1 = Matrix(c.input_dim, c.hidden_dim);
  p.b1.assign(c.hidden_dim, 0.0);
  p.w2 = Matrix(c.hidden_dim, c.hidden_dim);
  p.b2.assign(c.hidden_dim, 0.0);
  p.w3 = Matrix(c.hidden_dim, c.output_dim);
  p.b3.assign(c.output_dim, 0.0);
  return p;
}

NetConfig ModelParams::config() const { return {w1.rows(), w1.cols(), w3.cols()}; }

bool ModelParams::all_finite() const {
  bool ok = true;
  for_each_tensor([&](std::span<const double> t) {
    ok = ok && std::all_of(t.begin(), t.end(), [](double v) { return std::isfinite(v); });
  });
  return ok;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for_each_tensor([&](std::span<const double> t) { n += t.size(); });
  return n;
}

ModelParams init_params(const NetConfig& config, std::uint64_t seed) {
  ModelParams p = ModelParams::zeros(config);
  Rng rng(seed);
  auto fill = [&](Matrix& w) {
    const double bound = std::sqrt(6.0 / static_cast<double>(w.rows()));
    for (double& v : w.values()) v = rng.uniform_real(-bound, bound);
  };
  fill(p.w1);
  fill(p.w2);
  fill(p.w3);
  return p;
}

namespace {

// Plain max-shifted softmax.
void exact_softmax(std::span<const double> logits, std::vector<double>& out) {
  out.assign(logits.begin(), logits.end());
  if (out.empty()) return;
  const double peak = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  for (double& v : out) {
    v = std::exp(v - peak);
    sum += v;
  }
  for (double& v : out) v /= sum;
}

double smoothing_scale(std::size_t k) { return 1.0 - static_cast<double>(k) * kProbabilityFloor; }

}  // namespace

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out;
  exact_softmax(logits, out);
  const double scale = smoothing_scale(out.size());
  for (double& v : out) v = scale * v + kProbabilityFloor;
  return out;
}

double cross_entropy(std::span<const double> probs, std::size_t label) {
  if (label >= probs.size()) {
    throw PreconditionError("label " + std::to_string(label) + " out of range for " + std::to_string(probs.size()) +
                            " classes");
  }
  return -std::log(std::max(probs[label], kProbabilityFloor));
}

namespace detail {

void forward_into(const ModelParams& p, std::span<const std::uint8_t> x, Activations& a) {
  const std::size_t in = p.w1.rows();
  const std::size_t hidden = p.w1.cols();
  const std::size_t out = p.w3.cols();
  if (x.size() != in) {
    throw DimensionError("input has " + std::to_string(x.size()) + " features, network expects " + std::to_string(in));
  }
  a.z1.assign(p.b1.begin(), p.b1.end());
  for (std::size_t i = 0; i < in; ++i) {
    if (!x[i]) continue;
    const double xi = x[i];
    const auto row = p.w1.row(i);
    for (std::size_t j = 0; j < hidden; ++j) a.z1[j] += xi * row[j];
  }
  a.h1.resize(hidden);
  for (std::size_t j = 0; j < hidden; ++j) a.h1[j] = a.z1[j] > 0.0 ? a.z1[j] : 0.0;

  a.z2.assign(p.b2.begin(), p.b2.end());
  for (std::size_t i = 0; i < hidden; ++i) {
    const double hi = a.h1[i];
    if (hi == 0.0) continue;
    const auto row = p.w2.row(i);
    for (std::size_t j = 0; j < hidden; ++j) a.z2[j] += hi * row[j];
  }
  a.h2.resize(hidden);
  for (std::size_t j = 0; j < hidden; ++j) a.h2[j] = a.z2[j] > 0.0 ? a.z2[j] : 0.0;

  a.logits.assign(p.b3.begin(), p.b3.end());
  for (std::size_t i = 0; i < hidden; ++i) {
    const double hi = a.h2[i];
    if (hi == 0.0) continue;
    const auto row = p.w3.row(i);
    for (std::size_t j = 0; j < out; ++j) a.logits[j] += hi * row[j];
  }
  exact_softmax(a.logits, a.exact);
  const double scale = smoothing_scale(out);
  a.probs.resize(out);
  for (std::size_t j = 0; j < out; ++j) a.probs[j] = scale * a.exact[j] + kProbabilityFloor;
}

void accumulate_gradient(const ModelParams& p, std::span<const std::uint8_t> x, std::size_t label, double scale,
                         Gradients& g, Activations& a) {
  forward_into(p, x, a);
  const std::size_t in = p.w1.rows();
  const std::size_t hidden = p.w1.cols();
  const std::size_t out = p.w3.cols();
  if (label >= out) throw PreconditionError("label " + std::to_string(label) + " out of range");

  // With p = c s + eps (s the exact softmax), dL/dz_j = c (s_y / p_y) (s_j - [j == y]).
  const double mix = smoothing_scale(out) * a.exact[label] / a.probs[label];
  a.d_out.resize(out);
  for (std::size_t j = 0; j < out; ++j) a.d_out[j] = scale * mix * (a.exact[j] - (j == label ? 1.0 : 0.0));

  a.d_h.assign(hidden, 0.0);
  for (std::size_t i = 0; i < hidden; ++i) {
    const auto w_row = p.w3.row(i);
    auto g_row = g.w3.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < out; ++j) {
      g_row[j] += a.h2[i] * a.d_out[j];
      acc += w_row[j] * a.d_out[j];
    }
    a.d_h[i] = a.z2[i] > 0.0 ? acc : 0.0;  // through relu of layer 2
  }
  for (std::size_t j = 0; j < out; ++j) g.b3[j] += a.d_out[j];

  a.d_h1.assign(hidden, 0.0);
  for (std::size_t i = 0; i < hidden; ++i) {
    const auto w_row = p.w2.row(i);
    auto g_row = g.w2.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < hidden; ++j) {
      g_row[j] += a.h1[i] * a.d_h[j];
      acc += w_row[j] * a.d_h[j];
    }
    a.d_h1[i] = a.z1[i] > 0.0 ? acc : 0.0;
  }
  for (std::size_t j = 0; j < hidden; ++j) g.b2[j] += a.d_h[j];

  for (std::size_t i = 0; i < in; ++i) {
    if (!x[i]) continue;
    const double xi = x[i];
    auto g_row = g.w1.row(i);
    for (std::size_t j = 0; j < hidden; ++j) g_row[j] += xi * a.d_h1[j];
  }
  for (std::size_t j = 0; j < hidden; ++j) g.b1[j] += a.d_h1[j];
}

}  // namespace detail

ForwardResult forward(const ModelParams& params, std::span<const std::uint8_t> x) {
  detail::Activations a;
  detail::forward_into(params, x, a);
  return {std::move(a.logits), std::move(a.probs)};
}

double batch_loss(const ModelParams& params, std::span<const BowVector> xs, std::span<const std::size_t> labels) {
  if (xs.empty() || xs.size() != labels.size()) throw PreconditionError("batch must be non-empty with one label per row");
  detail::Activations a;
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    detail::forward_into(params, xs[i], a);
    sum += cross_entropy(a.probs, labels[i]);
  }
  return sum / static_cast<double>(xs.size());
}

Gradients backward(const ModelParams& params, std::span<const BowVector> xs, std::span<const std::size_t> labels) {
  if (xs.empty() || xs.size() != labels.size()) throw PreconditionError("batch must be non-empty with one label per row");
  Gradients g = ModelParams::zeros(params.config());
  detail::Activations a;
  const double scale = 1.0 / static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) detail::accumulate_gradient(params, xs[i], labels[i], scale, g, a);
  return g;
}

DatasetScore score_rows(const ModelParams& params, const LabeledDataset& data, std::span<const std::size_t> rows,
                        Exec exec) {
  if (rows.empty()) return {};
  for (auto r : rows) {
    if (r >= data.size()) throw PreconditionError("row index out of range");
    if (data.features[r].size() != params.w1.rows()) throw DimensionError("dataset width does not match network input");
    if (data.labels[r] >= params.w3.cols()) throw PreconditionError("label out of range for network output");
  }
  std::vector<double> losses(rows.size());
  std::vector<std::uint8_t> hits(rows.size());
  for_each_index(exec, rows.size(), [&](std::size_t i) {
    detail::Activations a;
    const auto r = rows[i];
    detail::forward_into(params, data.features[r], a);
    losses[i] = cross_entropy(a.probs, data.labels[r]);
    const auto best = static_cast<std::size_t>(std::max_element(a.probs.begin(), a.probs.end()) - a.probs.begin());
    hits[i] = best == data.labels[r];
  });
  DatasetScore s;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    s.mean_loss += losses[i];
    correct += hits[i];
  }
  const auto n = static_cast<double>(rows.size());
  s.mean_loss /= n;
  s.accuracy = static_cast<double>(correct) / n;
  return s;
}

DatasetScore score_dataset(const ModelParams& params, const LabeledDataset& data, Exec exec) {
  std::vector<std::size_t> rows(data.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return score_rows(params, data, rows, exec);
}

std::vector<std::vector<double>> predict_proba(const ModelParams& params, std::span<const BowVector> xs, Exec exec) {
  for (const auto& x : xs) {
    if (x.size() != params.w1.rows()) throw DimensionError("input width does not match network input");
  }
  std::vector<std::vector<double>> out(xs.size());
  for_each_index(exec, xs.size(), [&](std::size_t i) {
    detail::Activations a;
    detail::forward_into(params, xs[i], a);
    out[i] = std::move(a.probs);
  });
  return out;
}

}  // namespace vta::nn
