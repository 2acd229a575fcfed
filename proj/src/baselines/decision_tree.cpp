#include <algorithm>
#include <numeric>

#include "vta/baselines.hpp"

namespace vta::baselines {
namespace {

__extension__ typedef unsigned __int128 u128;

// Gini impurity of a partition is minimized by maximizing
// sum over children of (sum_c n_c^2) / n_child, so candidate splits are
// compared as exact fractions over integers; ties are then genuinely equal.
struct Fraction {
  u128 num = 0;
  u128 den = 1;
  bool operator>(const Fraction& o) const { return num * o.den > o.num * den; }
};

std::uint64_t sum_of_squares(std::span<const std::uint64_t> counts) {
  std::uint64_t s = 0;
  for (auto c : counts) s += c * c;
  return s;
}

std::size_t majority(std::span<const std::uint64_t> counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return best;
}

class TreeBuilder {
 public:
  TreeBuilder(const LabeledDataset& data, std::optional<std::size_t> max_depth, DTModel& model)
      : data_(data), max_depth_(max_depth), model_(model), k_(data.label_names.size()) {}

  std::size_t grow(std::vector<std::size_t> rows, std::size_t depth) {
    std::vector<std::uint64_t> counts(k_, 0);
    for (auto r : rows) ++counts[data_.labels[r]];

    const std::size_t id = model_.nodes.size();
    model_.nodes.push_back({});
    model_.nodes[id].label = majority(counts);
    model_.nodes[id].samples = rows.size();

    const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
    if (pure || (max_depth_ && depth >= *max_depth_)) return id;

    const auto split = best_split(rows, counts);
    if (!split) return id;

    std::vector<std::size_t> absent, present;
    for (auto r : rows) (data_.features[r][*split] ? present : absent).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    const auto absent_id = grow(std::move(absent), depth + 1);
    const auto present_id = grow(std::move(present), depth + 1);
    auto& node = model_.nodes[id];
    node.feature = *split;
    node.absent = absent_id;
    node.present = present_id;
    return id;
  }

 private:
  std::optional<std::size_t> best_split(std::span<const std::size_t> rows,
                                        std::span<const std::uint64_t> parent_counts) const {
    const std::uint64_t n = rows.size();
    const Fraction parent{sum_of_squares(parent_counts), n};
    std::optional<std::size_t> best;
    Fraction best_score{};
    std::vector<std::uint64_t> present(k_), absent(k_);
    const std::size_t v = data_.vocabulary.size();
    for (std::size_t f = 0; f < v; ++f) {
      std::fill(present.begin(), present.end(), 0);
      std::uint64_t n_present = 0;
      for (auto r : rows) {
        if (data_.features[r][f]) {
          ++present[data_.labels[r]];
          ++n_present;
        }
      }
      if (n_present == 0 || n_present == n) continue;
      for (std::size_t c = 0; c < k_; ++c) absent[c] = parent_counts[c] - present[c];
      const std::uint64_t n_absent = n - n_present;
      const u128 sp = sum_of_squares(present);
      const u128 sa = sum_of_squares(absent);
      const Fraction score{sp * n_absent + sa * n_present, static_cast<u128>(n_present) * n_absent};
      if (!(score > parent)) continue;  // no impurity reduction
      if (!best || score > best_score) {
        best = f;
        best_score = score;
      }
    }
    return best;
  }

  const LabeledDataset& data_;
  std::optional<std::size_t> max_depth_;
  DTModel& model_;
  std::size_t k_;
};

}  // namespace

DTModel train_decision_tree(const LabeledDataset& data, std::optional<std::size_t> max_depth) {
  if (data.size() == 0) throw PreconditionError("cannot train a decision tree on an empty dataset");
  DTModel model;
  model.vocabulary = data.vocabulary;
  model.num_classes = data.label_names.size();
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  TreeBuilder(data, max_depth, model).grow(std::move(rows), 0);
  return model;
}

std::size_t DTModel::predict(const BowVector& x) const {
  if (x.size() != vocabulary.size()) throw DimensionError("feature vector does not match vocabulary size");
  std::size_t id = 0;
  while (nodes[id].feature) id = x[*nodes[id].feature] ? nodes[id].present : nodes[id].absent;
  return nodes[id].label;
}

std::size_t DTModel::depth() const {
  // Children are always appended after their parent.
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (nodes[i].feature) {
      level[nodes[i].absent] = level[i] + 1;
      level[nodes[i].present] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t DTModel::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const DTNode& n) { return !n.feature; }));
}

}  // namespace vta::baselines
