#include "forest.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace qxx::detail {

void RegressionForest::fit(std::span<const double> x, std::span<const double> y,
                           std::size_t dims, const Options& options) {
  if (dims == 0 || x.size() != y.size() * dims || y.empty()) {
    throw std::invalid_argument("forest: inconsistent training data");
  }
  dims_ = dims;
  trees_.clear();
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, y.size() - 1);
  std::vector<std::size_t> rows(y.size());
  for (std::size_t t = 0; t < options.trees; ++t) {
    for (auto& r : rows) r = pick(rng);
    Tree tree;
    grow(tree, x, y, rows, 0, rows.size(), 0, options);
    trees_.push_back(std::move(tree));
  }
}

std::int32_t RegressionForest::grow(Tree& tree, std::span<const double> x,
                                    std::span<const double> y,
                                    std::vector<std::size_t>& rows, std::size_t begin,
                                    std::size_t end, std::size_t depth,
                                    const Options& options) const {
  const std::size_t count = end - begin;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    sum += y[rows[i]];
    sum_sq += y[rows[i]] * y[rows[i]];
  }
  const auto self = static_cast<std::int32_t>(tree.size());
  tree.push_back({0, 0.0, -1, -1, sum / static_cast<double>(count)});
  const double parent_sse = sum_sq - sum * sum / static_cast<double>(count);
  if (depth >= options.max_depth || count < 2 * options.min_leaf ||
      parent_sse <= 1e-12 * std::max(1.0, sum_sq)) {
    return self;
  }

  double best_gain = 0.0;
  std::size_t best_feature = 0;
  double best_threshold = 0.0;
  std::vector<std::size_t> order(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                                 rows.begin() + static_cast<std::ptrdiff_t>(end));
  for (std::size_t f = 0; f < dims_; ++f) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return x[a * dims_ + f] < x[b * dims_ + f];
    });
    double left_sum = 0.0;
    double left_sq = 0.0;
    for (std::size_t i = 0; i + 1 < count; ++i) {
      const double v = y[order[i]];
      left_sum += v;
      left_sq += v * v;
      const double here = x[order[i] * dims_ + f];
      const double next = x[order[i + 1] * dims_ + f];
      const std::size_t n_left = i + 1;
      const std::size_t n_right = count - n_left;
      if (here == next || n_left < options.min_leaf || n_right < options.min_leaf) {
        continue;
      }
      const double right_sum = sum - left_sum;
      const double right_sq = sum_sq - left_sq;
      const double sse = (left_sq - left_sum * left_sum / static_cast<double>(n_left)) +
                         (right_sq - right_sum * right_sum / static_cast<double>(n_right));
      const double gain = parent_sse - sse;
      if (gain > best_gain) {
        best_gain = gain;
        best_feature = f;
        best_threshold = 0.5 * (here + next);
      }
    }
  }
  if (best_gain <= 0.0) return self;

  const auto mid = std::partition(
      rows.begin() + static_cast<std::ptrdiff_t>(begin),
      rows.begin() + static_cast<std::ptrdiff_t>(end),
      [&](std::size_t r) { return x[r * dims_ + best_feature] <= best_threshold; });
  const auto split = static_cast<std::size_t>(mid - rows.begin());
  const auto left = grow(tree, x, y, rows, begin, split, depth + 1, options);
  const auto right = grow(tree, x, y, rows, split, end, depth + 1, options);
  tree[static_cast<std::size_t>(self)].feature = best_feature;
  tree[static_cast<std::size_t>(self)].threshold = best_threshold;
  tree[static_cast<std::size_t>(self)].left = left;
  tree[static_cast<std::size_t>(self)].right = right;
  return self;
}

double RegressionForest::predict(std::span<const double> row) const {
  double total = 0.0;
  for (const Tree& tree : trees_) {
    std::size_t at = 0;
    while (tree[at].left >= 0) {
      at = static_cast<std::size_t>(row[tree[at].feature] <= tree[at].threshold
                                        ? tree[at].left
                                        : tree[at].right);
    }
    total += tree[at].value;
  }
  return total / static_cast<double>(trees_.size());
}

}  // namespace qxx::detail
