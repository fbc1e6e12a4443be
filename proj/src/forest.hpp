#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qxx::detail {

/// Bagged CART regression forest (variance-reduction splits, all features
/// considered at every split). Only used for parameter importance.
class RegressionForest {
 public:
  struct Options {
    std::size_t trees = 32;
    std::size_t max_depth = 12;
    std::size_t min_leaf = 2;
    std::uint64_t seed = 0;
  };

  /// x is row-major, rows x dims.
  void fit(std::span<const double> x, std::span<const double> y, std::size_t dims,
           const Options& options);
  double predict(std::span<const double> row) const;

 private:
  struct Node {
    std::size_t feature = 0;
    double threshold = 0.0;
    std::int32_t left = -1;  ///< -1 marks a leaf
    std::int32_t right = -1;
    double value = 0.0;
  };
  using Tree = std::vector<Node>;

  std::int32_t grow(Tree& tree, std::span<const double> x, std::span<const double> y,
                    std::vector<std::size_t>& rows, std::size_t begin, std::size_t end,
                    std::size_t depth, const Options& options) const;

  std::size_t dims_ = 0;
  std::vector<Tree> trees_;
};

}  // namespace qxx::detail
