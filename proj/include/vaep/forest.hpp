#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vaep/dataset.hpp"

namespace vaep {

struct ForestParams {
  int n_trees = 1000;          // the CLI defaults to a 100-tree desk preset
  int max_depth = 10;
  double min_leaf = 100;       // minimum (bootstrap-weighted) rows per child
  int features_per_split = 0;  // 0: ceil(sqrt(d))
  int n_bins = 32;             // candidate thresholds per feature, at quantiles
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  std::int32_t left = -1;
  std::int32_t right = -1;
  double threshold = 0.0;     // go left iff x[feature] <= threshold
  double value = 0.5;         // Laplace-smoothed positive rate at this node
  double weight = 0.0;        // training rows (bootstrap-weighted) reaching the node
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  double predict(std::span<const double> row) const;
  int depth() const;
};

struct ForestModel {
  FeatureSchema schema;
  ForestParams params;
  std::vector<Tree> trees;
};

// Quantile thresholds per column; shared by every tree.
struct BinnedMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<std::uint8_t> bins;               // column-major
  std::vector<std::vector<double>> thresholds;  // per column, ascending
  std::uint8_t at(std::size_t r, std::size_t c) const { return bins[c * rows + r]; }
};
BinnedMatrix bin_features(const FeatureMatrix& x, int n_bins);

// Gini-split trees on bootstrap samples. Tree t draws its randomness from a
// stream derived from (seed, t) only, so the forest is identical for any
// thread count. Throws DegenerateInput on zero rows, LengthMismatch.
ForestModel train_forest(const FeatureMatrix& x, std::span<const std::uint8_t> y, const ForestParams& params = {});

// Mean of the tree leaf values. Throws SchemaMismatch.
std::vector<double> predict_forest(const ForestModel& m, const FeatureMatrix& x);
double predict_forest(const ForestModel& m, std::span<const double> row);

namespace serial {
ForestModel train_forest(const FeatureMatrix& x, std::span<const std::uint8_t> y, const ForestParams& params = {});
std::vector<double> predict_forest(const ForestModel& m, const FeatureMatrix& x);
}  // namespace serial

}  // namespace vaep
