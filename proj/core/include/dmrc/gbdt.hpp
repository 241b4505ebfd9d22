#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dmrc/features.hpp"

namespace dmrc {

struct GbdtParams {
  unsigned rounds = 600;
  double learning_rate = 0.1;
  unsigned max_depth = 3;
  std::uint64_t seed = 0;  // kept for provenance; training itself is deterministic
  bool operator==(const GbdtParams&) const = default;
};

struct TreeNode {
  std::uint32_t feature = 0;
  double threshold = 0;
  std::uint32_t left = 0;   // 0 for leaves (node 0 is always the root)
  std::uint32_t right = 0;
  double value = 0;         // leaf output, learning rate already applied
  bool is_leaf() const { return left == 0 && right == 0; }
  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;
  double predict(std::span<const double> x) const;
  bool operator==(const RegressionTree&) const = default;
};

struct BoostedModel {
  GbdtParams params;
  FeatureLayout layout;
  std::array<double, 3> priors{};        // class frequencies on the training set
  std::vector<RegressionTree> trees;     // rounds*3, round-major, class within
  std::vector<double> train_loss;        // mean log-loss before each round + final
  bool operator==(const BoostedModel& o) const {
    return params == o.params && layout == o.layout && priors == o.priors && trees == o.trees;
  }
};

struct GbdtError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Three-class softmax boosting with per-class least-squares trees. Sample
// order does not matter: inputs are canonically reordered before fitting.
BoostedModel train_gbdt(const std::vector<std::vector<double>>& features,
                        const std::vector<int>& labels, const FeatureLayout& layout,
                        const GbdtParams& params = {});

struct GbdtPrediction {
  int chosen = 0;
  std::array<double, 3> probabilities{};
};

GbdtPrediction predict_gbdt(const BoostedModel& model, std::span<const double> x);

// Binary model file, magic "GBDT1", little-endian, platform independent.
void save_model(const BoostedModel& model, const std::string& path);
BoostedModel load_model(const std::string& path);

}  // namespace dmrc
