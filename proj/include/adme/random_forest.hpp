#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adme/types.hpp"

namespace adme {

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<long> class_counts;  // leaf histogram at fit time
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // node 0 is the root
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    int num_classes = 0;
    Eigen::Index feature_len = 0;
};

struct ForestHyper {
    int tree_count = 100;
    int max_depth = 0;  // 0 = unlimited
    int min_leaf = 1;
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

// CART with Gini impurity over a random sqrt-sized feature subset per node.
// Per-tree seeds derive from the master seed via derive_seed(seed, tree).
// If no candidate feature yields a positive-gain split, the remaining
// features are inspected before the node becomes a leaf.
ForestModel train_random_forest(const Matrix& X, const std::vector<int>& labels, int num_classes,
                                const ForestHyper& hyper = {});

// Majority vote over trees; ties break to the lowest class index.
int predict_class(const ForestModel& model, const Vector& x);
int predict_class(const DecisionTree& tree, const Vector& x);

void save_forest(const ForestModel& model, const std::string& path);
ForestModel load_forest(const std::string& path);

}  // namespace adme
