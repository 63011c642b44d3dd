#include "adme/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "adme/error.hpp"
#include "adme/rng.hpp"

namespace adme {

namespace {

double gini(const std::vector<long>& counts, long total) {
    if (total == 0) return 0.0;
    double sum_sq = 0.0;
    for (long c : counts) {
        double p = static_cast<double>(c) / static_cast<double>(total);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

class TreeBuilder {
  public:
    TreeBuilder(const Matrix& X, const std::vector<int>& labels, int num_classes,
                const ForestHyper& hyper, std::uint64_t tree_seed)
        : X_(X), labels_(labels), num_classes_(num_classes), hyper_(hyper), rng_(tree_seed) {}

    DecisionTree build() {
        std::vector<Eigen::Index> samples;
        const Eigen::Index n = X_.rows();
        samples.reserve(static_cast<std::size_t>(n));
        if (hyper_.bootstrap) {
            for (Eigen::Index i = 0; i < n; ++i)
                samples.push_back(static_cast<Eigen::Index>(
                    rng_.uniform_int(static_cast<std::uint64_t>(n))));
        } else {
            samples.resize(static_cast<std::size_t>(n));
            std::iota(samples.begin(), samples.end(), Eigen::Index{0});
        }
        DecisionTree tree;
        grow(tree, samples, 0);
        return tree;
    }

  private:
    int grow(DecisionTree& tree, const std::vector<Eigen::Index>& samples, int depth) {
        std::vector<long> counts(static_cast<std::size_t>(num_classes_), 0);
        for (Eigen::Index i : samples) ++counts[static_cast<std::size_t>(labels_[static_cast<std::size_t>(i)])];
        const long total = static_cast<long>(samples.size());

        int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.back().class_counts = counts;

        bool pure = std::count_if(counts.begin(), counts.end(), [](long c) { return c > 0; }) <= 1;
        bool depth_capped = hyper_.max_depth > 0 && depth >= hyper_.max_depth;
        if (pure || depth_capped || total < 2 * hyper_.min_leaf) return node_id;

        SplitChoice split = choose_split(samples, counts, total);
        if (split.feature < 0) return node_id;

        std::vector<Eigen::Index> left, right;
        for (Eigen::Index i : samples) {
            if (X_(i, split.feature) <= split.threshold)
                left.push_back(i);
            else
                right.push_back(i);
        }
        int left_id = grow(tree, left, depth + 1);
        int right_id = grow(tree, right, depth + 1);
        tree.nodes[static_cast<std::size_t>(node_id)].feature = split.feature;
        tree.nodes[static_cast<std::size_t>(node_id)].threshold = split.threshold;
        tree.nodes[static_cast<std::size_t>(node_id)].left = left_id;
        tree.nodes[static_cast<std::size_t>(node_id)].right = right_id;
        return node_id;
    }

    SplitChoice choose_split(const std::vector<Eigen::Index>& samples,
                             const std::vector<long>& counts, long total) {
        const int feature_count = static_cast<int>(X_.cols());
        std::vector<int> order(static_cast<std::size_t>(feature_count));
        std::iota(order.begin(), order.end(), 0);
        shuffle(order, rng_);
        const int mtry = std::max(1, static_cast<int>(std::ceil(std::sqrt(
                                          static_cast<double>(feature_count)))));
        const double parent_gini = gini(counts, total);

        SplitChoice best;
        std::vector<std::pair<double, int>> column(samples.size());
        for (int examined = 0; examined < feature_count; ++examined) {
            // Keep searching past mtry candidates until a valid split exists.
            if (examined >= mtry && best.feature >= 0) break;
            int feature = order[static_cast<std::size_t>(examined)];
            for (std::size_t k = 0; k < samples.size(); ++k) {
                Eigen::Index i = samples[k];
                column[k] = {X_(i, feature), labels_[static_cast<std::size_t>(i)]};
            }
            std::sort(column.begin(), column.end());

            std::vector<long> left_counts(static_cast<std::size_t>(num_classes_), 0);
            std::vector<long> right_counts = counts;
            long n_left = 0;
            for (std::size_t k = 0; k + 1 < column.size(); ++k) {
                ++left_counts[static_cast<std::size_t>(column[k].second)];
                --right_counts[static_cast<std::size_t>(column[k].second)];
                ++n_left;
                if (column[k].first == column[k + 1].first) continue;
                long n_right = total - n_left;
                if (n_left < hyper_.min_leaf || n_right < hyper_.min_leaf) continue;
                double weighted = (static_cast<double>(n_left) * gini(left_counts, n_left) +
                                   static_cast<double>(n_right) * gini(right_counts, n_right)) /
                                  static_cast<double>(total);
                double gain = parent_gini - weighted;
                if (gain > best.gain + 1e-15) {
                    best.feature = feature;
                    best.threshold = 0.5 * (column[k].first + column[k + 1].first);
                    best.gain = gain;
                }
            }
        }
        return best;
    }

    const Matrix& X_;
    const std::vector<int>& labels_;
    int num_classes_;
    const ForestHyper& hyper_;
    SplitMix64 rng_;
};

int argmax_lowest(const std::vector<long>& counts) {
    int best = 0;
    for (int c = 1; c < static_cast<int>(counts.size()); ++c) {
        if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(best)]) best = c;
    }
    return best;
}

}  // namespace

ForestModel train_random_forest(const Matrix& X, const std::vector<int>& labels, int num_classes,
                                const ForestHyper& hyper) {
    if (X.rows() == 0) throw TrainError("train_random_forest: empty input");
    if (static_cast<Eigen::Index>(labels.size()) != X.rows())
        throw DimensionError("labels/features row count mismatch");
    if (num_classes < 2) throw TrainError("train_random_forest: need at least two classes");
    if (hyper.tree_count < 1) throw ConfigError("tree_count must be >= 1");

    ForestModel model;
    model.num_classes = num_classes;
    model.feature_len = X.cols();
    model.trees.resize(static_cast<std::size_t>(hyper.tree_count));

#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < hyper.tree_count; ++t) {
        TreeBuilder builder(X, labels, num_classes, hyper,
                            derive_seed(hyper.seed, static_cast<std::uint64_t>(t)));
        model.trees[static_cast<std::size_t>(t)] = builder.build();
    }
    return model;
}

int predict_class(const DecisionTree& tree, const Vector& x) {
    int node = 0;
    for (;;) {
        const TreeNode& n = tree.nodes[static_cast<std::size_t>(node)];
        if (n.feature < 0) return argmax_lowest(n.class_counts);
        node = x(n.feature) <= n.threshold ? n.left : n.right;
    }
}

int predict_class(const ForestModel& model, const Vector& x) {
    if (x.size() != model.feature_len)
        throw DimensionError("feature length " + std::to_string(x.size()) +
                             " does not match model feature length " +
                             std::to_string(model.feature_len));
    std::vector<long> votes(static_cast<std::size_t>(model.num_classes), 0);
    for (const DecisionTree& tree : model.trees)
        ++votes[static_cast<std::size_t>(predict_class(tree, x))];
    return argmax_lowest(votes);
}

void save_forest(const ForestModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write forest model: " + path);
    out << "forest 1\n"
        << model.num_classes << ' ' << model.feature_len << ' ' << model.trees.size() << '\n';
    out.precision(17);
    for (const DecisionTree& tree : model.trees) {
        out << tree.nodes.size() << '\n';
        for (const TreeNode& n : tree.nodes) {
            out << n.feature << ' ' << n.threshold << ' ' << n.left << ' ' << n.right;
            for (long c : n.class_counts) out << ' ' << c;
            out << '\n';
        }
    }
}

ForestModel load_forest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open forest model: " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "forest" || version != 1)
        throw ParseError("not a forest model file (or unsupported version): " + path);
    ForestModel model;
    std::size_t tree_count = 0;
    in >> model.num_classes >> model.feature_len >> tree_count;
    model.trees.resize(tree_count);
    for (DecisionTree& tree : model.trees) {
        std::size_t node_count = 0;
        in >> node_count;
        tree.nodes.resize(node_count);
        for (TreeNode& n : tree.nodes) {
            in >> n.feature >> n.threshold >> n.left >> n.right;
            n.class_counts.resize(static_cast<std::size_t>(model.num_classes));
            for (long& c : n.class_counts) in >> c;
        }
    }
    if (!in) throw ParseError("truncated forest model: " + path);
    return model;
}

}  // namespace adme
