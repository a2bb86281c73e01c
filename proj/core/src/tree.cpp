#include <algorithm>
#include <cmath>
#include <numeric>

#include "models_internal.hpp"

namespace spamlens::models::internal {
namespace {

struct BuildNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::int64_t n = 0;
  std::int64_t count1 = 0;       // classification
  double leaf_value = 0.0;       // regression
  double importance_gain = 0.0;  // n/n_root-weighted impurity decrease
};

double entropy2(std::int64_t c1, std::int64_t n) {
  if (n == 0) return 0.0;
  double h = 0.0;
  for (const std::int64_t c : {c1, n - c1}) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(n);
    h -= p * std::log2(p);
  }
  return h;
}

double gini2(std::int64_t c1, std::int64_t n) {
  if (n == 0) return 0.0;
  const double p = static_cast<double>(c1) / static_cast<double>(n);
  return 2.0 * p * (1.0 - p);
}

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double gain = -1.0;       // criterion units (ratio for gain_ratio)
  double raw_decrease = 0.0;  // impurity decrease for importance
};

struct ClassificationBuilder {
  const std::vector<std::vector<double>>& x;
  const std::vector<int>& y;
  const TreeConfig& config;
  Rng* rng;
  std::vector<BuildNode> nodes;
  double n_root = 0.0;

  double impurity(std::int64_t c1, std::int64_t n) const {
    return config.criterion == SplitCriterion::gini ? gini2(c1, n)
                                                    : entropy2(c1, n);
  }

  std::vector<int> feature_subset() {
    const int d = static_cast<int>(x.front().size());
    std::vector<int> all(d);
    std::iota(all.begin(), all.end(), 0);
    if (config.max_features < 0 || config.max_features >= d || rng == nullptr)
      return all;
    // Partial Fisher-Yates draw of max_features distinct columns.
    for (int i = 0; i < config.max_features; ++i) {
      const auto j = static_cast<std::size_t>(rng->uniform_int(i, d - 1));
      std::swap(all[i], all[j]);
    }
    all.resize(config.max_features);
    std::sort(all.begin(), all.end());
    return all;
  }

  SplitChoice best_split(std::vector<std::size_t>& samples) {
    const std::int64_t n = static_cast<std::int64_t>(samples.size());
    std::int64_t total1 = 0;
    for (const auto i : samples) total1 += y[i];
    const double parent_imp = impurity(total1, n);

    SplitChoice best;
    for (const int j : feature_subset()) {
      std::sort(samples.begin(), samples.end(), [&](std::size_t a, std::size_t b) {
        if (x[a][j] != x[b][j]) return x[a][j] < x[b][j];
        return a < b;
      });
      std::int64_t left1 = 0;
      for (std::int64_t i = 0; i + 1 < n; ++i) {
        left1 += y[samples[i]];
        const std::int64_t nl = i + 1, nr = n - nl;
        if (x[samples[i]][j] == x[samples[i + 1]][j]) continue;
        if (nl < config.min_samples_leaf || nr < config.min_samples_leaf) continue;
        const double wl = static_cast<double>(nl) / static_cast<double>(n);
        const double wr = 1.0 - wl;
        const double decrease = parent_imp - wl * impurity(left1, nl) -
                                wr * impurity(total1 - left1, nr);
        double gain = decrease;
        if (config.criterion == SplitCriterion::gain_ratio) {
          const double split_info = -(wl * std::log2(wl) + wr * std::log2(wr));
          gain = split_info > 1e-12 ? decrease / split_info : 0.0;
        }
        if (gain > best.gain + 1e-15) {
          best.feature = j;
          best.threshold = 0.5 * (x[samples[i]][j] + x[samples[i + 1]][j]);
          best.gain = gain;
          best.raw_decrease = decrease;
        }
      }
    }
    return best;
  }

  int build(std::vector<std::size_t> samples, int depth) {
    const std::int64_t n = static_cast<std::int64_t>(samples.size());
    std::int64_t c1 = 0;
    for (const auto i : samples) c1 += y[i];

    const int idx = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[idx].n = n;
    nodes[idx].count1 = c1;

    const bool pure = c1 == 0 || c1 == n;
    if (pure || depth >= config.max_depth || n < config.min_samples_split ||
        n < 2 * config.min_samples_leaf)
      return idx;

    const SplitChoice split = best_split(samples);
    if (split.feature < 0) return idx;
    if (config.prune && split.gain < config.minimal_gain) return idx;

    std::vector<std::size_t> left, right;
    left.reserve(samples.size());
    right.reserve(samples.size());
    for (const auto i : samples) {
      (x[i][split.feature] <= split.threshold ? left : right).push_back(i);
    }
    samples.clear();
    samples.shrink_to_fit();

    const int li = build(std::move(left), depth + 1);
    const int ri = build(std::move(right), depth + 1);
    nodes[idx].feature = split.feature;
    nodes[idx].threshold = split.threshold;
    nodes[idx].left = li;
    nodes[idx].right = ri;
    nodes[idx].importance_gain =
        static_cast<double>(n) / n_root * split.raw_decrease;
    return idx;
  }

  // C4.5-style pessimistic error pruning: collapse a subtree when the
  // upper-bound error estimate of the node as a leaf does not exceed the
  // subtree's estimate (+0.1 slack), with z = Phi^-1(1 - confidence).
  double pessimistic_errors(int idx, double z) {
    BuildNode& node = nodes[idx];
    const double n = static_cast<double>(node.n);
    const std::int64_t majority =
        node.count1 * 2 >= node.n ? node.count1 : node.n - node.count1;
    const double f = (n - static_cast<double>(majority)) / n;
    const double as_leaf = n * error_upper_bound(f, n, z);
    if (node.feature < 0) return as_leaf;
    const double subtree = pessimistic_errors(node.left, z) +
                           pessimistic_errors(node.right, z);
    if (as_leaf <= subtree + 0.1) {
      node.feature = -1;
      node.left = node.right = -1;
      node.importance_gain = 0.0;
      return as_leaf;
    }
    return subtree;
  }

  static double error_upper_bound(double f, double n, double z) {
    const double z2 = z * z;
    return (f + z2 / (2.0 * n) +
            z * std::sqrt(f / n - f * f / n + z2 / (4.0 * n * n))) /
           (1.0 + z2 / n);
  }
};

// Flattens reachable build nodes into the compact Tree layout.
Tree flatten(const std::vector<BuildNode>& nodes, int d, bool regression) {
  Tree tree;
  tree.importance.assign(d, 0.0);
  std::vector<int> remap(nodes.size(), -1);
  std::vector<int> stack = {0};
  // First pass: assign compact ids in DFS order.
  std::vector<int> order;
  while (!stack.empty()) {
    const int idx = stack.back();
    stack.pop_back();
    remap[idx] = static_cast<int>(order.size());
    order.push_back(idx);
    if (nodes[idx].feature >= 0) {
      stack.push_back(nodes[idx].right);
      stack.push_back(nodes[idx].left);
    }
  }
  tree.nodes.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const BuildNode& src = nodes[order[i]];
    TreeNode& dst = tree.nodes[i];
    dst.n_samples = src.n;
    if (src.feature >= 0) {
      dst.feature = src.feature;
      dst.threshold = src.threshold;
      dst.left = remap[src.left];
      dst.right = remap[src.right];
      tree.importance[src.feature] += src.importance_gain;
    }
    if (regression) {
      dst.value = src.leaf_value;
    } else {
      dst.value = src.n > 0 ? static_cast<double>(src.count1) /
                                  static_cast<double>(src.n)
                            : 0.0;
      dst.majority = src.count1 * 2 >= src.n ? 1 : 0;
    }
  }
  return tree;
}

struct RegressionBuilder {
  const std::vector<std::vector<double>>& x;
  const std::vector<double>& num;
  const std::vector<double>& den;
  const TreeConfig& config;
  std::vector<BuildNode> nodes;
  double n_root = 0.0;

  int build(std::vector<std::size_t> samples, int depth) {
    const std::int64_t n = static_cast<std::int64_t>(samples.size());
    double sum = 0.0, den_sum = 0.0;
    for (const auto i : samples) {
      sum += num[i];
      den_sum += den[i];
    }
    const int idx = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[idx].n = n;
    nodes[idx].leaf_value =
        std::clamp(sum / std::max(den_sum, 1e-12), -10.0, 10.0);

    if (depth >= config.max_depth || n < config.min_samples_split ||
        n < 2 * config.min_samples_leaf)
      return idx;

    // Maximize SSE reduction of `num`: sum_l^2/n_l + sum_r^2/n_r.
    int best_feature = -1;
    double best_threshold = 0.0, best_score = sum * sum / static_cast<double>(n);
    double best_decrease = 0.0;
    const int d = static_cast<int>(x.front().size());
    for (int j = 0; j < d; ++j) {
      std::sort(samples.begin(), samples.end(), [&](std::size_t a, std::size_t b) {
        if (x[a][j] != x[b][j]) return x[a][j] < x[b][j];
        return a < b;
      });
      double left_sum = 0.0;
      for (std::int64_t i = 0; i + 1 < n; ++i) {
        left_sum += num[samples[i]];
        const std::int64_t nl = i + 1, nr = n - nl;
        if (x[samples[i]][j] == x[samples[i + 1]][j]) continue;
        if (nl < config.min_samples_leaf || nr < config.min_samples_leaf) continue;
        const double right_sum = sum - left_sum;
        const double score = left_sum * left_sum / static_cast<double>(nl) +
                             right_sum * right_sum / static_cast<double>(nr);
        if (score > best_score + 1e-12) {
          best_feature = j;
          best_threshold = 0.5 * (x[samples[i]][j] + x[samples[i + 1]][j]);
          best_decrease = score - sum * sum / static_cast<double>(n);
          best_score = score;
        }
      }
    }
    if (best_feature < 0) return idx;

    std::vector<std::size_t> left, right;
    for (const auto i : samples) {
      (x[i][best_feature] <= best_threshold ? left : right).push_back(i);
    }
    samples.clear();
    samples.shrink_to_fit();
    const int li = build(std::move(left), depth + 1);
    const int ri = build(std::move(right), depth + 1);
    nodes[idx].feature = best_feature;
    nodes[idx].threshold = best_threshold;
    nodes[idx].left = li;
    nodes[idx].right = ri;
    nodes[idx].importance_gain = best_decrease / n_root;
    return idx;
  }
};

}  // namespace

SplitCriterion parse_criterion(const std::string& s) {
  if (s == "gini") return SplitCriterion::gini;
  if (s == "information_gain" || s == "entropy")
    return SplitCriterion::information_gain;
  if (s == "gain_ratio") return SplitCriterion::gain_ratio;
  throw DataError("unknown split criterion: '" + s + "'");
}

Tree build_classification_tree(const std::vector<std::vector<double>>& x,
                               const std::vector<int>& y,
                               const std::vector<std::size_t>& samples,
                               const TreeConfig& config, Rng* rng) {
  ClassificationBuilder builder{x, y, config, rng, {}, 0.0};
  builder.n_root = static_cast<double>(samples.size());
  builder.build(samples, 0);
  if (config.prune) {
    const double z = inverse_normal_cdf(1.0 - config.confidence);
    builder.pessimistic_errors(0, z);
  }
  return flatten(builder.nodes, static_cast<int>(x.front().size()), false);
}

Tree build_regression_tree(const std::vector<std::vector<double>>& x,
                           const std::vector<double>& num,
                           const std::vector<double>& den,
                           const std::vector<std::size_t>& samples,
                           const TreeConfig& config) {
  RegressionBuilder builder{x, num, den, config, {}, 0.0};
  builder.n_root = static_cast<double>(samples.size());
  builder.build(samples, 0);
  return flatten(builder.nodes, static_cast<int>(x.front().size()), true);
}

ForestParams train_decision_tree(const TrainContext& ctx, const HpReader& hp) {
  TreeConfig config;
  config.criterion = parse_criterion(hp.str("criterion"));
  config.max_depth = hp.integer("max_depth");
  config.min_samples_leaf = hp.integer("min_samples_leaf");
  config.min_samples_split = hp.integer("min_samples_split");
  config.prune = hp.boolean("apply_pruning");
  config.confidence = hp.real("confidence");
  config.minimal_gain = hp.real("minimal_gain");
  if (config.max_depth < 1) throw DataError("decision_tree: max_depth must be >= 1");
  if (config.min_samples_leaf < 1)
    throw DataError("decision_tree: min_samples_leaf must be >= 1");

  std::vector<std::size_t> all(ctx.x.size());
  std::iota(all.begin(), all.end(), 0);
  ForestParams out;
  out.trees.push_back(build_classification_tree(ctx.x, ctx.y, all, config, nullptr));
  return out;
}

ForestParams train_random_forest(const TrainContext& ctx, const HpReader& hp) {
  TreeConfig config;
  config.criterion = parse_criterion(hp.str("criterion"));
  config.max_depth = hp.integer("max_depth");
  config.min_samples_leaf = hp.integer("min_samples_leaf");
  config.min_samples_split = hp.integer("min_samples_split");
  config.prune = false;
  const int n_estimators = hp.integer("n_estimators");
  const bool bootstrap = hp.boolean("bootstrap");
  if (n_estimators < 1)
    throw DataError("random_forest: n_estimators must be >= 1");
  if (config.max_depth < 1) throw DataError("random_forest: max_depth must be >= 1");

  const int d = static_cast<int>(ctx.x.front().size());
  const std::string mf = hp.str("max_features");
  if (mf == "sqrt" || mf == "auto") {
    config.max_features = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(d))));
  } else if (mf == "log2") {
    config.max_features = std::max(1, static_cast<int>(std::log2(static_cast<double>(d))));
  } else if (mf == "all" || mf == "none") {
    config.max_features = -1;
  } else {
    throw DataError("random_forest: max_features must be sqrt, log2 or all");
  }

  const std::size_t n = ctx.x.size();
  ForestParams out;
  out.trees.resize(n_estimators);
  parallel_for(static_cast<std::size_t>(n_estimators), ctx.threads,
               [&](std::size_t t) {
                 Rng rng(Rng::derive(ctx.seed, t));
                 std::vector<std::size_t> samples;
                 samples.reserve(n);
                 if (bootstrap) {
                   for (std::size_t i = 0; i < n; ++i)
                     samples.push_back(static_cast<std::size_t>(
                         rng.uniform_int(0, static_cast<std::int64_t>(n) - 1)));
                   std::sort(samples.begin(), samples.end());
                 } else {
                   samples.resize(n);
                   std::iota(samples.begin(), samples.end(), 0);
                 }
                 out.trees[t] = build_classification_tree(ctx.x, ctx.y, samples,
                                                          config, &rng);
               });
  return out;
}

GbtParams train_gbt(const TrainContext& ctx, const HpReader& hp,
                    std::vector<double>& curve) {
  TreeConfig config;
  config.criterion = SplitCriterion::gini;  // unused by regression trees
  config.max_depth = hp.integer("max_depth");
  config.min_samples_leaf = hp.integer("min_samples_leaf");
  config.min_samples_split = hp.integer("min_samples_split");
  const int n_estimators = hp.integer("n_estimators");
  if (n_estimators < 1)
    throw DataError("gradient_boosted_trees: n_estimators must be >= 1");

  GbtParams out;
  out.learning_rate = hp.real("learning_rate");
  if (!(out.learning_rate > 0.0))
    throw DataError("gradient_boosted_trees: learning_rate must be positive");

  const std::size_t n = ctx.x.size();
  double mean_y = 0.0;
  for (const int v : ctx.y) mean_y += v;
  mean_y = std::clamp(mean_y / static_cast<double>(n), 1e-6, 1.0 - 1e-6);
  out.f0 = std::log(mean_y / (1.0 - mean_y));

  std::vector<double> f(n, out.f0);
  std::vector<double> grad(n), hess(n);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);

  const auto deviance = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = std::clamp(sigmoid(f[i]), 1e-12, 1.0 - 1e-12);
      s -= ctx.y[i] == 1 ? std::log(p) : std::log(1.0 - p);
    }
    return s / static_cast<double>(n);
  };

  curve.clear();
  curve.push_back(deviance());
  for (int stage = 0; stage < n_estimators; ++stage) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(f[i]);
      grad[i] = static_cast<double>(ctx.y[i]) - p;  // negative gradient
      hess[i] = std::max(p * (1.0 - p), 1e-12);
    }
    Tree tree = build_regression_tree(ctx.x, grad, hess, all, config);
    for (std::size_t i = 0; i < n; ++i)
      f[i] += out.learning_rate * tree.leaf_for(ctx.x[i]).value;
    out.trees.push_back(std::move(tree));
    curve.push_back(deviance());
  }
  return out;
}

}  // namespace spamlens::models::internal
