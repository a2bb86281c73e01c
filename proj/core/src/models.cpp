#include "spamlens/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "models_internal.hpp"
#include "spamlens/util.hpp"

namespace spamlens::models {

using internal::HpReader;

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::gaussian_nb: return "gaussian_nb";
    case Algorithm::glm_logistic: return "glm_logistic";
    case Algorithm::decision_tree: return "decision_tree";
    case Algorithm::random_forest: return "random_forest";
    case Algorithm::gradient_boosted_trees: return "gradient_boosted_trees";
    case Algorithm::mlp: return "mlp";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(const std::string& s) {
  for (const Algorithm a : all_algorithms())
    if (s == to_string(a)) return a;
  if (s == "nb") return Algorithm::gaussian_nb;
  if (s == "glm") return Algorithm::glm_logistic;
  if (s == "dt") return Algorithm::decision_tree;
  if (s == "rf") return Algorithm::random_forest;
  if (s == "gbt") return Algorithm::gradient_boosted_trees;
  return std::nullopt;
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> algos = {
      Algorithm::gaussian_nb,    Algorithm::glm_logistic,
      Algorithm::decision_tree,  Algorithm::random_forest,
      Algorithm::gradient_boosted_trees, Algorithm::mlp,
  };
  return algos;
}

const std::map<std::string, std::string>& default_hyperparameters(Algorithm a) {
  // One defaults table for the whole model zoo; every value is
  // overridable through ModelSpec::hyperparameters (CLI --hp key=value).
  static const std::map<Algorithm, std::map<std::string, std::string>> table = {
      {Algorithm::gaussian_nb,
       {{"var_smoothing", "1e-9"}, {"priors", "empirical"}}},
      {Algorithm::glm_logistic,
       {{"family", "binomial"},
        {"fit_intercept", "true"},
        {"solver", "irlsm"},
        {"max_iterations", "100"},
        {"tolerance", "1e-6"}}},
      {Algorithm::decision_tree,
       {{"criterion", "gain_ratio"},
        {"max_depth", "10"},
        {"min_samples_leaf", "5"},
        {"min_samples_split", "2"},
        {"apply_pruning", "true"},
        {"confidence", "0.1"},
        {"minimal_gain", "0.05"}}},
      {Algorithm::random_forest,
       {{"n_estimators", "100"},
        {"max_depth", "20"},
        {"min_samples_leaf", "5"},
        {"min_samples_split", "2"},
        {"max_features", "sqrt"},
        {"criterion", "gini"},
        {"bootstrap", "true"}}},
      {Algorithm::gradient_boosted_trees,
       {{"n_estimators", "100"},
        {"learning_rate", "0.1"},
        {"max_depth", "10"},
        {"min_samples_leaf", "5"},
        {"min_samples_split", "2"}}},
      {Algorithm::mlp,
       {{"hidden_units", "100"},
        {"activation", "rectifier"},
        {"loss", "cross_entropy"},
        {"epochs", "10"},
        {"learning_rate", "0.003772"},
        {"adaptive_rate", "0.2"},
        {"l1", "1e-5"},
        {"l2", "0.0"},
        {"batch_size", "32"}}},
  };
  return table.at(a);
}

void validate_spec(const ModelSpec& spec) {
  const auto& declared = default_hyperparameters(spec.algorithm);
  for (const auto& [key, value] : spec.hyperparameters) {
    if (!declared.count(key))
      throw DataError("unknown hyperparameter '" + key + "' for algorithm " +
                      to_string(spec.algorithm));
  }
}

std::string spec_to_string(const ModelSpec& spec) {
  std::ostringstream out;
  out << to_string(spec.algorithm);
  const auto& defaults = default_hyperparameters(spec.algorithm);
  for (const auto& [key, def] : defaults) {
    const auto it = spec.hyperparameters.find(key);
    out << ' ' << key << '=' << (it == spec.hyperparameters.end() ? def : it->second);
  }
  out << " seed=" << spec.seed;
  return out.str();
}

LabeledData to_labeled_data(const features::FeatureMatrix& matrix) {
  LabeledData data;
  data.feature_names.assign(features::feature_names().begin(),
                            features::feature_names().end());
  for (const auto& row : matrix.rows) {
    if (!row.label) continue;
    data.x.emplace_back(row.fv.x.begin(), row.fv.x.end());
    data.y.push_back(*row.label);
  }
  if (data.x.empty()) throw DataError("feature matrix has no labeled rows");
  return data;
}

namespace internal {

std::string HpReader::str(const std::string& key) const {
  const auto it = values_->find(key);
  if (it != values_->end()) return it->second;
  const auto dt = defaults_->find(key);
  if (dt == defaults_->end())
    throw std::logic_error("undeclared hyperparameter lookup: " + key);
  return dt->second;
}

int HpReader::integer(const std::string& key) const {
  const std::string v = str(key);
  try {
    std::size_t pos = 0;
    const int out = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw DataError("hyperparameter '" + key + "': not an integer: '" + v + "'");
  }
}

double HpReader::real(const std::string& key) const {
  const std::string v = str(key);
  try {
    std::size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw DataError("hyperparameter '" + key + "': not a number: '" + v + "'");
  }
}

bool HpReader::boolean(const std::string& key) const {
  const std::string v = to_lower_ascii(str(key));
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw DataError("hyperparameter '" + key + "': not a boolean: '" + v + "'");
}

double sigmoid(double z) {
  if (z >= 0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

GaussianNbParams train_gaussian_nb(const TrainContext& ctx, const HpReader& hp) {
  const std::size_t d = ctx.x.front().size();
  const double var_smoothing = hp.real("var_smoothing");
  const std::string priors = hp.str("priors");
  if (priors != "empirical" && priors != "uniform")
    throw DataError("gaussian_nb: priors must be 'empirical' or 'uniform'");

  GaussianNbParams p;
  std::size_t count[2] = {0, 0};
  for (int c = 0; c < 2; ++c) {
    p.mean[c].assign(d, 0.0);
    p.var[c].assign(d, 0.0);
  }
  for (std::size_t i = 0; i < ctx.x.size(); ++i) {
    ++count[ctx.y[i]];
    for (std::size_t j = 0; j < d; ++j) p.mean[ctx.y[i]][j] += ctx.x[i][j];
  }
  for (int c = 0; c < 2; ++c)
    for (std::size_t j = 0; j < d; ++j) p.mean[c][j] /= static_cast<double>(count[c]);
  for (std::size_t i = 0; i < ctx.x.size(); ++i) {
    const int c = ctx.y[i];
    for (std::size_t j = 0; j < d; ++j) {
      const double dlt = ctx.x[i][j] - p.mean[c][j];
      p.var[c][j] += dlt * dlt;
    }
  }
  // Smoothing slice: var_smoothing times the largest overall feature variance.
  double max_var = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double m = 0.0;
    for (const auto& row : ctx.x) m += row[j];
    m /= static_cast<double>(ctx.x.size());
    double v = 0.0;
    for (const auto& row : ctx.x) v += (row[j] - m) * (row[j] - m);
    max_var = std::max(max_var, v / static_cast<double>(ctx.x.size()));
  }
  const double epsilon = var_smoothing * std::max(max_var, 1.0);
  for (int c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < d; ++j)
      p.var[c][j] = p.var[c][j] / static_cast<double>(count[c]) + epsilon;
    p.log_prior[c] =
        priors == "uniform"
            ? std::log(0.5)
            : std::log(static_cast<double>(count[c]) /
                       static_cast<double>(ctx.x.size()));
  }
  return p;
}

}  // namespace internal

namespace {

std::vector<std::size_t> canonical_order(const LabeledData& data) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (data.x[a] != data.x[b]) return data.x[a] < data.x[b];
    return data.y[a] < data.y[b];
  });
  return order;
}

}  // namespace

TrainedModel train(const ModelSpec& spec, const LabeledData& data, int threads) {
  validate_spec(spec);
  if (data.size() == 0) throw DataError("train: empty training data");
  if (data.y.size() != data.x.size())
    throw DataError("train: label/row count mismatch");
  const std::size_t d = data.width();
  std::size_t class_count[2] = {0, 0};
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.x[i].size() != d) throw DataError("train: ragged feature rows");
    if (data.y[i] != 0 && data.y[i] != 1)
      throw DataError("train: labels must be 0 or 1");
    ++class_count[data.y[i]];
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::isfinite(data.x[i][j]))
        throw DataError("train: non-finite feature value at row " +
                        std::to_string(i) + ", column " + data.feature_names[j]);
    }
  }
  if (class_count[0] == 0 || class_count[1] == 0)
    throw DataError("train: training data contains a single class");

  TrainedModel m;
  m.spec_ = spec;
  m.feature_names_ = data.feature_names;

  // Content-ordered copy: training is invariant to input row order.
  const auto order = canonical_order(data);
  std::vector<std::vector<double>> x(data.size());
  std::vector<int> y(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    x[i] = data.x[order[i]];
    y[i] = data.y[order[i]];
  }

  // Standardization captured at fit, applied identically at predict.
  m.mean_.assign(d, 0.0);
  m.stddev_.assign(d, 0.0);
  for (const auto& row : x)
    for (std::size_t j = 0; j < d; ++j) m.mean_[j] += row[j];
  for (std::size_t j = 0; j < d; ++j) m.mean_[j] /= static_cast<double>(x.size());
  for (const auto& row : x)
    for (std::size_t j = 0; j < d; ++j) {
      const double dlt = row[j] - m.mean_[j];
      m.stddev_[j] += dlt * dlt;
    }
  for (std::size_t j = 0; j < d; ++j) {
    m.stddev_[j] = std::sqrt(m.stddev_[j] / static_cast<double>(x.size()));
    // Constant columns can pick up sub-ulp variance from the mean
    // subtraction; clamp them to exactly zero.
    if (m.stddev_[j] < 1e-12 * std::max(1.0, std::abs(m.mean_[j])))
      m.stddev_[j] = 0.0;
  }
  for (auto& row : x)
    for (std::size_t j = 0; j < d; ++j)
      row[j] = m.stddev_[j] > 0.0 ? (row[j] - m.mean_[j]) / m.stddev_[j] : 0.0;

  const internal::TrainContext ctx{x, y, spec.seed, threads};
  const HpReader hp(spec);
  switch (spec.algorithm) {
    case Algorithm::gaussian_nb:
      m.gnb_ = internal::train_gaussian_nb(ctx, hp);
      break;
    case Algorithm::glm_logistic:
      m.glm_ = internal::train_glm(ctx, hp);
      break;
    case Algorithm::decision_tree:
      m.forest_ = internal::train_decision_tree(ctx, hp);
      break;
    case Algorithm::random_forest:
      m.forest_ = internal::train_random_forest(ctx, hp);
      break;
    case Algorithm::gradient_boosted_trees:
      m.gbt_ = internal::train_gbt(ctx, hp, m.training_curve_);
      break;
    case Algorithm::mlp:
      m.mlp_ = internal::train_mlp(ctx, hp, m.training_curve_);
      break;
  }
  return m;
}

TrainedModel train(const ModelSpec& spec, const features::FeatureMatrix& matrix,
                   int threads) {
  return train(spec, to_labeled_data(matrix), threads);
}

std::vector<double> TrainedModel::standardize(std::span<const double> row) const {
  if (row.size() != feature_names_.size())
    throw DataError("predict: expected " + std::to_string(feature_names_.size()) +
                    " features, got " + std::to_string(row.size()));
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (!std::isfinite(row[j]))
      throw DataError("predict: non-finite value in column " + feature_names_[j]);
    out[j] = stddev_[j] > 0.0 ? (row[j] - mean_[j]) / stddev_[j] : 0.0;
  }
  return out;
}

const TreeNode& Tree::leaf_for(std::span<const double> row) const {
  int idx = 0;
  for (;;) {
    const TreeNode& node = nodes[idx];
    if (node.feature < 0) return node;
    idx = row[node.feature] <= node.threshold ? node.left : node.right;
  }
}

double TrainedModel::predict_proba(std::span<const double> raw) const {
  const std::vector<double> row = standardize(raw);
  switch (spec_.algorithm) {
    case Algorithm::gaussian_nb: {
      const auto& p = *gnb_;
      double joint[2];
      for (int c = 0; c < 2; ++c) {
        double s = p.log_prior[c];
        for (std::size_t j = 0; j < row.size(); ++j) {
          const double dlt = row[j] - p.mean[c][j];
          s += -0.5 * std::log(2.0 * 3.14159265358979323846 * p.var[c][j]) -
               dlt * dlt / (2.0 * p.var[c][j]);
        }
        joint[c] = s;
      }
      const double m = std::max(joint[0], joint[1]);
      const double e0 = std::exp(joint[0] - m), e1 = std::exp(joint[1] - m);
      return e1 / (e0 + e1);
    }
    case Algorithm::glm_logistic: {
      double z = glm_->intercept;
      for (std::size_t j = 0; j < row.size(); ++j) z += glm_->weights[j] * row[j];
      return internal::sigmoid(z);
    }
    case Algorithm::decision_tree:
      return forest_->trees.front().leaf_for(row).value;
    case Algorithm::random_forest: {
      std::size_t votes = 0;
      for (const auto& tree : forest_->trees)
        votes += static_cast<std::size_t>(tree.leaf_for(row).majority);
      return static_cast<double>(votes) /
             static_cast<double>(forest_->trees.size());
    }
    case Algorithm::gradient_boosted_trees: {
      double f = gbt_->f0;
      for (const auto& tree : gbt_->trees)
        f += gbt_->learning_rate * tree.leaf_for(row).value;
      return internal::sigmoid(f);
    }
    case Algorithm::mlp: {
      const auto& p = *mlp_;
      const std::size_t d = row.size();
      double z2 = p.b2;
      for (int h = 0; h < p.hidden; ++h) {
        double z = p.b1[h];
        for (std::size_t j = 0; j < d; ++j) z += p.w1[h * d + j] * row[j];
        const double a = p.activation == MlpActivation::rectifier
                             ? std::max(0.0, z)
                             : std::tanh(z);
        z2 += p.w2[h] * a;
      }
      return internal::sigmoid(z2);
    }
  }
  throw std::logic_error("predict_proba: unhandled algorithm");
}

double TrainedModel::predict_proba(const features::FeatureVector& fv) const {
  return predict_proba(std::span<const double>(fv.x.data(), fv.x.size()));
}

std::vector<double> TrainedModel::predict_proba(const LabeledData& data) const {
  std::vector<double> out;
  out.reserve(data.size());
  for (const auto& row : data.x) out.push_back(predict_proba(row));
  return out;
}

std::vector<std::pair<std::string, double>> TrainedModel::feature_importance()
    const {
  const std::size_t d = feature_names_.size();
  std::vector<double> w(d, 0.0);
  switch (spec_.algorithm) {
    case Algorithm::gaussian_nb: {
      const auto& p = *gnb_;
      for (std::size_t j = 0; j < d; ++j) {
        const double pooled = std::sqrt(0.5 * (p.var[0][j] + p.var[1][j]));
        if (stddev_[j] > 0.0 && pooled > 0.0)
          w[j] = std::abs(p.mean[1][j] - p.mean[0][j]) / pooled;
      }
      break;
    }
    case Algorithm::glm_logistic:
      for (std::size_t j = 0; j < d; ++j) w[j] = std::abs(glm_->weights[j]);
      break;
    case Algorithm::mlp: {
      const auto& p = *mlp_;
      for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (int h = 0; h < p.hidden; ++h) s += std::abs(p.w1[h * d + j]);
        w[j] = s;
      }
      break;
    }
    case Algorithm::decision_tree:
    case Algorithm::random_forest: {
      for (const auto& tree : forest_->trees)
        for (std::size_t j = 0; j < d; ++j) w[j] += tree.importance[j];
      break;
    }
    case Algorithm::gradient_boosted_trees: {
      for (const auto& tree : gbt_->trees)
        for (std::size_t j = 0; j < d; ++j) w[j] += tree.importance[j];
      break;
    }
  }
  const bool tree_family = spec_.algorithm == Algorithm::decision_tree ||
                           spec_.algorithm == Algorithm::random_forest ||
                           spec_.algorithm == Algorithm::gradient_boosted_trees;
  if (tree_family) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (total > 0.0)
      for (double& v : w) v /= total;
  }
  std::vector<std::pair<std::string, double>> out;
  out.reserve(d);
  for (std::size_t j = 0; j < d; ++j) out.emplace_back(feature_names_[j], w[j]);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace spamlens::models
