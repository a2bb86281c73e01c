#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spamlens/features.hpp"

namespace spamlens::models {

enum class Algorithm {
  gaussian_nb,
  glm_logistic,
  decision_tree,
  random_forest,
  gradient_boosted_trees,
  mlp,
};

std::string to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(const std::string& s);
const std::vector<Algorithm>& all_algorithms();

/// Hyperparameters travel as strings (CLI --hp key=value); each algorithm
/// declares its accepted keys and defaults in one table (see
/// default_hyperparameters / hyperparameter_keys).
struct ModelSpec {
  Algorithm algorithm = Algorithm::gaussian_nb;
  std::map<std::string, std::string> hyperparameters;
  std::uint64_t seed = 0;
};

const std::map<std::string, std::string>& default_hyperparameters(Algorithm a);

/// Throws DataError on keys outside the algorithm's declared set.
void validate_spec(const ModelSpec& spec);

/// Canonical single-line rendering (sorted keys); used for tie-breaking
/// and manifests.
std::string spec_to_string(const ModelSpec& spec);

/// Generic labeled numeric table; FeatureMatrix adapts onto it so the
/// classifiers stay usable on arbitrary-width data.
struct LabeledData {
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> x;  // n rows of width feature_names.size()
  std::vector<int> y;                  // 0/1, aligned with x

  std::size_t size() const { return x.size(); }
  std::size_t width() const { return feature_names.size(); }
};

/// Labeled rows only; throws when none are labeled.
LabeledData to_labeled_data(const features::FeatureMatrix& matrix);

// --- learned parameter blocks -------------------------------------------

struct TreeNode {
  int feature = -1;     // -1 marks a leaf
  double threshold = 0.0;  // go left when x[feature] <= threshold
  int left = -1;
  int right = -1;
  double value = 0.0;   // classification: P(spammer); regression: leaf value
  int majority = 0;     // classification leaves: 1 iff count1 >= count0
  std::int64_t n_samples = 0;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::vector<double> importance;  // raw impurity decrease per feature

  const TreeNode& leaf_for(std::span<const double> row) const;
};

struct GaussianNbParams {
  double log_prior[2] = {0.0, 0.0};
  std::vector<double> mean[2];
  std::vector<double> var[2];
};

struct GlmParams {
  std::vector<double> weights;
  double intercept = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
};

struct ForestParams {
  std::vector<Tree> trees;
};

struct GbtParams {
  double f0 = 0.0;
  double learning_rate = 0.1;
  std::vector<Tree> trees;
};

enum class MlpActivation { rectifier, tanh };
enum class MlpLoss { cross_entropy, quadratic };

struct MlpParams {
  int hidden = 0;
  MlpActivation activation = MlpActivation::rectifier;
  MlpLoss loss = MlpLoss::cross_entropy;
  std::vector<double> w1;  // hidden x input, row-major
  std::vector<double> b1;
  std::vector<double> w2;  // hidden
  double b2 = 0.0;
};

class TrainedModel {
 public:
  const ModelSpec& spec() const { return spec_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<double>& standardization_mean() const { return mean_; }
  const std::vector<double>& standardization_std() const { return stddev_; }

  /// Probability of the spammer class. Throws on width mismatch or
  /// non-finite input.
  double predict_proba(std::span<const double> row) const;
  double predict_proba(const features::FeatureVector& fv) const;
  std::vector<double> predict_proba(const LabeledData& data) const;

  /// (feature, weight >= 0), sorted descending. Tree-family weights are
  /// normalized to sum 1.
  std::vector<std::pair<std::string, double>> feature_importance() const;

  /// Per-epoch loss (mlp), per-stage deviance (gbt, with the pre-boost
  /// deviance first); empty otherwise.
  const std::vector<double>& training_curve() const { return training_curve_; }

  std::string to_json() const;
  static TrainedModel from_json(const std::string& json_text);
  void save(const std::string& path) const;
  static TrainedModel load(const std::string& path);

  // Parameter access for tests and serialization.
  const GaussianNbParams* gaussian_nb() const { return gnb_ ? &*gnb_ : nullptr; }
  const GlmParams* glm() const { return glm_ ? &*glm_ : nullptr; }
  const ForestParams* forest() const { return forest_ ? &*forest_ : nullptr; }
  const GbtParams* gbt() const { return gbt_ ? &*gbt_ : nullptr; }
  const MlpParams* mlp() const { return mlp_ ? &*mlp_ : nullptr; }

 private:
  friend TrainedModel train(const ModelSpec&, const LabeledData&, int);
  friend TrainedModel model_from_parts(ModelSpec, std::vector<std::string>,
                                       std::vector<double>, std::vector<double>,
                                       std::vector<double>);

  std::vector<double> standardize(std::span<const double> row) const;

  ModelSpec spec_;
  std::vector<std::string> feature_names_;
  std::vector<double> mean_;
  std::vector<double> stddev_;
  std::vector<double> training_curve_;

  std::optional<GaussianNbParams> gnb_;
  std::optional<GlmParams> glm_;
  std::optional<ForestParams> forest_;
  std::optional<GbtParams> gbt_;
  std::optional<MlpParams> mlp_;

  friend struct ModelIo;
};

/// Trains per the spec's algorithm. Rows are canonicalized internally
/// (sorted by content) so training is invariant to input row order.
TrainedModel train(const ModelSpec& spec, const LabeledData& data,
                   int threads = 1);
TrainedModel train(const ModelSpec& spec, const features::FeatureMatrix& matrix,
                   int threads = 1);

struct FoldMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.0;  // NaN when the fold is single-class
};

struct CvResult {
  int k = 0;
  std::vector<FoldMetrics> folds;
  FoldMetrics mean;
  FoldMetrics stddev;  // population std over folds (AUC over finite folds)
};

/// Stratified folds preserve the class ratio within one member per class.
/// Throws when stratified and a class has fewer than k members.
CvResult cross_validate(const ModelSpec& spec, const LabeledData& data, int k,
                        bool stratified, std::uint64_t seed, int threads = 1);

/// Deterministic fold assignment: fold id per row of `data`.
std::vector<int> make_folds(const LabeledData& data, int k, bool stratified,
                            std::uint64_t seed);

struct SearchSpace {
  std::map<std::string, std::vector<std::string>> candidates;
};

SearchSpace default_search_space(Algorithm a);

struct SearchTrial {
  ModelSpec spec;
  bool failed = false;
  std::string error;
  double mean_f1 = 0.0;
  double mean_auc = 0.0;
};

struct SearchOutcome {
  ModelSpec best;
  CvResult best_cv;
  std::vector<SearchTrial> trials;
};

/// Samples `budget` specs uniformly with replacement from the product
/// space; ranks by mean F1, then mean AUC, then lexicographic spec string.
/// Failing specs score -inf and stay in the trial log.
SearchOutcome random_search(Algorithm algorithm, const SearchSpace& space,
                            const LabeledData& data, int budget, int k,
                            std::uint64_t seed, int threads = 1);

}  // namespace spamlens::models
