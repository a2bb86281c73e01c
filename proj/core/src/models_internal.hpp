#pragma once

#include <string>

#include "spamlens/models.hpp"
#include "spamlens/util.hpp"

namespace spamlens::models::internal {

/// Typed access to the string hyperparameter map with per-key defaults.
class HpReader {
 public:
  HpReader(const ModelSpec& spec)
      : values_(&spec.hyperparameters),
        defaults_(&default_hyperparameters(spec.algorithm)) {}

  std::string str(const std::string& key) const;
  int integer(const std::string& key) const;
  double real(const std::string& key) const;
  bool boolean(const std::string& key) const;

 private:
  const std::map<std::string, std::string>* values_;
  const std::map<std::string, std::string>* defaults_;
};

/// Standardized training view shared by the per-algorithm trainers.
/// Rows arrive already canonicalized (content-sorted).
struct TrainContext {
  const std::vector<std::vector<double>>& x;  // standardized rows
  const std::vector<int>& y;
  std::uint64_t seed;
  int threads;
};

enum class SplitCriterion { gini, information_gain, gain_ratio };
SplitCriterion parse_criterion(const std::string& s);

struct TreeConfig {
  SplitCriterion criterion = SplitCriterion::gain_ratio;
  int max_depth = 10;
  int min_samples_leaf = 5;
  int min_samples_split = 2;
  int max_features = -1;  // -1: all features
  bool prune = false;
  double confidence = 0.1;
  double minimal_gain = 0.05;
};

Tree build_classification_tree(const std::vector<std::vector<double>>& x,
                               const std::vector<int>& y,
                               const std::vector<std::size_t>& samples,
                               const TreeConfig& config, Rng* rng);

/// Regression tree on (numerator, denominator) targets: splits maximize
/// SSE reduction of `num`; leaf value = sum(num) / max(sum(den), eps),
/// clamped to +-10 (Newton step for boosting).
Tree build_regression_tree(const std::vector<std::vector<double>>& x,
                           const std::vector<double>& num,
                           const std::vector<double>& den,
                           const std::vector<std::size_t>& samples,
                           const TreeConfig& config);

GaussianNbParams train_gaussian_nb(const TrainContext& ctx, const HpReader& hp);
GlmParams train_glm(const TrainContext& ctx, const HpReader& hp);
ForestParams train_decision_tree(const TrainContext& ctx, const HpReader& hp);
ForestParams train_random_forest(const TrainContext& ctx, const HpReader& hp);
GbtParams train_gbt(const TrainContext& ctx, const HpReader& hp,
                    std::vector<double>& curve);
MlpParams train_mlp(const TrainContext& ctx, const HpReader& hp,
                    std::vector<double>& curve);

double sigmoid(double z);

}  // namespace spamlens::models::internal
