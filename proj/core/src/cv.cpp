#include <algorithm>
#include <cmath>
#include <numeric>

#include "models_internal.hpp"
#include "spamlens/eval.hpp"
#include "spamlens/models.hpp"

namespace spamlens::models {
namespace {

FoldMetrics metrics_for(const std::vector<double>& probs,
                        const std::vector<int>& labels) {
  FoldMetrics fm;
  const auto counts = eval::confusion(probs, labels, 0.5);
  const auto prf = eval::prf_metrics(counts);
  fm.accuracy = prf.accuracy;
  fm.precision = prf.precision;
  fm.recall = prf.recall;
  fm.f1 = prf.f1;
  const bool both_classes =
      std::count(labels.begin(), labels.end(), 1) > 0 &&
      std::count(labels.begin(), labels.end(), 0) > 0;
  fm.auc = both_classes ? eval::roc_auc(probs, labels).auc
                        : std::numeric_limits<double>::quiet_NaN();
  return fm;
}

}  // namespace

std::vector<int> make_folds(const LabeledData& data, int k, bool stratified,
                            std::uint64_t seed) {
  if (k < 2) throw DataError("cross_validate: k must be >= 2");
  const std::size_t n = data.size();
  if (n < static_cast<std::size_t>(k))
    throw DataError("cross_validate: fewer rows than folds");
  std::vector<int> fold(n, -1);
  if (stratified) {
    for (const int cls : {0, 1}) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i)
        if (data.y[i] == cls) members.push_back(i);
      if (members.size() < static_cast<std::size_t>(k))
        throw DataError("cross_validate: class " + std::to_string(cls) +
                        " has fewer than k members (" +
                        std::to_string(members.size()) + " < " +
                        std::to_string(k) + ")");
      Rng rng(Rng::derive(seed, 100 + cls));
      rng.shuffle(members);
      for (std::size_t i = 0; i < members.size(); ++i)
        fold[members[i]] = static_cast<int>(i % k);
    }
  } else {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);
    // Contiguous chunks; the first n%k folds carry one extra row.
    const std::size_t base = n / k, extra = n % k;
    std::size_t pos = 0;
    for (int f = 0; f < k; ++f) {
      const std::size_t len = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
      for (std::size_t i = 0; i < len; ++i) fold[order[pos++]] = f;
    }
  }
  return fold;
}

CvResult cross_validate(const ModelSpec& spec, const LabeledData& data, int k,
                        bool stratified, std::uint64_t seed, int threads) {
  validate_spec(spec);
  const std::vector<int> fold = make_folds(data, k, stratified, seed);

  CvResult result;
  result.k = k;
  result.folds.resize(k);
  parallel_for(static_cast<std::size_t>(k), threads, [&](std::size_t f) {
    LabeledData train_set, test_set;
    train_set.feature_names = data.feature_names;
    test_set.feature_names = data.feature_names;
    for (std::size_t i = 0; i < data.size(); ++i) {
      LabeledData& dst = fold[i] == static_cast<int>(f) ? test_set : train_set;
      dst.x.push_back(data.x[i]);
      dst.y.push_back(data.y[i]);
    }
    const TrainedModel model = train(spec, train_set, 1);
    result.folds[f] = metrics_for(model.predict_proba(test_set), test_set.y);
  });

  const auto reduce = [&](auto member) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& fm : result.folds) {
      const double v = fm.*member;
      if (std::isnan(v)) continue;
      sum += v;
      ++count;
    }
    const double mean = count ? sum / static_cast<double>(count)
                              : std::numeric_limits<double>::quiet_NaN();
    double ss = 0.0;
    for (const auto& fm : result.folds) {
      const double v = fm.*member;
      if (std::isnan(v)) continue;
      ss += (v - mean) * (v - mean);
    }
    const double sd = count ? std::sqrt(ss / static_cast<double>(count))
                            : std::numeric_limits<double>::quiet_NaN();
    return std::make_pair(mean, sd);
  };
  std::tie(result.mean.accuracy, result.stddev.accuracy) =
      reduce(&FoldMetrics::accuracy);
  std::tie(result.mean.precision, result.stddev.precision) =
      reduce(&FoldMetrics::precision);
  std::tie(result.mean.recall, result.stddev.recall) = reduce(&FoldMetrics::recall);
  std::tie(result.mean.f1, result.stddev.f1) = reduce(&FoldMetrics::f1);
  std::tie(result.mean.auc, result.stddev.auc) = reduce(&FoldMetrics::auc);
  return result;
}

SearchSpace default_search_space(Algorithm a) {
  SearchSpace s;
  switch (a) {
    case Algorithm::random_forest:
      s.candidates["max_depth"] = {"10", "20", "30", "40", "100"};
      s.candidates["min_samples_split"] = {"2", "4", "6"};
      s.candidates["max_features"] = {"sqrt", "log2", "all"};
      s.candidates["criterion"] = {"gini", "entropy"};
      s.candidates["n_estimators"] = {"1", "2", "3"};
      break;
    case Algorithm::mlp:
      s.candidates["activation"] = {"rectifier", "tanh"};
      s.candidates["hidden_units"] = {"50", "100", "200"};
      s.candidates["epochs"] = {"10", "50"};
      s.candidates["adaptive_rate"] = {"0.1", "0.2", "0.3"};
      s.candidates["loss"] = {"cross_entropy", "quadratic"};
      break;
    case Algorithm::gradient_boosted_trees:
      s.candidates["n_estimators"] = {"100", "200"};
      break;
    case Algorithm::glm_logistic:
      s.candidates["fit_intercept"] = {"true", "false"};
      s.candidates["solver"] = {"irlsm", "l-bfgs"};
      break;
    case Algorithm::decision_tree:
      s.candidates["criterion"] = {"gain_ratio", "information_gain"};
      s.candidates["max_depth"] = {"10", "20"};
      s.candidates["apply_pruning"] = {"true", "false"};
      break;
    case Algorithm::gaussian_nb:
      s.candidates["var_smoothing"] = {"1e-9"};
      break;
  }
  return s;
}

SearchOutcome random_search(Algorithm algorithm, const SearchSpace& space,
                            const LabeledData& data, int budget, int k,
                            std::uint64_t seed, int threads) {
  if (budget < 1) throw DataError("random_search: budget must be >= 1");
  for (const auto& [key, values] : space.candidates) {
    if (values.empty())
      throw DataError("random_search: empty candidate list for '" + key + "'");
  }

  Rng rng(seed);
  SearchOutcome outcome;
  std::optional<CvResult> best_cv;
  for (int b = 0; b < budget; ++b) {
    SearchTrial trial;
    trial.spec.algorithm = algorithm;
    trial.spec.seed = seed;
    for (const auto& [key, values] : space.candidates) {
      const auto pick = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(values.size()) - 1));
      trial.spec.hyperparameters[key] = values[pick];
    }
    try {
      const CvResult cv = cross_validate(trial.spec, data, k, true, seed, threads);
      trial.mean_f1 = cv.mean.f1;
      trial.mean_auc = cv.mean.auc;
      const bool better =
          !best_cv ||
          trial.mean_f1 > best_cv->mean.f1 ||
          (trial.mean_f1 == best_cv->mean.f1 &&
           (trial.mean_auc > best_cv->mean.auc ||
            (trial.mean_auc == best_cv->mean.auc &&
             spec_to_string(trial.spec) < spec_to_string(outcome.best))));
      if (better) {
        outcome.best = trial.spec;
        best_cv = cv;
      }
    } catch (const std::exception& e) {
      trial.failed = true;  // scored as -inf, kept in the log
      trial.error = e.what();
      trial.mean_f1 = -std::numeric_limits<double>::infinity();
      trial.mean_auc = -std::numeric_limits<double>::infinity();
    }
    outcome.trials.push_back(std::move(trial));
  }
  if (!best_cv)
    throw DataError("random_search: every sampled spec failed to train");
  outcome.best_cv = *best_cv;
  return outcome;
}

}  // namespace spamlens::models
