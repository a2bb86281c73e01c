#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spamlens/features.hpp"

namespace spamlens::eval {

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + tn + fp + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

/// Predicted positive iff probability >= threshold.
ConfusionCounts confusion(std::span<const double> predictions,
                          std::span<const int> labels, double threshold);

struct PrfMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // 0/0 ratios are reported as 0 with the matching flag cleared.
  bool precision_defined = true;
  bool recall_defined = true;
  bool f1_defined = true;
};

PrfMetrics prf_metrics(const ConfusionCounts& c);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

struct RocResult {
  std::vector<RocPoint> points;  // (0,0) .. (1,1), thresholds descending
  double auc = 0.0;
};

/// Threshold sweep over distinct scores with tie grouping; AUC by the
/// trapezoid rule (equals the pairwise statistic with half credit for
/// ties). Throws when labels are single-class.
RocResult roc_auc(std::span<const double> scores, std::span<const int> labels);

enum class RankMethod { model, ddf, dif, low_in_degree, dfm };

std::string to_string(RankMethod m);
std::optional<RankMethod> parse_rank_method(const std::string& s);

struct RankingResult {
  RankMethod method = RankMethod::model;
  // Descending score; ties broken by user_id ascending.
  std::vector<std::pair<std::string, double>> entries;
};

/// Normalizes arbitrary (user, score) pairs into the canonical ordering.
RankingResult make_ranking(RankMethod method,
                           std::vector<std::pair<std::string, double>> entries);

/// (# spammers in top k) / k. Labels map user_id -> {0,1}; unknown users
/// are an error.
double precision_at_k(const RankingResult& ranking,
                      const std::map<std::string, int>& labels, int k);

/// AP@k = (1/N(k)) * sum_{i<=k} P@i * rel@i with N(k) = min(k, total
/// spammers); 0 when no spammers exist.
double average_precision_at_k(const RankingResult& ranking,
                              const std::map<std::string, int>& labels, int k);

/// The four baseline rankers. Scores live in [0,1], higher = more
/// spammer-like; built from empirical percentiles so any strictly
/// monotone rescaling of a feature column leaves the ranking unchanged.
RankingResult rank_baseline(RankMethod method, const features::FeatureMatrix& matrix);

/// ranking.csv / apk.csv interchange.
void write_ranking_csv(const RankingResult& ranking,
                       const std::map<std::string, int>& labels,
                       const std::string& path);

struct ApkRow {
  std::string method;
  int k = 0;
  double p_at_k = 0.0;
  double ap_at_k = 0.0;
};

void write_apk_csv(const std::vector<ApkRow>& rows, const std::string& path);

}  // namespace spamlens::eval
