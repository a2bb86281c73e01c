#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spamlens/corpus.hpp"
#include "spamlens/sentiment.hpp"
#include "spamlens/textproc.hpp"
#include "spamlens/topics.hpp"

namespace spamlens::features {

struct TopicRecord {
  std::int64_t tweet_count = 0;
  std::int64_t word_count = 0;
  std::int64_t unique_words = 0;
  std::int64_t url_count = 0;
  std::int64_t unique_urls = 0;
  std::int64_t unique_url_hosts = 0;
  std::int64_t retweet_sum = 0;
  std::int64_t like_sum = 0;
  std::int64_t reply_count = 0;
  double pos_sentiment_sum = 0.0;
  double neg_sentiment_sum = 0.0;
  std::int64_t hashtag_count = 0;
};

struct TopicProfile {
  std::string user_id;
  std::map<topics::UnifiedTopic, TopicRecord> by_topic;
  int df_u = 0;  // topics with tweet_count > 0
  // Hashtag totals over ALL tweets (x16/x17 are topic-independent).
  std::int64_t total_hashtags = 0;
  std::int64_t total_distinct_hashtags = 0;
};

inline constexpr int kNumFeatures = 18;

const std::array<std::string, kNumFeatures>& feature_names();

struct FeatureVector {
  std::array<double, kNumFeatures> x{};  // x[0] is x1 ... x[17] is x18
  topics::UnifiedTopic designated_topic =
      topics::UnifiedTopic::technology_and_computing;
  // Tweet count in the designated topic; used by the DFM baseline.
  // -1 when unknown (e.g. after loading the pinned CSV format).
  std::int64_t designated_tweet_count = -1;
};

struct FeatureRow {
  std::string user_id;
  FeatureVector fv;
  std::optional<int> label;  // 1 = spammer
};

struct FeatureMatrix {
  std::vector<FeatureRow> rows;

  std::size_t labeled_count() const;
};

/// Authority component of a URL, lowercased; empty when absent.
std::string url_host(const std::string& url);

/// Per-topic aggregates over accepted-topic tweets only.
TopicProfile build_topic_profile(
    const std::string& user_id,
    const std::vector<const corpus::RawTweet*>& user_tweets,
    const std::map<std::string, topics::TopicAssignment>& assignments,
    const std::map<topics::UnifiedTopic, sentiment::TopicSentiment>& reply_sentiment,
    const textproc::TokenizerConfig& tok = {});

/// log10(n / DF_u); 0 for the DF_u == 0 sentinel.
double inverse_topic_frequency(int df_u, int n = topics::kNumTopics);

/// Piecewise age-weighted ratio:
///   FOL - FRD > 0:  ((FOL - FRD) / FOL) * (age / 100)
///   otherwise:      (1 / max(FOL, 1))  * (age / 100)
double followers_friends_ratio(std::int64_t followers, std::int64_t friends,
                               double age_years);

FeatureVector extract_features(const TopicProfile& profile,
                               const corpus::UserProfile& user,
                               topics::UnifiedTopic designated_topic,
                               UtcSeconds as_of);

/// Builds the full matrix for a corpus: profiles, reply sentiment, and one
/// feature row per user, ordered by user_id.
FeatureMatrix build_feature_matrix(
    const corpus::Corpus& corpus,
    const std::map<std::string, topics::TopicAssignment>& assignments,
    const sentiment::SentimentLexicon& lexicon,
    topics::UnifiedTopic designated_topic,
    std::optional<UtcSeconds> as_of = std::nullopt, int threads = 1);

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> r;  // NaN marks undefined pairs
  std::vector<bool> zero_variance;
};

/// Pearson r per column pair; diagonal exactly 1. Zero-variance columns
/// are flagged and their off-diagonal entries are NaN. Throws on < 2 rows.
CorrelationMatrix pearson_correlation_matrix(const FeatureMatrix& matrix,
                                             bool include_label);

struct LassoResult {
  std::vector<std::string> selected;        // |weight| > 1e-8
  std::vector<double> weights;              // standardized scale, all columns
  double intercept = 0.0;
  double lambda = 0.0;
  int iterations = 0;
};

/// L1-penalized logistic regression (coordinate descent on an IRLS
/// quadratic approximation); features standardized internally. The
/// objective is mean log-loss + lambda * ||w||_1 with a free intercept.
LassoResult lasso_select(const FeatureMatrix& matrix, double lambda);

/// Smallest lambda for which the all-zero weight vector is optimal.
double lasso_lambda_max(const FeatureMatrix& matrix);

/// features.csv: header user_id,x1,...,x18,label; label in {0,1,""}.
void write_features_csv(const FeatureMatrix& matrix, const std::string& path);
FeatureMatrix read_features_csv(const std::string& path);

/// Side table for columns not in the pinned CSV format:
/// user_id,designated_topic,designated_tweet_count.
void write_topic_counts_csv(const FeatureMatrix& matrix, const std::string& path);
void read_topic_counts_csv(FeatureMatrix& matrix, const std::string& path);

}  // namespace spamlens::features
