#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spamlens/corpus.hpp"
#include "spamlens/topics.hpp"

namespace spamlens::synthgen {

/// Behavior knobs for one user class. Follower/friend counts are
/// log-normal; the topic-count distribution drives DF_u.
struct ClassBehavior {
  std::array<double, topics::kNumTopics> topic_count_weights{};  // DF 1..8
  // Which topics a user picks (sampling without replacement). Legitimate
  // accounts in the default corpus orbit the designated technology topic;
  // spammers spray topics uniformly, so missing designated-topic activity
  // is itself suspicious.
  std::array<double, topics::kNumTopics> topic_popularity{
      0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125};
  double followers_mu = 6.0, followers_sigma = 1.0;  // log-space
  double friends_mu = 6.0, friends_sigma = 1.0;
  double age_mean_years = 5.0, age_sigma_years = 2.0;
  double retweet_mu = 1.0, retweet_sigma = 1.0;  // log-space
  double like_mu = 1.5, like_sigma = 1.0;
  double reply_rate = 0.4;          // expected replies per tweet
  double reply_positive_bias = 0.5; // P(reply drawn from the positive pool)
  double hashtag_rate = 1.0;        // expected hashtags per tweet
  double url_rate = 0.5;            // expected URLs per tweet
  // Per-user overdispersion: rates get a lognormal(0, user_variation)
  // multiplier and engagement mus a normal(0, user_variation) shift, so
  // per-class aggregates overlap the way real accounts do.
  double user_variation = 0.7;
  std::vector<std::string> url_hosts;
};

ClassBehavior default_legitimate_behavior();
ClassBehavior default_spammer_behavior();

struct SynthConfig {
  int n_users = 4000;
  double spam_ratio = 0.3775;
  int tweets_per_user_min = 20;
  int tweets_per_user_max = 60;
  std::uint64_t seed = 1;
  ClassBehavior legitimate = default_legitimate_behavior();
  ClassBehavior spammer = default_spammer_behavior();
};

struct SynthResult {
  corpus::Corpus corpus;                            // labels filled in
  std::vector<std::pair<std::string, int>> labels;  // (user_id, 1=spammer)
  std::map<std::string, int> intended_df;           // planted DF_u per user
};

/// Deterministic given config.seed. Throws DataError on infeasible
/// configs (fewer than one user of either class, empty ranges).
SynthResult generate(const SynthConfig& config);

/// manifest.json: config echo plus the ground-truth label list.
void write_manifest(const SynthConfig& config, const SynthResult& result,
                    const std::string& path);
std::map<std::string, int> read_manifest_labels(const std::string& path);

/// Indicative vocabulary per newsgroup; tweet text and the builtin
/// training documents draw from the same pools so generated corpora are
/// genuinely classifiable.
const std::map<std::string, std::vector<std::string>>& newsgroup_vocab();

/// Synthetic newsgroups-style training corpus for offline runs.
std::vector<topics::LabeledDoc> builtin_newsgroup_documents(int docs_per_class,
                                                            std::uint64_t seed);

/// Writes the builtin documents in the one-file-per-document directory
/// layout (one subdirectory per class).
void write_newsgroups_dir(const std::string& dir, int docs_per_class,
                          std::uint64_t seed);

}  // namespace spamlens::synthgen
