#include "spamlens/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "spamlens/csv.hpp"
#include "spamlens/sentiment.hpp"
#include "spamlens/util.hpp"

namespace spamlens::synthgen {
namespace {

using topics::UnifiedTopic;

// Corpus anchor: latest possible tweet time.
const UtcSeconds kBaseTime = parse_rfc3339("2020-12-31T00:00:00Z");

std::string padded(const char* prefix, std::size_t value, int width) {
  std::string digits = std::to_string(value);
  if (static_cast<int>(digits.size()) < width)
    digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

const std::vector<std::string>& newsgroups_for(UnifiedTopic topic) {
  static const std::map<UnifiedTopic, std::vector<std::string>> preimage = [] {
    std::map<UnifiedTopic, std::vector<std::string>> out;
    const auto mapping = topics::TaxonomyMapping::standard();
    for (const auto& [ng, t] : mapping.newsgroup_map()) out[t].push_back(ng);
    return out;
  }();
  return preimage.at(topic);
}

std::vector<std::string> sentiment_pool(bool positive) {
  std::vector<std::string> pool;
  for (const auto& [token, valence] : sentiment::SentimentLexicon::builtin().valence) {
    if (positive ? valence > 0.0 : valence < 0.0) pool.push_back(token);
  }
  std::sort(pool.begin(), pool.end());
  return pool;
}

int draw_topic_count(Rng& rng, const std::array<double, topics::kNumTopics>& w) {
  double total = 0.0;
  for (const double v : w) total += v;
  if (total <= 0.0)
    throw DataError("synth: topic_count_weights must have positive mass");
  double u = rng.uniform() * total;
  for (int i = 0; i < topics::kNumTopics; ++i) {
    u -= w[i];
    if (u < 0.0) return i + 1;
  }
  return topics::kNumTopics;
}

nlohmann::ordered_json behavior_json(const ClassBehavior& b) {
  nlohmann::ordered_json j;
  j["topic_count_weights"] = b.topic_count_weights;
  j["topic_popularity"] = b.topic_popularity;
  j["followers_mu"] = b.followers_mu;
  j["followers_sigma"] = b.followers_sigma;
  j["friends_mu"] = b.friends_mu;
  j["friends_sigma"] = b.friends_sigma;
  j["age_mean_years"] = b.age_mean_years;
  j["age_sigma_years"] = b.age_sigma_years;
  j["retweet_mu"] = b.retweet_mu;
  j["retweet_sigma"] = b.retweet_sigma;
  j["like_mu"] = b.like_mu;
  j["like_sigma"] = b.like_sigma;
  j["reply_rate"] = b.reply_rate;
  j["reply_positive_bias"] = b.reply_positive_bias;
  j["hashtag_rate"] = b.hashtag_rate;
  j["url_rate"] = b.url_rate;
  j["user_variation"] = b.user_variation;
  j["url_hosts"] = b.url_hosts;
  return j;
}

}  // namespace

ClassBehavior default_legitimate_behavior() {
  ClassBehavior b;
  b.topic_count_weights = {0.35, 0.40, 0.20, 0.04, 0.01, 0.0, 0.0, 0.0};
  b.topic_popularity = {0.80, 0.02, 0.02, 0.04, 0.03, 0.03, 0.03, 0.03};
  b.followers_mu = 6.0;
  b.followers_sigma = 1.3;
  b.friends_mu = 5.9;
  b.friends_sigma = 1.2;
  b.age_mean_years = 6.0;
  b.age_sigma_years = 3.5;
  b.retweet_mu = 1.3;
  b.retweet_sigma = 1.0;
  b.like_mu = 1.7;
  b.like_sigma = 1.0;
  b.reply_rate = 0.4;
  b.reply_positive_bias = 0.8;
  b.hashtag_rate = 0.8;
  b.url_rate = 0.5;
  b.user_variation = 0.7;
  b.url_hosts = {"news.example.org",   "blog.example.net",  "photos.example.io",
                 "papers.example.edu", "reviews.example.co", "wiki.example.org",
                 "daily.example.com",  "tech.example.dev",  "shop.example.store",
                 "music.example.fm"};
  return b;
}

ClassBehavior default_spammer_behavior() {
  ClassBehavior b;
  b.topic_count_weights = {0.24, 0.04, 0.02, 0.01, 0.02, 0.06, 0.30, 0.31};
  b.followers_mu = 6.0;
  b.followers_sigma = 1.3;
  b.friends_mu = 6.4;
  b.friends_sigma = 1.3;
  b.age_mean_years = 5.0;
  b.age_sigma_years = 3.0;
  b.retweet_mu = 0.0;
  b.retweet_sigma = 1.0;
  b.like_mu = 0.3;
  b.like_sigma = 1.0;
  b.reply_rate = 0.4;
  b.reply_positive_bias = 0.3;
  b.hashtag_rate = 1.3;
  b.url_rate = 0.6;
  b.user_variation = 0.7;
  b.url_hosts = {"promo-blast.example.biz", "cheap-deals.example.click"};
  return b;
}

SynthResult generate(const SynthConfig& config) {
  if (config.n_users < 2) throw DataError("synth: n_users must be >= 2");
  if (config.spam_ratio < 0.0 || config.spam_ratio > 1.0)
    throw DataError("synth: spam_ratio outside [0,1]");
  if (config.tweets_per_user_min < 1 ||
      config.tweets_per_user_max < config.tweets_per_user_min)
    throw DataError("synth: empty tweets_per_user range");
  const auto n_spam = static_cast<std::size_t>(
      std::lround(config.spam_ratio * static_cast<double>(config.n_users)));
  if (n_spam < 1 || n_spam >= static_cast<std::size_t>(config.n_users))
    throw DataError("synth: spam_ratio " + std::to_string(config.spam_ratio) +
                    " yields no " + (n_spam < 1 ? "spammer" : "legitimate user") +
                    " among " + std::to_string(config.n_users) + " users");

  Rng rng(config.seed);
  const auto pos_pool = sentiment_pool(true);
  const auto neg_pool = sentiment_pool(false);

  std::vector<int> is_spam(config.n_users, 0);
  {
    std::vector<std::size_t> order(config.n_users);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    for (std::size_t i = 0; i < n_spam; ++i) is_spam[order[i]] = 1;
  }

  SynthResult result;
  std::size_t tweet_counter = 0, reply_counter = 0, url_counter = 0;

  for (int u = 0; u < config.n_users; ++u) {
    const bool spam = is_spam[u] == 1;
    const ClassBehavior& b = spam ? config.spammer : config.legitimate;
    if (b.url_hosts.empty()) throw DataError("synth: url_hosts must be non-empty");

    corpus::UserProfile profile;
    profile.user_id = padded("u", u, 6);
    profile.followers_count =
        static_cast<std::int64_t>(std::floor(rng.lognormal(b.followers_mu, b.followers_sigma)));
    profile.friends_count =
        static_cast<std::int64_t>(std::floor(rng.lognormal(b.friends_mu, b.friends_sigma)));
    const double age_years =
        std::clamp(rng.normal(b.age_mean_years, b.age_sigma_years), 0.2, 14.5);
    profile.created_at =
        kBaseTime - static_cast<UtcSeconds>(std::llround(age_years * 365.25 * 86400.0));
    profile.label = spam ? corpus::UserLabel::spammer : corpus::UserLabel::legitimate;

    // Per-user overdispersion so class aggregates overlap realistically.
    const double rate_mult = std::exp(rng.normal(0.0, b.user_variation));
    const double hashtag_rate = b.hashtag_rate * rate_mult;
    const double url_rate =
        b.url_rate * std::exp(rng.normal(0.0, b.user_variation));
    const double reply_rate =
        b.reply_rate * std::exp(rng.normal(0.0, b.user_variation));
    const double retweet_mu = b.retweet_mu + rng.normal(0.0, b.user_variation);
    const double like_mu = b.like_mu + rng.normal(0.0, b.user_variation);

    const int df = draw_topic_count(rng, b.topic_count_weights);
    std::vector<UnifiedTopic> user_topics;
    {
      std::vector<UnifiedTopic> pool(topics::all_topics());
      std::vector<double> weight(b.topic_popularity.begin(),
                                 b.topic_popularity.end());
      for (int pick = 0; pick < df; ++pick) {
        double total = 0.0;
        for (std::size_t t = 0; t < pool.size(); ++t) total += weight[t];
        double u = rng.uniform() * total;
        std::size_t chosen = pool.size() - 1;
        for (std::size_t t = 0; t < pool.size(); ++t) {
          u -= weight[t];
          if (u < 0.0) {
            chosen = t;
            break;
          }
        }
        user_topics.push_back(pool[chosen]);
        pool.erase(pool.begin() + chosen);
        weight.erase(weight.begin() + chosen);
      }
    }

    int n_tweets = static_cast<int>(
        rng.uniform_int(config.tweets_per_user_min, config.tweets_per_user_max));
    n_tweets = std::max(n_tweets, df);

    const auto max_offset = static_cast<std::int64_t>(age_years * 365.25 * 86400.0 * 0.9);

    for (int t = 0; t < n_tweets; ++t) {
      const UnifiedTopic topic = user_topics[t % df];
      const auto& groups = newsgroups_for(topic);
      const auto& vocab = newsgroup_vocab().at(
          groups[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(groups.size()) - 1))]);

      corpus::RawTweet tweet;
      tweet.tweet_id = padded("t", tweet_counter++, 8);
      tweet.user_id = profile.user_id;
      tweet.created_at = kBaseTime - rng.uniform_int(0, std::max<std::int64_t>(max_offset, 1));

      std::string text;
      const int n_words = static_cast<int>(rng.uniform_int(8, 14));
      for (int w = 0; w < n_words; ++w) {
        if (w) text += ' ';
        text += vocab[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(vocab.size()) - 1))];
      }
      const int n_tags = rng.poisson(hashtag_rate);
      for (int h = 0; h < n_tags; ++h) {
        const auto& tag = vocab[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(vocab.size()) - 1))];
        text += " #" + tag;
        tweet.hashtags.push_back(tag);
      }
      const int n_urls = rng.poisson(url_rate);
      for (int l = 0; l < n_urls; ++l) {
        const auto& host = b.url_hosts[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(b.url_hosts.size()) - 1))];
        tweet.urls.push_back("http://" + host + "/" + padded("p", url_counter++, 7));
      }
      tweet.text = std::move(text);
      tweet.retweet_count =
          static_cast<std::int64_t>(std::floor(rng.lognormal(retweet_mu, b.retweet_sigma)));
      tweet.like_count =
          static_cast<std::int64_t>(std::floor(rng.lognormal(like_mu, b.like_sigma)));

      const int n_replies = rng.poisson(reply_rate);
      for (int r = 0; r < n_replies; ++r) {
        const bool positive = rng.uniform() < b.reply_positive_bias;
        const auto& pool = positive ? pos_pool : neg_pool;
        corpus::Reply reply;
        reply.reply_id = padded("r", reply_counter++, 8);
        reply.tweet_id = tweet.tweet_id;
        const int len = static_cast<int>(rng.uniform_int(3, 6));
        for (int w = 0; w < len; ++w) {
          if (w) reply.text += ' ';
          reply.text += pool[static_cast<std::size_t>(
              rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
        }
        result.corpus.replies.emplace(reply.reply_id, std::move(reply));
      }
      result.corpus.tweets.emplace(tweet.tweet_id, std::move(tweet));
    }

    result.labels.emplace_back(profile.user_id, spam ? 1 : 0);
    result.intended_df.emplace(profile.user_id, df);
    result.corpus.users.emplace(profile.user_id, std::move(profile));
  }
  return result;
}

void write_manifest(const SynthConfig& config, const SynthResult& result,
                    const std::string& path) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json cfg;
  cfg["n_users"] = config.n_users;
  cfg["spam_ratio"] = config.spam_ratio;
  cfg["tweets_per_user_min"] = config.tweets_per_user_min;
  cfg["tweets_per_user_max"] = config.tweets_per_user_max;
  cfg["seed"] = config.seed;
  cfg["legitimate"] = behavior_json(config.legitimate);
  cfg["spammer"] = behavior_json(config.spammer);
  j["config"] = std::move(cfg);
  nlohmann::ordered_json labels = nlohmann::ordered_json::array();
  for (const auto& [user, label] : result.labels) {
    nlohmann::ordered_json entry;
    entry["user_id"] = user;
    entry["label"] = label;
    labels.push_back(std::move(entry));
  }
  j["labels"] = std::move(labels);
  write_file(path, j.dump(2) + "\n");
}

std::map<std::string, int> read_manifest_labels(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("manifest: invalid JSON: ") + e.what());
  }
  std::map<std::string, int> labels;
  for (const auto& entry : j.at("labels"))
    labels[entry.at("user_id").get<std::string>()] = entry.at("label").get<int>();
  return labels;
}

std::vector<topics::LabeledDoc> builtin_newsgroup_documents(int docs_per_class,
                                                            std::uint64_t seed) {
  if (docs_per_class < 1)
    throw DataError("builtin_newsgroup_documents: docs_per_class must be >= 1");
  static const std::vector<std::string> filler = {
      "today", "really", "thread", "anyone", "question", "looking",
      "thought", "post",  "reply",  "group",  "week",     "wondering"};
  std::vector<topics::LabeledDoc> docs;
  Rng rng(seed);
  for (const auto& [group, vocab] : newsgroup_vocab()) {
    for (int d = 0; d < docs_per_class; ++d) {
      std::string text;
      const int n_words = static_cast<int>(rng.uniform_int(25, 40));
      for (int w = 0; w < n_words; ++w) {
        if (w) text += ' ';
        if (rng.uniform() < 0.15) {
          text += filler[static_cast<std::size_t>(
              rng.uniform_int(0, static_cast<std::int64_t>(filler.size()) - 1))];
        } else {
          text += vocab[static_cast<std::size_t>(
              rng.uniform_int(0, static_cast<std::int64_t>(vocab.size()) - 1))];
        }
      }
      docs.push_back({group, std::move(text)});
    }
  }
  return docs;
}

void write_newsgroups_dir(const std::string& dir, int docs_per_class,
                          std::uint64_t seed) {
  namespace fs = std::filesystem;
  const auto docs = builtin_newsgroup_documents(docs_per_class, seed);
  std::map<std::string, int> counters;
  for (const auto& doc : docs) {
    const fs::path class_dir = fs::path(dir) / doc.label;
    fs::create_directories(class_dir);
    const int idx = counters[doc.label]++;
    write_file((class_dir / padded("doc", idx, 5)).string(), doc.text + "\n");
  }
}

}  // namespace spamlens::synthgen
