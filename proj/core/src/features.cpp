#include "spamlens/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "spamlens/csv.hpp"
#include "spamlens/util.hpp"

namespace spamlens::features {

const std::array<std::string, kNumFeatures>& feature_names() {
  static const std::array<std::string, kNumFeatures> names = [] {
    std::array<std::string, kNumFeatures> n;
    for (int i = 0; i < kNumFeatures; ++i) n[i] = "x" + std::to_string(i + 1);
    return n;
  }();
  return names;
}

std::size_t FeatureMatrix::labeled_count() const {
  std::size_t n = 0;
  for (const auto& row : rows)
    if (row.label) ++n;
  return n;
}

std::string url_host(const std::string& url) {
  std::size_t start = 0;
  const auto scheme = url.find("://");
  if (scheme != std::string::npos) start = scheme + 3;
  auto end = url.find_first_of("/?#", start);
  if (end == std::string::npos) end = url.size();
  std::string authority = url.substr(start, end - start);
  const auto at = authority.rfind('@');
  if (at != std::string::npos) authority = authority.substr(at + 1);
  return to_lower_ascii(authority);
}

TopicProfile build_topic_profile(
    const std::string& user_id,
    const std::vector<const corpus::RawTweet*>& user_tweets,
    const std::map<std::string, topics::TopicAssignment>& assignments,
    const std::map<topics::UnifiedTopic, sentiment::TopicSentiment>& reply_sentiment,
    const textproc::TokenizerConfig& tok) {
  TopicProfile profile;
  profile.user_id = user_id;

  std::map<topics::UnifiedTopic, std::set<std::string>> words;
  std::map<topics::UnifiedTopic, std::set<std::string>> urls;
  std::map<topics::UnifiedTopic, std::set<std::string>> hosts;
  std::set<std::string> all_hashtags;

  for (const auto* tweet : user_tweets) {
    profile.total_hashtags += static_cast<std::int64_t>(tweet->hashtags.size());
    for (const auto& tag : tweet->hashtags) all_hashtags.insert(tag);

    const auto it = assignments.find(tweet->tweet_id);
    if (it == assignments.end() || !it->second.accepted) continue;
    const topics::UnifiedTopic topic = *it->second.topic;
    TopicRecord& rec = profile.by_topic[topic];
    ++rec.tweet_count;
    const auto tokens = textproc::tokenize(tweet->text, tok);
    rec.word_count += static_cast<std::int64_t>(tokens.size());
    for (const auto& t : tokens) words[topic].insert(t);
    rec.url_count += static_cast<std::int64_t>(tweet->urls.size());
    for (const auto& u : tweet->urls) {
      urls[topic].insert(u);
      hosts[topic].insert(url_host(u));
    }
    rec.retweet_sum += tweet->retweet_count;
    rec.like_sum += tweet->like_count;
    rec.hashtag_count += static_cast<std::int64_t>(tweet->hashtags.size());
  }

  for (auto& [topic, rec] : profile.by_topic) {
    rec.unique_words = static_cast<std::int64_t>(words[topic].size());
    rec.unique_urls = static_cast<std::int64_t>(urls[topic].size());
    rec.unique_url_hosts = static_cast<std::int64_t>(hosts[topic].size());
  }
  for (const auto& [topic, agg] : reply_sentiment) {
    TopicRecord& rec = profile.by_topic[topic];
    rec.reply_count = static_cast<std::int64_t>(agg.reply_count);
    rec.pos_sentiment_sum = agg.pos_sum;
    rec.neg_sentiment_sum = agg.neg_sum;
  }

  profile.total_distinct_hashtags = static_cast<std::int64_t>(all_hashtags.size());
  for (const auto& [topic, rec] : profile.by_topic)
    if (rec.tweet_count > 0) ++profile.df_u;
  return profile;
}

double inverse_topic_frequency(int df_u, int n) {
  if (n < 1) throw std::invalid_argument("inverse_topic_frequency: n < 1");
  if (df_u <= 0) return 0.0;
  return std::log10(static_cast<double>(n) / static_cast<double>(df_u));
}

double followers_friends_ratio(std::int64_t followers, std::int64_t friends,
                               double age_years) {
  const double age_term = age_years / 100.0;
  if (followers - friends > 0) {
    return (static_cast<double>(followers - friends) /
            static_cast<double>(followers)) *
           age_term;
  }
  return (1.0 / static_cast<double>(std::max<std::int64_t>(followers, 1))) *
         age_term;
}

FeatureVector extract_features(const TopicProfile& profile,
                               const corpus::UserProfile& user,
                               topics::UnifiedTopic designated_topic,
                               UtcSeconds as_of) {
  if (profile.user_id != user.user_id)
    throw std::invalid_argument("extract_features: profile/user id mismatch");
  FeatureVector fv;
  fv.designated_topic = designated_topic;

  TopicRecord rec;  // zeros when the user has nothing in the topic
  const auto it = profile.by_topic.find(designated_topic);
  if (it != profile.by_topic.end()) rec = it->second;

  fv.x[0] = static_cast<double>(rec.word_count);
  fv.x[1] = static_cast<double>(rec.unique_words);
  fv.x[2] = static_cast<double>(rec.url_count);
  fv.x[3] = static_cast<double>(rec.unique_urls);
  fv.x[4] = static_cast<double>(rec.unique_url_hosts);
  fv.x[5] = static_cast<double>(profile.df_u);
  fv.x[6] = inverse_topic_frequency(profile.df_u);
  fv.x[7] = static_cast<double>(rec.retweet_sum);
  fv.x[8] = static_cast<double>(rec.like_sum);
  fv.x[9] = static_cast<double>(rec.reply_count);
  fv.x[10] = rec.pos_sentiment_sum;
  fv.x[11] = rec.neg_sentiment_sum;
  fv.x[12] = static_cast<double>(user.followers_count);
  fv.x[13] = static_cast<double>(user.friends_count);
  fv.x[14] = followers_friends_ratio(user.followers_count, user.friends_count,
                                     corpus::account_age_years(user, as_of));
  fv.x[15] = static_cast<double>(profile.total_hashtags);
  fv.x[16] = static_cast<double>(profile.total_distinct_hashtags);
  fv.x[17] = rec.tweet_count > 0 ? static_cast<double>(rec.hashtag_count) /
                                       static_cast<double>(rec.tweet_count)
                                 : 0.0;
  fv.designated_tweet_count = rec.tweet_count;
  return fv;
}

FeatureMatrix build_feature_matrix(
    const corpus::Corpus& corpus,
    const std::map<std::string, topics::TopicAssignment>& assignments,
    const sentiment::SentimentLexicon& lexicon,
    topics::UnifiedTopic designated_topic, std::optional<UtcSeconds> as_of,
    int threads) {
  const UtcSeconds anchor = as_of.value_or(corpus::max_created_at(corpus));

  std::map<std::string, std::vector<const corpus::RawTweet*>> tweets_by_user;
  for (const auto& [id, user] : corpus.users) tweets_by_user[user.user_id];
  for (const auto& [id, tweet] : corpus.tweets)
    tweets_by_user[tweet.user_id].push_back(&tweet);

  // Replies grouped by the tweet author, scored and routed to the parent's
  // accepted topic.
  std::map<std::string, std::vector<sentiment::ScoredReply>> replies_by_user;
  for (const auto& [id, reply] : corpus.replies) {
    const auto tweet_it = corpus.tweets.find(reply.tweet_id);
    if (tweet_it == corpus.tweets.end()) continue;
    sentiment::ScoredReply scored;
    scored.reply_id = reply.reply_id;
    scored.score = sentiment::score_text(lexicon, reply.text);
    const auto assign_it = assignments.find(reply.tweet_id);
    if (assign_it != assignments.end() && assign_it->second.accepted)
      scored.topic = assign_it->second.topic;
    replies_by_user[tweet_it->second.user_id].push_back(std::move(scored));
  }

  std::vector<const corpus::UserProfile*> users;
  users.reserve(corpus.users.size());
  for (const auto& [id, user] : corpus.users) users.push_back(&user);

  FeatureMatrix matrix;
  matrix.rows.resize(users.size());
  parallel_for(users.size(), threads, [&](std::size_t i) {
    const auto& user = *users[i];
    const auto& tweets = tweets_by_user[user.user_id];
    std::map<topics::UnifiedTopic, sentiment::TopicSentiment> reply_agg;
    const auto rep_it = replies_by_user.find(user.user_id);
    if (rep_it != replies_by_user.end())
      reply_agg = sentiment::aggregate_reply_sentiment(rep_it->second);
    const TopicProfile profile = build_topic_profile(
        user.user_id, tweets, assignments, reply_agg);
    FeatureRow row;
    row.user_id = user.user_id;
    row.fv = extract_features(profile, user, designated_topic, anchor);
    if (user.label)
      row.label = *user.label == corpus::UserLabel::spammer ? 1 : 0;
    matrix.rows[i] = std::move(row);
  });
  return matrix;
}

CorrelationMatrix pearson_correlation_matrix(const FeatureMatrix& matrix,
                                             bool include_label) {
  const std::size_t n = matrix.rows.size();
  if (n < 2) throw DataError("pearson_correlation_matrix: fewer than 2 rows");

  std::vector<std::string> names(feature_names().begin(), feature_names().end());
  std::size_t cols = kNumFeatures;
  if (include_label) {
    names.push_back("label");
    ++cols;
    for (const auto& row : matrix.rows) {
      if (!row.label)
        throw DataError("pearson_correlation_matrix: unlabeled row '" +
                        row.user_id + "' with include_label");
    }
  }

  std::vector<std::vector<double>> col(cols, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < kNumFeatures; ++j) col[j][i] = matrix.rows[i].fv.x[j];
    if (include_label) col[kNumFeatures][i] = *matrix.rows[i].label;
  }

  std::vector<double> mean(cols, 0.0), sd(cols, 0.0);
  CorrelationMatrix out;
  out.names = names;
  out.zero_variance.assign(cols, false);
  for (std::size_t j = 0; j < cols; ++j) {
    for (const double v : col[j]) mean[j] += v;
    mean[j] /= static_cast<double>(n);
    double ss = 0.0;
    for (const double v : col[j]) ss += (v - mean[j]) * (v - mean[j]);
    sd[j] = std::sqrt(ss);
    if (sd[j] == 0.0) out.zero_variance[j] = true;
  }

  out.r.assign(cols, std::vector<double>(cols, 0.0));
  for (std::size_t a = 0; a < cols; ++a) {
    out.r[a][a] = 1.0;
    for (std::size_t b = a + 1; b < cols; ++b) {
      double v;
      if (out.zero_variance[a] || out.zero_variance[b]) {
        v = std::numeric_limits<double>::quiet_NaN();
      } else {
        double cov = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          cov += (col[a][i] - mean[a]) * (col[b][i] - mean[b]);
        v = cov / (sd[a] * sd[b]);
      }
      out.r[a][b] = out.r[b][a] = v;
    }
  }
  return out;
}

void write_features_csv(const FeatureMatrix& matrix, const std::string& path) {
  std::ostringstream out;
  out << "user_id";
  for (const auto& name : feature_names()) out << ',' << name;
  out << ",label\n";
  for (const auto& row : matrix.rows) {
    out << csv_escape(row.user_id);
    for (int j = 0; j < kNumFeatures; ++j) out << ',' << format_double(row.fv.x[j]);
    out << ',';
    if (row.label) out << *row.label;
    out << '\n';
  }
  write_file(path, out.str());
}

FeatureMatrix read_features_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open features file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw DataError("features file " + path + ": empty");
  {
    std::string expected = "user_id";
    for (const auto& name : feature_names()) expected += "," + name;
    expected += ",label";
    if (trim(line) != expected)
      throw DataError("features file " + path + ": unexpected header");
  }
  FeatureMatrix matrix;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = parse_csv_line(line);
    if (f.size() != kNumFeatures + 2)
      throw DataError("features file " + path + " line " + std::to_string(lineno) +
                      ": expected " + std::to_string(kNumFeatures + 2) + " fields");
    FeatureRow row;
    row.user_id = f[0];
    for (int j = 0; j < kNumFeatures; ++j) {
      try {
        row.fv.x[j] = std::stod(f[j + 1]);
      } catch (const std::exception&) {
        throw DataError("features file " + path + " line " +
                        std::to_string(lineno) + ": bad number in column " +
                        feature_names()[j]);
      }
    }
    const std::string label = trim(f[kNumFeatures + 1]);
    if (!label.empty()) {
      if (label != "0" && label != "1")
        throw DataError("features file " + path + " line " +
                        std::to_string(lineno) + ": label must be 0, 1 or empty");
      row.label = label == "1" ? 1 : 0;
    }
    matrix.rows.push_back(std::move(row));
  }
  return matrix;
}

void write_topic_counts_csv(const FeatureMatrix& matrix, const std::string& path) {
  std::ostringstream out;
  out << "user_id,designated_topic,designated_tweet_count\n";
  for (const auto& row : matrix.rows) {
    out << csv_escape(row.user_id) << ',' << topics::to_string(row.fv.designated_topic)
        << ',' << row.fv.designated_tweet_count << '\n';
  }
  write_file(path, out.str());
}

void read_topic_counts_csv(FeatureMatrix& matrix, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open topic counts file: " + path);
  std::map<std::string, std::pair<topics::UnifiedTopic, std::int64_t>> table;
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (header) {
      header = false;
      continue;
    }
    if (trim(line).empty()) continue;
    const auto f = parse_csv_line(line);
    if (f.size() != 3)
      throw DataError("topic counts file " + path + " line " +
                      std::to_string(lineno) + ": expected 3 fields");
    const auto topic = topics::parse_topic(f[1]);
    if (!topic)
      throw DataError("topic counts file " + path + " line " +
                      std::to_string(lineno) + ": unknown topic '" + f[1] + "'");
    table[f[0]] = {*topic, std::stoll(f[2])};
  }
  for (auto& row : matrix.rows) {
    const auto it = table.find(row.user_id);
    if (it == table.end())
      throw DataError("topic counts file " + path + ": no entry for user '" +
                      row.user_id + "'");
    row.fv.designated_topic = it->second.first;
    row.fv.designated_tweet_count = it->second.second;
  }
}

}  // namespace spamlens::features
