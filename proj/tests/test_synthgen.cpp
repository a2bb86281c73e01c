#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spamlens/csv.hpp"
#include "spamlens/synthgen.hpp"
#include "spamlens/util.hpp"
#include "test_support.hpp"

using namespace spamlens;
using namespace spamlens::synthgen;
using testsupport::TempDir;

TEST_CASE("spam count is round(n * ratio) exactly") {
  SynthConfig cfg;
  cfg.n_users = 4000;
  cfg.spam_ratio = 0.3775;
  cfg.tweets_per_user_min = 1;
  cfg.tweets_per_user_max = 2;
  const auto result = generate(cfg);
  std::size_t spammers = 0;
  for (const auto& [user, label] : result.labels) spammers += label;
  CHECK(spammers == 1510);
  CHECK(result.labels.size() == 4000);
  CHECK(result.corpus.users.size() == 4000);
}

TEST_CASE("infeasible configs are rejected") {
  SynthConfig cfg;
  cfg.n_users = 10;
  cfg.spam_ratio = 0.0;
  CHECK_THROWS_AS(generate(cfg), DataError);
  cfg.spam_ratio = 1.0;
  CHECK_THROWS_AS(generate(cfg), DataError);
  cfg.spam_ratio = 0.01;  // rounds to zero spammers
  CHECK_THROWS_AS(generate(cfg), DataError);
  cfg.n_users = 1;
  cfg.spam_ratio = 0.5;
  CHECK_THROWS_AS(generate(cfg), DataError);
  cfg.n_users = 10;
  cfg.tweets_per_user_min = 5;
  cfg.tweets_per_user_max = 3;
  CHECK_THROWS_AS(generate(cfg), DataError);
}

TEST_CASE("boundary arithmetic: two users split 1/1 at ratio 0.5") {
  SynthConfig cfg;
  cfg.n_users = 2;
  cfg.spam_ratio = 0.5;
  cfg.tweets_per_user_min = 1;
  cfg.tweets_per_user_max = 3;
  const auto result = generate(cfg);
  int spam = 0, legit = 0;
  for (const auto& [user, label] : result.labels) (label ? spam : legit)++;
  CHECK(spam == 1);
  CHECK(legit == 1);
}

TEST_CASE("same config and seed produce byte-identical files") {
  SynthConfig cfg;
  cfg.n_users = 60;
  cfg.seed = 99;
  cfg.tweets_per_user_min = 3;
  cfg.tweets_per_user_max = 10;
  TempDir a("synth_a"), b("synth_b");
  for (const auto* dir : {&a, &b}) {
    const auto result = generate(cfg);
    corpus::write_corpus(result.corpus, dir->path("users.jsonl"),
                         dir->path("tweets.jsonl"), dir->path("replies.jsonl"));
    write_manifest(cfg, result, dir->path("manifest.json"));
  }
  for (const char* name :
       {"users.jsonl", "tweets.jsonl", "replies.jsonl", "manifest.json"}) {
    CAPTURE(name);
    CHECK(read_file(a.path(name)) == read_file(b.path(name)));
  }
  // A different seed changes the corpus.
  cfg.seed = 100;
  const auto other = generate(cfg);
  TempDir c("synth_c");
  corpus::write_corpus(other.corpus, c.path("users.jsonl"), c.path("tweets.jsonl"),
                       c.path("replies.jsonl"));
  CHECK(read_file(a.path("tweets.jsonl")) != read_file(c.path("tweets.jsonl")));
}

TEST_CASE("generated corpora are already clean and referentially sound") {
  SynthConfig cfg;
  cfg.n_users = 80;
  cfg.seed = 5;
  const auto result = generate(cfg);
  const auto [cleaned, report] = corpus::cleanse(result.corpus);
  CHECK(report.duplicate_tweets == 0);
  CHECK(report.duplicate_replies == 0);
  CHECK(report.media_urls == 0);
  CHECK(cleaned == result.corpus);
  for (const auto& [id, tweet] : result.corpus.tweets)
    CHECK(result.corpus.users.count(tweet.user_id) == 1);
  for (const auto& [id, reply] : result.corpus.replies)
    CHECK(result.corpus.tweets.count(reply.tweet_id) == 1);
  // Tweets never precede their author's account creation.
  for (const auto& [id, tweet] : result.corpus.tweets)
    CHECK(tweet.created_at >= result.corpus.users.at(tweet.user_id).created_at);
}

TEST_CASE("labels in users.jsonl match the manifest exactly") {
  SynthConfig cfg;
  cfg.n_users = 50;
  cfg.seed = 31;
  const auto result = generate(cfg);
  TempDir dir("synth_labels");
  corpus::write_corpus(result.corpus, dir.path("users.jsonl"),
                       dir.path("tweets.jsonl"), dir.path("replies.jsonl"));
  write_manifest(cfg, result, dir.path("manifest.json"));
  const auto manifest_labels = read_manifest_labels(dir.path("manifest.json"));
  const auto loaded = corpus::ingest_corpus(
      dir.path("users.jsonl"), dir.path("tweets.jsonl"), dir.path("replies.jsonl"));
  REQUIRE(manifest_labels.size() == loaded.corpus.users.size());
  for (const auto& [id, user] : loaded.corpus.users) {
    REQUIRE(user.label.has_value());
    const int expected = *user.label == corpus::UserLabel::spammer ? 1 : 0;
    CHECK(manifest_labels.at(id) == expected);
  }
}

TEST_CASE("planted topic-count distributions: spammers bimodal, legit low") {
  SynthConfig cfg;
  cfg.n_users = 1200;
  cfg.seed = 7;
  cfg.tweets_per_user_min = 1;
  cfg.tweets_per_user_max = 2;
  const auto result = generate(cfg);
  std::map<std::string, int> label_of(result.labels.begin(), result.labels.end());

  std::size_t spam_total = 0, spam_extreme = 0, spam_mid = 0;
  std::map<int, std::size_t> legit_hist;
  std::size_t legit_total = 0;
  for (const auto& [user, df] : result.intended_df) {
    if (label_of.at(user) == 1) {
      ++spam_total;
      if (df == 1 || df >= 7) ++spam_extreme;
      if (df >= 3 && df <= 5) ++spam_mid;
    } else {
      ++legit_total;
      ++legit_hist[df];
    }
  }
  CHECK(spam_total > 0);
  CHECK(spam_extreme > spam_mid);  // bimodal: mass at the extremes
  // Legitimate mode lies in 1..3.
  int mode_df = 1;
  for (const auto& [df, count] : legit_hist)
    if (count > legit_hist[mode_df]) mode_df = df;
  CHECK(mode_df >= 1);
  CHECK(mode_df <= 3);
  CHECK(legit_total > 0);
}

TEST_CASE("builtin newsgroup documents cover all 20 classes, deterministic") {
  const auto docs = builtin_newsgroup_documents(3, 17);
  CHECK(docs.size() == 60);
  std::set<std::string> classes;
  for (const auto& d : docs) {
    classes.insert(d.label);
    CHECK_FALSE(d.text.empty());
  }
  CHECK(classes.size() == 20);
  const auto again = builtin_newsgroup_documents(3, 17);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    CHECK(docs[i].label == again[i].label);
    CHECK(docs[i].text == again[i].text);
  }
  CHECK_THROWS_AS(builtin_newsgroup_documents(0, 1), DataError);
}

TEST_CASE("write_newsgroups_dir emits the one-file-per-document layout") {
  TempDir dir("ngdir");
  write_newsgroups_dir(dir.path(), 2, 3);
  const auto docs = topics::load_newsgroups_dir(dir.path());
  CHECK(docs.size() == 40);
  std::set<std::string> classes;
  for (const auto& d : docs) classes.insert(d.label);
  CHECK(classes.size() == 20);
  CHECK(classes.count("rec.sport.hockey") == 1);
}

TEST_CASE("vocabulary words never collide across unified topics") {
  const auto mapping = topics::TaxonomyMapping::standard();
  std::map<std::string, topics::UnifiedTopic> word_topic;
  for (const auto& [group, words] : newsgroup_vocab()) {
    const auto topic = mapping.map(topics::Source::newsgroup, group);
    REQUIRE(topic.has_value());
    for (const auto& word : words) {
      const auto it = word_topic.find(word);
      if (it != word_topic.end()) {
        CAPTURE(word);
        CHECK(it->second == *topic);
      } else {
        word_topic.emplace(word, *topic);
      }
    }
  }
}
