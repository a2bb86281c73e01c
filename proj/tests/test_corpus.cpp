#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spamlens/corpus.hpp"
#include "spamlens/util.hpp"
#include "test_support.hpp"

using namespace spamlens;
using namespace spamlens::corpus;
using testsupport::TempDir;
using testsupport::write_text;

namespace {

struct Fixture {
  TempDir dir{"corpus"};
  std::string users = dir.path("users.jsonl");
  std::string tweets = dir.path("tweets.jsonl");
  std::string replies = dir.path("replies.jsonl");
};

const char* kUsers =
    R"({"user_id":"u1","followers_count":10,"friends_count":5,"created_at":"2015-06-01T00:00:00Z","label":"spammer"})"
    "\n"
    R"({"user_id":"u2","followers_count":99,"friends_count":1,"created_at":"2012-01-01T12:30:00Z"})"
    "\n";

const char* kTweets =
    R"({"tweet_id":"t1","user_id":"u1","created_at":"2020-01-01T00:00:00Z","text":"hello world","urls":[],"hashtags":["hi"],"retweet_count":1,"like_count":2})"
    "\n"
    R"({"tweet_id":"t2","user_id":"u1","created_at":"2020-01-02T00:00:00Z","text":"second","urls":["http://a.example/x"],"hashtags":[],"retweet_count":0,"like_count":0})"
    "\n"
    R"({"tweet_id":"t3","user_id":"u2","created_at":"2020-02-01T00:00:00Z","text":"third","urls":[],"hashtags":[],"retweet_count":3,"like_count":4})"
    "\n";

const char* kReplies =
    R"({"reply_id":"r1","tweet_id":"t1","text":"nice"})"
    "\n";

}  // namespace

TEST_CASE("ingest: consistent 2/3/1 corpus loads fully") {
  Fixture f;
  write_text(f.users, kUsers);
  write_text(f.tweets, kTweets);
  write_text(f.replies, kReplies);
  const auto result = ingest_corpus(f.users, f.tweets, f.replies);
  CHECK(result.corpus.users.size() == 2);
  CHECK(result.corpus.tweets.size() == 3);
  CHECK(result.corpus.replies.size() == 1);
  CHECK(result.report.quarantine_count() == 0);
  CHECK(result.corpus.users.at("u1").label == UserLabel::spammer);
  CHECK_FALSE(result.corpus.users.at("u2").label.has_value());
}

TEST_CASE("ingest: dangling reply quarantined by default, fatal in strict mode") {
  Fixture f;
  write_text(f.users, kUsers);
  write_text(f.tweets, kTweets);
  write_text(f.replies,
             R"({"reply_id":"r9","tweet_id":"missing","text":"?"})" "\n");
  const auto result = ingest_corpus(f.users, f.tweets, f.replies);
  CHECK(result.corpus.replies.empty());
  CHECK(result.report.quarantined_replies == 1);
  CHECK(result.report.quarantine_count() == 1);
  CHECK_THROWS_AS(ingest_corpus(f.users, f.tweets, f.replies, true), DataError);
}

TEST_CASE("ingest: identical duplicate id passes through once; strict errors") {
  Fixture f;
  write_text(f.users, kUsers);
  const std::string line =
      R"({"tweet_id":"t1","user_id":"u1","created_at":"2020-01-01T00:00:00Z","text":"same","urls":[],"hashtags":[],"retweet_count":0,"like_count":0})";
  write_text(f.tweets, line + "\n" + line + "\n");
  write_text(f.replies, "");

  const auto result = ingest_corpus(f.users, f.tweets, f.replies);
  CHECK(result.corpus.tweets.size() == 1);
  CHECK(result.report.duplicate_ids_dropped == 1);
  const auto [cleaned, report] = cleanse(result.corpus);
  CHECK(cleaned.tweets.size() == 1);  // one retained after cleanse

  CHECK_THROWS_WITH_AS(ingest_corpus(f.users, f.tweets, f.replies, true),
                       doctest::Contains("t1"), DataError);
}

TEST_CASE("ingest: malformed line reported with its line number") {
  Fixture f;
  write_text(f.users, kUsers);
  write_text(f.tweets, std::string(kTweets) + "{not json\n");
  write_text(f.replies, "");
  CHECK_THROWS_WITH_AS(ingest_corpus(f.users, f.tweets, f.replies),
                       doctest::Contains("line 4"), DataError);
}

TEST_CASE("ingest: negative count and unknown fields") {
  Fixture f;
  write_text(f.users, kUsers);
  write_text(f.tweets,
             R"({"tweet_id":"t1","user_id":"u1","created_at":"2020-01-01T00:00:00Z","text":"x","retweet_count":-1,"like_count":0})" "\n");
  write_text(f.replies, "");
  CHECK_THROWS_AS(ingest_corpus(f.users, f.tweets, f.replies), DataError);

  // Unknown fields are ignored; urls/hashtags may be omitted.
  write_text(f.tweets,
             R"({"tweet_id":"t1","user_id":"u1","created_at":"2020-01-01T00:00:00Z","text":"x","retweet_count":1,"like_count":0,"extra_field":42})" "\n");
  const auto result = ingest_corpus(f.users, f.tweets, f.replies);
  CHECK(result.corpus.tweets.size() == 1);
}

TEST_CASE("cleanse: duplicate tweets reduce to the earliest") {
  Corpus c;
  c.users.emplace("u1", testsupport::make_user("u1"));
  auto t1 = testsupport::make_tweet("t1", "u1", "same text", "2020-01-05T00:00:00Z");
  auto t2 = testsupport::make_tweet("t2", "u1", "same text", "2020-01-01T00:00:00Z");
  auto t3 = testsupport::make_tweet("t3", "u1", "  same text ", "2020-01-09T00:00:00Z");
  c.tweets.emplace(t1.tweet_id, t1);
  c.tweets.emplace(t2.tweet_id, t2);
  c.tweets.emplace(t3.tweet_id, t3);
  const auto [cleaned, report] = cleanse(c);
  CHECK(cleaned.tweets.size() == 1);
  CHECK(cleaned.tweets.count("t2") == 1);  // earliest created_at survives
  CHECK(report.duplicate_tweets == 2);
}

TEST_CASE("cleanse: media urls removed by extension, case-insensitive") {
  Corpus c;
  c.users.emplace("u1", testsupport::make_user("u1"));
  auto t = testsupport::make_tweet("t1", "u1", "pics");
  t.urls = {"http://a.com/p.jpg", "http://b.com/x"};
  c.tweets.emplace(t.tweet_id, t);
  const auto [cleaned, report] = cleanse(c);
  CHECK(cleaned.tweets.at("t1").urls == std::vector<std::string>{"http://b.com/x"});
  CHECK(report.media_urls == 1);

  CHECK(is_media_url("http://x.y/v.MP4"));
  CHECK(is_media_url("https://x.y/a/b/c.JpEg?w=100"));
  CHECK(is_media_url("http://x.y/pic.png#frag"));
  CHECK_FALSE(is_media_url("http://x.y/page.html"));
  CHECK_FALSE(is_media_url("http://x.y/jpg"));          // extension in host only
  CHECK_FALSE(is_media_url("http://x.y/file.jpg.html"));
}

TEST_CASE("cleanse: already-clean corpus unchanged, idempotent") {
  Corpus c;
  c.users.emplace("u1", testsupport::make_user("u1"));
  c.tweets.emplace("t1", testsupport::make_tweet("t1", "u1", "alpha"));
  c.tweets.emplace("t2", testsupport::make_tweet("t2", "u1", "beta"));
  Reply r{"r1", "t1", "ok"};
  c.replies.emplace(r.reply_id, r);

  const auto [once, report1] = cleanse(c);
  CHECK(once == c);
  CHECK(report1 == CleanseReport{});

  // Idempotence on a dirty corpus.
  auto dup = testsupport::make_tweet("t9", "u1", "alpha", "2021-01-01T00:00:00Z");
  c.tweets.emplace(dup.tweet_id, dup);
  const auto [pass1, r1] = cleanse(c);
  const auto [pass2, r2] = cleanse(pass1);
  CHECK(pass1 == pass2);
  CHECK(r2 == CleanseReport{});
}

TEST_CASE("cleanse: duplicate replies reduced; sizes never grow") {
  Corpus c;
  c.users.emplace("u1", testsupport::make_user("u1"));
  c.tweets.emplace("t1", testsupport::make_tweet("t1", "u1", "post"));
  c.replies.emplace("r1", Reply{"r1", "t1", "same"});
  c.replies.emplace("r2", Reply{"r2", "t1", " same "});
  c.replies.emplace("r3", Reply{"r3", "t1", "different"});
  const auto [cleaned, report] = cleanse(c);
  CHECK(cleaned.replies.size() == 2);
  CHECK(cleaned.replies.count("r1") == 1);  // smallest reply_id survives
  CHECK(report.duplicate_replies == 1);
  CHECK(cleaned.users.size() <= c.users.size());
  CHECK(cleaned.tweets.size() <= c.tweets.size());
  CHECK(cleaned.replies.size() <= c.replies.size());
}

TEST_CASE("after cleanse no two tweets share (user_id, text)") {
  Rng rng(11);
  Corpus c;
  c.users.emplace("u1", testsupport::make_user("u1"));
  c.users.emplace("u2", testsupport::make_user("u2"));
  const std::vector<std::string> texts = {"aa", "bb", "cc"};
  for (int i = 0; i < 40; ++i) {
    auto t = testsupport::make_tweet(
        "t" + std::to_string(100 + i), rng.uniform() < 0.5 ? "u1" : "u2",
        texts[static_cast<std::size_t>(rng.uniform_int(0, 2))]);
    t.created_at += rng.uniform_int(0, 1000000);
    c.tweets.emplace(t.tweet_id, t);
  }
  const auto [cleaned, report] = cleanse(c);
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& [id, t] : cleaned.tweets)
    CHECK(seen.insert({t.user_id, trim(t.text)}).second);
}

TEST_CASE("account_age_years") {
  auto u = testsupport::make_user("u1", 0, 0, "2010-01-01T00:00:00Z");
  // 3652 days / 365.25
  CHECK(account_age_years(u, parse_rfc3339("2020-01-01T00:00:00Z")) ==
        doctest::Approx(3652.0 / 365.25).epsilon(1e-12));
  CHECK(account_age_years(u, u.created_at) == 0.0);
  auto v = testsupport::make_user("u2", 0, 0, "2019-07-02T00:00:00Z");
  CHECK(account_age_years(v, parse_rfc3339("2020-07-01T00:00:00Z")) ==
        doctest::Approx(0.999).epsilon(0.003));
  CHECK_THROWS_AS(account_age_years(u, u.created_at - 1), DataError);
}

TEST_CASE("rfc3339 parsing variants") {
  CHECK(parse_rfc3339("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_rfc3339("1970-01-01T00:00:01.5Z") == 1);  // fraction truncated
  CHECK(parse_rfc3339("1970-01-01T01:00:00+01:00") == 0);
  CHECK(parse_rfc3339("1969-12-31T23:00:00-01:00") == 0);
  CHECK(format_rfc3339(0) == "1970-01-01T00:00:00Z");
  CHECK(format_rfc3339(parse_rfc3339("2020-02-29T12:34:56Z")) ==
        "2020-02-29T12:34:56Z");
  CHECK_THROWS_AS(parse_rfc3339("2020-13-01T00:00:00Z"), DataError);
  CHECK_THROWS_AS(parse_rfc3339("2020-02-30T00:00:00Z"), DataError);
  CHECK_THROWS_AS(parse_rfc3339("2020-02-10 00:00:00"), DataError);
  CHECK_THROWS_AS(parse_rfc3339("garbage"), DataError);
}

TEST_CASE("ingest -> serialize -> ingest round-trips identically") {
  Fixture f;
  write_text(f.users, kUsers);
  write_text(f.tweets, kTweets);
  write_text(f.replies, kReplies);
  const auto first = ingest_corpus(f.users, f.tweets, f.replies);

  TempDir out("corpus_rt");
  const auto u2 = out.path("users.jsonl");
  const auto t2 = out.path("tweets.jsonl");
  const auto r2 = out.path("replies.jsonl");
  write_corpus(first.corpus, u2, t2, r2);
  const auto second = ingest_corpus(u2, t2, r2);
  CHECK(first.corpus == second.corpus);
}

TEST_CASE("max_created_at tracks the newest tweet") {
  Corpus c;
  c.users.emplace("u1", testsupport::make_user("u1"));
  c.tweets.emplace("t1", testsupport::make_tweet("t1", "u1", "a", "2020-01-01T00:00:00Z"));
  c.tweets.emplace("t2", testsupport::make_tweet("t2", "u1", "b", "2020-06-01T00:00:00Z"));
  CHECK(max_created_at(c) == parse_rfc3339("2020-06-01T00:00:00Z"));
}
