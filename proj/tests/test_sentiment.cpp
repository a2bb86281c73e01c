#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spamlens/sentiment.hpp"
#include "spamlens/util.hpp"

using namespace spamlens;
using namespace spamlens::sentiment;
using spamlens::topics::UnifiedTopic;

namespace {

SentimentLexicon tiny_lexicon() {
  SentimentLexicon lex;
  lex.valence["good"] = 0.7;
  lex.valence["bad"] = -0.6;
  return lex;
}

}  // namespace

TEST_CASE("score_text: mean valence of matched tokens") {
  const auto lex = tiny_lexicon();
  CHECK(score_text(lex, "good good bad") ==
        doctest::Approx((0.7 + 0.7 - 0.6) / 3.0).epsilon(1e-12));
  CHECK(score_text(lex, "") == 0.0);
  CHECK(score_text(lex, "nothing matches here") == 0.0);
  // Unmatched tokens do not enter the denominator.
  CHECK(score_text(lex, "good stuff") == doctest::Approx(0.7));
}

TEST_CASE("score_text stays within [-1, 1]") {
  SentimentLexicon lex;
  lex.valence["stellar"] = 1.0;
  lex.valence["dire"] = -1.0;
  CHECK(score_text(lex, "stellar stellar stellar") == 1.0);
  CHECK(score_text(lex, "dire dire") == -1.0);
}

TEST_CASE("polarity boundaries") {
  CHECK(polarity_of(0.3) == Polarity::positive);
  CHECK(polarity_of(-0.3) == Polarity::negative);
  CHECK(polarity_of(0.0) == Polarity::neutral);
}

TEST_CASE("aggregate: hand sums with the Table-style 0.53 score") {
  std::vector<ScoredReply> replies = {
      {"r1", UnifiedTopic::sports, 0.53},
      {"r2", UnifiedTopic::sports, -0.2},
      {"r3", UnifiedTopic::sports, 0.1},
  };
  const auto agg = aggregate_reply_sentiment(replies);
  REQUIRE(agg.count(UnifiedTopic::sports) == 1);
  const auto& s = agg.at(UnifiedTopic::sports);
  CHECK(s.pos_sum == doctest::Approx(0.63).epsilon(1e-12));
  CHECK(s.neg_sum == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(s.reply_count == 3);
}

TEST_CASE("aggregate: empty and all-neutral inputs") {
  CHECK(aggregate_reply_sentiment({}).empty());
  std::vector<ScoredReply> neutral = {
      {"r1", UnifiedTopic::news, 0.0},
      {"r2", UnifiedTopic::news, 0.0},
  };
  const auto agg = aggregate_reply_sentiment(neutral);
  CHECK(agg.at(UnifiedTopic::news).pos_sum == 0.0);
  CHECK(agg.at(UnifiedTopic::news).neg_sum == 0.0);
  CHECK(agg.at(UnifiedTopic::news).reply_count == 2);
}

TEST_CASE("aggregate: topic-rejected replies contribute nowhere") {
  std::vector<ScoredReply> replies = {
      {"r1", std::nullopt, 0.9},
      {"r2", UnifiedTopic::science, 0.5},
  };
  const auto agg = aggregate_reply_sentiment(replies);
  CHECK(agg.size() == 1);
  CHECK(agg.at(UnifiedTopic::science).reply_count == 1);
}

TEST_CASE("aggregate: external scores clamped to [-1, 1]") {
  std::vector<ScoredReply> replies = {
      {"r1", UnifiedTopic::news, 3.5},
      {"r2", UnifiedTopic::news, -2.0},
  };
  const auto agg = aggregate_reply_sentiment(replies);
  CHECK(agg.at(UnifiedTopic::news).pos_sum == 1.0);
  CHECK(agg.at(UnifiedTopic::news).neg_sum == -1.0);
}

TEST_CASE("aggregate invariants: signs and order independence") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ScoredReply> replies;
    const int n = static_cast<int>(rng.uniform_int(0, 40));
    double signed_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      ScoredReply r;
      r.reply_id = "r" + std::to_string(i);
      r.topic = static_cast<UnifiedTopic>(rng.uniform_int(0, 7));
      r.score = rng.uniform(-1.0, 1.0);
      if (rng.uniform() < 0.1) r.score = 0.0;
      signed_sum += r.score;
      replies.push_back(r);
    }
    auto agg = aggregate_reply_sentiment(replies);
    double pos_total = 0.0, neg_total = 0.0;
    std::size_t count_total = 0;
    for (const auto& [topic, s] : agg) {
      CHECK(s.pos_sum >= 0.0);
      CHECK(s.neg_sum <= 0.0);
      pos_total += s.pos_sum;
      neg_total += s.neg_sum;
      count_total += s.reply_count;
    }
    CHECK(count_total == replies.size());
    CHECK(pos_total + neg_total == doctest::Approx(signed_sum).epsilon(1e-12));

    rng.shuffle(replies);
    const auto agg2 = aggregate_reply_sentiment(replies);
    REQUIRE(agg2.size() == agg.size());
    for (const auto& [topic, s] : agg) {
      CHECK(std::abs(agg2.at(topic).pos_sum - s.pos_sum) < 1e-12);
      CHECK(std::abs(agg2.at(topic).neg_sum - s.neg_sum) < 1e-12);
      CHECK(agg2.at(topic).reply_count == s.reply_count);
    }
  }
}

TEST_CASE("builtin lexicon is sane") {
  const auto& lex = SentimentLexicon::builtin();
  CHECK(lex.valence.size() > 40);
  for (const auto& [token, v] : lex.valence) {
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
    CHECK(v != 0.0);
  }
  CHECK(lex.valence.count("good") == 1);
  CHECK(lex.valence.count("spam") == 1);
}
