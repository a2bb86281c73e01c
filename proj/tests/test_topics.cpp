#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "spamlens/synthgen.hpp"
#include "spamlens/topics.hpp"
#include "spamlens/util.hpp"
#include "test_support.hpp"

using namespace spamlens;
using namespace spamlens::topics;
using testsupport::TempDir;
using testsupport::write_text;

namespace {

std::vector<LabeledDoc> toy_docs() {
  return {
      {"alpha", "xray xray zebra"},
      {"alpha", "xray zebra zebra"},
      {"beta", "yankee quebec"},
      {"beta", "yankee yankee quebec quebec"},
  };
}

TopicModel toy_model(TopicAlgorithm algo) {
  TopicHyperParams hp;
  hp.epochs = 60;
  hp.seed = 3;
  return TopicModel::train(toy_docs(), algo, hp);
}

}  // namespace

TEST_CASE("the unified taxonomy has exactly 8 topics") {
  CHECK(all_topics().size() == 8);
  CHECK(kNumTopics == 8);
  for (const auto t : all_topics()) CHECK(parse_topic(to_string(t)) == t);
  CHECK_FALSE(parse_topic("not_a_topic").has_value());
}

TEST_CASE("standard mapping is total over the 20 newsgroups") {
  const auto m = TaxonomyMapping::standard();
  CHECK(m.newsgroup_map().size() == 20);
  std::map<UnifiedTopic, int> counts;
  for (const auto& [ng, topic] : m.newsgroup_map()) ++counts[topic];
  CHECK(counts.at(UnifiedTopic::technology_and_computing) == 6);
  CHECK(counts.at(UnifiedTopic::business_and_industrial) == 1);
  CHECK(counts.at(UnifiedTopic::automotive_and_vehicles) == 2);
  CHECK(counts.at(UnifiedTopic::sports) == 2);
  CHECK(counts.at(UnifiedTopic::science) == 3);
  CHECK(counts.at(UnifiedTopic::news) == 2);
  CHECK(counts.at(UnifiedTopic::law_govt_and_politics) == 1);
  CHECK(counts.at(UnifiedTopic::religion_and_spirituality) == 3);
}

TEST_CASE("map_to_unified: table rows and unmapped labels") {
  const auto m = TaxonomyMapping::standard();
  CHECK(m.map(Source::newsgroup, "rec.autos") == UnifiedTopic::automotive_and_vehicles);
  CHECK(m.map(Source::newsgroup, "sci.electronics") ==
        UnifiedTopic::technology_and_computing);
  CHECK(m.map(Source::newsgroup, "misc.forsale") ==
        UnifiedTopic::business_and_industrial);
  CHECK(m.map(Source::newsgroup, "talk.politics.misc") ==
        UnifiedTopic::law_govt_and_politics);
  CHECK_FALSE(m.map(Source::newsgroup, "comp.unknown").has_value());
  // External paths map by top-level segment.
  CHECK(m.map(Source::external, "/sports") == UnifiedTopic::sports);
  CHECK(m.map(Source::external, "/sports/hockey/nhl") == UnifiedTopic::sports);
  CHECK(m.map(Source::external, "/law, govt and politics/courts") ==
        UnifiedTopic::law_govt_and_politics);
  CHECK_FALSE(m.map(Source::external, "/health and fitness/disease/epidemic")
                  .has_value());
}

TEST_CASE("mapping TSV override") {
  TempDir dir("mapping");
  const auto path = dir.path("map.tsv");
  write_text(path,
             "newsgroup\trec.autos\tsports\n"
             "external\tmotoring\tautomotive_and_vehicles\n"
             "# comment line\n");
  const auto m = TaxonomyMapping::from_tsv(path);
  CHECK(m.map(Source::newsgroup, "rec.autos") == UnifiedTopic::sports);
  CHECK(m.map(Source::external, "/motoring/cars") ==
        UnifiedTopic::automotive_and_vehicles);
  CHECK_FALSE(m.map(Source::newsgroup, "sci.med").has_value());

  write_text(path, "newsgroup\trec.autos\tnot_a_topic\n");
  CHECK_THROWS_AS(TaxonomyMapping::from_tsv(path), DataError);
}

TEST_CASE("toy corpora are memorized by all three algorithms") {
  for (const auto algo :
       {TopicAlgorithm::multinomial_nb, TopicAlgorithm::logistic_regression,
        TopicAlgorithm::sgd_softmax}) {
    CAPTURE(to_string(algo));
    const auto model = toy_model(algo);
    CHECK(model.training_accuracy() == 1.0);
    for (const auto& doc : toy_docs()) {
      const auto c = model.classify(doc.text);
      REQUIRE(c.label.has_value());
      CHECK(*c.label == doc.label);
      CHECK(c.score >= 0.0);
      CHECK(c.score <= 1.0);
    }
  }
}

TEST_CASE("degenerate single-class corpus is rejected") {
  std::vector<LabeledDoc> docs = {{"only", "aaa bbb"}, {"only", "ccc ddd"}};
  CHECK_THROWS_AS(TopicModel::train(docs, TopicAlgorithm::multinomial_nb), DataError);
}

TEST_CASE("classify: empty input is no-signal") {
  const auto model = toy_model(TopicAlgorithm::multinomial_nb);
  const auto c = model.classify("");
  CHECK_FALSE(c.label.has_value());
  CHECK(c.score == 0.0);
  // Out-of-vocabulary text is no-signal as well.
  CHECK_FALSE(model.classify("unseen words only").label.has_value());
}

TEST_CASE("class probabilities sum to 1 for random inputs, all algorithms") {
  const std::vector<std::string> pool = {"xray",   "zebra",  "yankee",
                                         "quebec", "random", "words"};
  for (const auto algo :
       {TopicAlgorithm::multinomial_nb, TopicAlgorithm::logistic_regression,
        TopicAlgorithm::sgd_softmax}) {
    const auto model = toy_model(algo);
    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
      std::string text;
      const int len = static_cast<int>(rng.uniform_int(1, 12));
      for (int i = 0; i < len; ++i) {
        text += pool[static_cast<std::size_t>(rng.uniform_int(0, 5))];
        text += ' ';
      }
      const auto probs = model.class_probabilities(text);
      if (probs.empty()) continue;  // fully OOV draw
      double sum = 0.0;
      for (const double p : probs) sum += p;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("classification ties break lexicographically") {
  // Symmetric corpus: "mid" appears identically in both classes.
  std::vector<LabeledDoc> docs = {{"bbb", "mid"}, {"aaa", "mid"}};
  const auto model = TopicModel::train(docs, TopicAlgorithm::multinomial_nb);
  const auto c = model.classify("mid");
  REQUIRE(c.label.has_value());
  CHECK(*c.label == "aaa");
}

TEST_CASE("sgd_softmax training loss is non-increasing on the toy corpus") {
  TopicHyperParams hp;
  hp.epochs = 30;
  hp.learning_rate = 0.2;  // at or below the default
  hp.seed = 9;
  const auto model = TopicModel::train(toy_docs(), TopicAlgorithm::sgd_softmax, hp);
  const auto& curve = model.training_curve();
  REQUIRE(curve.size() == 30);
  for (std::size_t i = 1; i < curve.size(); ++i)
    CHECK(curve[i] <= curve[i - 1] + 1e-9);
}

TEST_CASE("topic model JSON round-trip preserves decisions") {
  const auto model = toy_model(TopicAlgorithm::sgd_softmax);
  const auto restored = TopicModel::from_json(model.to_json());
  for (const auto& doc : toy_docs()) {
    const auto a = model.classify(doc.text);
    const auto b = restored.classify(doc.text);
    CHECK(a.label == b.label);
    CHECK(a.score == b.score);
  }
}

TEST_CASE("agree_label: agreement, disagreement, missing side") {
  const auto mapping = TaxonomyMapping::standard();
  TagResult external;
  external.categories = {{"/sports", 0.9}};
  Classification ng{"rec.sport.hockey", 0.8};
  auto a = agree_label("t1", external, ng, mapping);
  CHECK(a.accepted);
  CHECK(a.topic == UnifiedTopic::sports);
  CHECK(a.source_a.label == "/sports");
  CHECK(a.source_b.label == "rec.sport.hockey");

  TagResult news;
  news.categories = {{"/news", 0.9}};
  auto b = agree_label("t2", news, Classification{"rec.autos", 0.8}, mapping);
  CHECK_FALSE(b.accepted);
  CHECK_FALSE(b.topic.has_value());

  auto c = agree_label("t3", TagResult{}, Classification{"sci.med", 0.9}, mapping);
  CHECK_FALSE(c.accepted);
}

TEST_CASE("agree_label respects min_score") {
  const auto mapping = TaxonomyMapping::standard();
  TagResult external;
  external.categories = {{"/science", 0.4}};
  const Classification ng{"sci.med", 0.9};
  CHECK(agree_label("t", external, ng, mapping, 0.0).accepted);
  CHECK(agree_label("t", external, ng, mapping, 0.39).accepted);
  CHECK_FALSE(agree_label("t", external, ng, mapping, 0.5).accepted);
}

TEST_CASE("agree_label uses the top-1 external category") {
  const auto mapping = TaxonomyMapping::standard();
  TagResult external;
  external.categories = {{"/news", 0.9}, {"/sports", 0.8}};
  const auto a =
      agree_label("t", external, Classification{"rec.sport.hockey", 0.9}, mapping);
  CHECK_FALSE(a.accepted);  // top-1 is /news, not /sports
}

TEST_CASE("tag_corpus: full agreement via the offline stub, stats flagged") {
  corpus::Corpus c;
  c.users.emplace("u1", testsupport::make_user("u1"));
  for (int i = 0; i < 10; ++i) {
    auto t = testsupport::make_tweet("t" + std::to_string(i), "u1",
                                     "xray zebra xray");
    c.tweets.emplace(t.tweet_id, t);
  }
  // Model whose labels are real newsgroups so the mapping applies.
  std::vector<LabeledDoc> docs = {
      {"rec.sport.hockey", "xray zebra"},
      {"rec.sport.hockey", "zebra xray xray"},
      {"sci.med", "yankee quebec"},
      {"sci.med", "quebec yankee"},
  };
  const auto model = TopicModel::train(docs, TopicAlgorithm::multinomial_nb);
  const auto mapping = TaxonomyMapping::standard();
  const OfflineStubTagger stub(&model, &mapping);
  const auto result = tag_corpus(c, model, stub, mapping);
  CHECK(result.stats.stub_tagger);
  CHECK(result.stats.total_tweets == 10);
  CHECK(result.stats.accepted == 10);
  const auto& sports = result.stats.by_topic.at(UnifiedTopic::sports);
  CHECK(sports.matched == 10);
  CHECK(sports.count_a == 10);
  CHECK(sports.pct_matching() == doctest::Approx(1.0));
}

namespace {

/// Forces a fixed external topic regardless of text.
class FixedTagger : public ExternalTagger {
 public:
  explicit FixedTagger(std::string path) : path_(std::move(path)) {}
  TagResult analyze(const std::string&) const override {
    TagResult r;
    r.categories = {{path_, 1.0}};
    return r;
  }

 private:
  std::string path_;
};

}  // namespace

TEST_CASE("tag_corpus: forced disagreement yields zero matches") {
  corpus::Corpus c;
  c.users.emplace("u1", testsupport::make_user("u1"));
  for (int i = 0; i < 6; ++i) {
    auto t = testsupport::make_tweet("t" + std::to_string(i), "u1", "xray zebra");
    c.tweets.emplace(t.tweet_id, t);
  }
  std::vector<LabeledDoc> docs = {
      {"rec.sport.hockey", "xray zebra"},
      {"sci.med", "yankee quebec"},
  };
  const auto model = TopicModel::train(docs, TopicAlgorithm::multinomial_nb);
  const auto mapping = TaxonomyMapping::standard();
  const FixedTagger tagger("/news");
  const auto result = tag_corpus(c, model, tagger, mapping);
  CHECK(result.stats.accepted == 0);
  for (const auto& [topic, match] : result.stats.by_topic) CHECK(match.matched == 0);
}

TEST_CASE("tag_corpus stats match a brute-force scan on a synthetic corpus") {
  const auto synth = [&] {
    synthgen::SynthConfig cfg;
    cfg.n_users = 30;
    cfg.seed = 17;
    cfg.tweets_per_user_min = 5;
    cfg.tweets_per_user_max = 15;
    return synthgen::generate(cfg);
  }();
  const auto docs = synthgen::builtin_newsgroup_documents(20, 5);
  const auto model = TopicModel::train(docs, TopicAlgorithm::multinomial_nb);
  const auto mapping = TaxonomyMapping::standard();
  const OfflineStubTagger stub(&model, &mapping);
  const auto result = tag_corpus(synth.corpus, model, stub, mapping, 0.0, 4);

  // Brute force: per tweet, recompute both sides and compare mapped topics.
  std::map<UnifiedTopic, std::size_t> matched;
  for (const auto& [id, tweet] : synth.corpus.tweets) {
    const auto ext = stub.analyze(tweet.text);
    const auto ng = model.classify(tweet.text);
    if (ext.categories.empty() || !ng.label) continue;
    const auto ta = mapping.map(Source::external, ext.categories.front().first);
    const auto tb = mapping.map(Source::newsgroup, *ng.label);
    if (ta && tb && *ta == *tb) ++matched[*ta];
  }
  std::size_t total_matched = 0;
  for (const auto& [topic, count] : matched) {
    CHECK(result.stats.by_topic.at(topic).matched == count);
    total_matched += count;
  }
  CHECK(result.stats.accepted == total_matched);
  // matched <= min(count_a, count_b) per topic.
  for (const auto& [topic, m] : result.stats.by_topic) {
    CHECK(m.matched <= m.count_a);
    CHECK(m.matched <= m.count_b);
  }
  // Parallel equals serial.
  const auto serial = tag_corpus(synth.corpus, model, stub, mapping, 0.0, 1);
  CHECK(serial.assignments.size() == result.assignments.size());
  for (const auto& [id, a] : serial.assignments) {
    const auto& b = result.assignments.at(id);
    CHECK(a.accepted == b.accepted);
    CHECK(a.topic == b.topic);
  }
}

TEST_CASE("assignments CSV round-trip") {
  TempDir dir("assign");
  std::map<std::string, TopicAssignment> assignments;
  TopicAssignment a;
  a.tweet_id = "t1";
  a.topic = UnifiedTopic::science;
  a.accepted = true;
  a.source_a = {"/science", 0.75};
  a.source_b = {"sci.med", 0.5};
  assignments.emplace(a.tweet_id, a);
  TopicAssignment b;
  b.tweet_id = "t2";
  b.accepted = false;
  assignments.emplace(b.tweet_id, b);

  const auto path = dir.path("assignments.csv");
  write_assignments_csv(assignments, path);
  const auto restored = read_assignments_csv(path);
  REQUIRE(restored.size() == 2);
  CHECK(restored.at("t1").accepted);
  CHECK(restored.at("t1").topic == UnifiedTopic::science);
  CHECK(restored.at("t1").source_a.label == "/science");
  CHECK(restored.at("t1").source_b.score == 0.5);
  CHECK_FALSE(restored.at("t2").accepted);
  CHECK_FALSE(restored.at("t2").topic.has_value());
}

TEST_CASE("http tagger speaks the wire contract") {
  httplib::Server server;
  std::atomic<int> hits{0};
  server.Post("/", [&](const httplib::Request& req, httplib::Response& res) {
    ++hits;
    const auto body = nlohmann::json::parse(req.body);
    REQUIRE(body.contains("text"));
    nlohmann::json out;
    out["categories"] = {{{"label", "/sports/hockey"}, {"score", 0.91}},
                         {{"label", "/news"}, {"score", 0.2}}};
    out["sentiment"] = {{"score", 0.53}};
    res.set_content(out.dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread runner([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  const HttpTagger tagger("http://127.0.0.1:" + std::to_string(port));
  const auto result = tagger.analyze("slapshot rebound goal");
  REQUIRE(result.categories.size() == 2);
  CHECK(result.categories.front().first == "/sports/hockey");
  CHECK(result.categories.front().second == doctest::Approx(0.91));
  REQUIRE(result.sentiment.has_value());
  CHECK(*result.sentiment == doctest::Approx(0.53));
  CHECK(hits == 1);

  server.stop();
  runner.join();
}

TEST_CASE("newsgroups directory loader") {
  TempDir dir("ng");
  namespace fs = std::filesystem;
  fs::create_directories(dir.path("rec.autos"));
  fs::create_directories(dir.path("sci.med"));
  write_text(dir.path("rec.autos") + "/001", "engine torque");
  write_text(dir.path("rec.autos") + "/002", "sedan dealer");
  write_text(dir.path("sci.med") + "/001", "doctor patient");
  const auto docs = load_newsgroups_dir(dir.path());
  REQUIRE(docs.size() == 3);
  CHECK(docs[0].label == "rec.autos");
  CHECK(docs[2].label == "sci.med");
  CHECK(docs[2].text == "doctor patient");
  CHECK_THROWS_AS(load_newsgroups_dir(dir.path("missing")), DataError);
}
