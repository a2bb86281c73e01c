#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "spamlens/eval.hpp"
#include "spamlens/util.hpp"

using namespace spamlens;
using namespace spamlens::eval;
using spamlens::features::FeatureMatrix;
using spamlens::features::FeatureRow;
using spamlens::features::FeatureVector;

namespace {

// Independent oracles. These re-derive every metric from first principles
// and must never share code with the implementation under test.

ConfusionCounts confusion_oracle(const std::vector<double>& p,
                                 const std::vector<int>& y, double thr) {
  ConfusionCounts c;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] >= thr && y[i] == 1) ++c.tp;
    if (p[i] >= thr && y[i] == 0) ++c.fp;
    if (p[i] < thr && y[i] == 1) ++c.fn;
    if (p[i] < thr && y[i] == 0) ++c.tn;
  }
  return c;
}

double auc_pairwise_oracle(const std::vector<double>& s,
                           const std::vector<int>& y) {
  double wins = 0.0;
  std::int64_t pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != 0) continue;
      ++pairs;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

double apk_oracle(const std::vector<int>& relevance, int k, int total_relevant) {
  if (total_relevant == 0) return 0.0;
  double sum = 0.0;
  int hits = 0;
  for (int i = 0; i < k; ++i) {
    if (relevance[i] == 1) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(std::min(k, total_relevant));
}

FeatureRow row_of(const std::string& id, const std::array<double, 18>& x,
                  int label) {
  FeatureRow row;
  row.user_id = id;
  row.fv.x = x;
  row.fv.designated_tweet_count = 40;
  row.label = label;
  return row;
}

const std::array<double, 18> kSpammer1 = {
    18861, 538, 101, 34, 21, 5, 0.699, 16, 66, 45, 6.947, -1.013,
    910,   253, 0.073, 335, 201, 118};
const std::array<double, 18> kSpammer2 = {
    12767, 766, 62, 21, 20, 3, 0.47, 11, 128, 95, 11.821, -11.53,
    952,   767, 0.013, 133, 97, 43};
const std::array<double, 18> kSpammer3 = {
    19914, 238, 212, 83, 56, 8, 0, 42, 7, 250, 5.76, -45.52,
    581,   417, 0.028, 720, 408, 304};

// 100 synthetic legitimate users: active in 2-3 topics, high engagement,
// diverse hosts, strong followers and old accounts.
FeatureMatrix table7_among_legitimates() {
  FeatureMatrix m;
  Rng rng(404);
  for (int i = 0; i < 100; ++i) {
    std::array<double, 18> x{};
    const double words = rng.uniform(2000, 9000);
    x[0] = words;
    x[1] = words * rng.uniform(0.3, 0.6);
    x[2] = rng.uniform(150, 600);             // urls
    x[3] = x[2] * rng.uniform(0.7, 0.95);     // unique urls
    x[4] = x[3] * rng.uniform(0.5, 0.9);      // unique hosts
    x[5] = rng.uniform_int(2, 3);             // topic frequency mid-range
    x[6] = std::log10(8.0 / x[5]);
    x[7] = rng.uniform(200, 900);             // retweets
    x[8] = rng.uniform(300, 1500);            // likes
    x[9] = rng.uniform(120, 600);             // replies
    x[10] = rng.uniform(30, 120);             // positive sentiment sum
    x[11] = -rng.uniform(0.0, 0.6);           // barely any negativity
    x[12] = rng.uniform(200, 6000);           // followers (legit can be low too)
    x[13] = rng.uniform(100, 900);            // friends
    x[14] = (x[12] - x[13]) / x[12] * rng.uniform(5.0, 12.0) / 100.0;
    x[15] = rng.uniform(20, 90);
    x[16] = x[15] * rng.uniform(0.6, 0.95);
    x[17] = rng.uniform(0.1, 1.2);
    m.rows.push_back(row_of("legit" + std::to_string(100 + i), x, 0));
  }
  m.rows.push_back(row_of("spammer1", kSpammer1, 1));
  m.rows.push_back(row_of("spammer2", kSpammer2, 1));
  m.rows.push_back(row_of("spammer3", kSpammer3, 1));
  return m;
}

std::map<std::string, int> labels_of(const FeatureMatrix& m) {
  std::map<std::string, int> labels;
  for (const auto& row : m.rows) labels[row.user_id] = *row.label;
  return labels;
}

}  // namespace

TEST_CASE("confusion: hand-counted example and boundaries") {
  const std::vector<double> p = {0.9, 0.8, 0.2, 0.1};
  const std::vector<int> y = {1, 0, 1, 0};
  const auto c = confusion(p, y, 0.5);
  CHECK(c.tp == 1);
  CHECK(c.fp == 1);
  CHECK(c.fn == 1);
  CHECK(c.tn == 1);
  // Perfect predictions.
  const auto perfect = confusion(std::vector<double>{0.9, 0.1, 0.8}, std::vector<int>{1, 0, 1}, 0.5);
  CHECK(perfect.fp == 0);
  CHECK(perfect.fn == 0);
  // Threshold 0 predicts everything positive.
  const auto all_pos = confusion(p, y, 0.0);
  CHECK(all_pos.fn == 0);
  CHECK(all_pos.tn == 0);
  CHECK_THROWS_AS(confusion(std::vector<double>{0.5}, std::vector<int>{1, 0}, 0.5), DataError);
  CHECK_THROWS_AS(confusion(p, y, 1.5), DataError);
}

TEST_CASE("prf: hand example, perfect case, degenerate flags") {
  const auto m = prf_metrics({8, 88, 2, 2});
  CHECK(m.accuracy == doctest::Approx(0.96).epsilon(1e-12));
  CHECK(m.precision == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(m.recall == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(m.f1 == doctest::Approx(0.8).epsilon(1e-12));

  const auto perfect = prf_metrics({42, 0, 0, 0});
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);

  ConfusionCounts degenerate;
  degenerate.fn = 5;
  const auto d = prf_metrics(degenerate);
  CHECK(d.precision == 0.0);
  CHECK_FALSE(d.precision_defined);
  CHECK(d.recall == 0.0);
  CHECK(d.recall_defined);

  CHECK_THROWS_AS(prf_metrics({}), DataError);
}

TEST_CASE("confusion+prf agree with the counting oracle on 1000 random sets") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(1, 60));
    std::vector<double> p(n);
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) {
      p[i] = rng.uniform();
      if (rng.uniform() < 0.3) p[i] = std::round(p[i] * 4.0) / 4.0;  // ties
      y[i] = rng.uniform() < 0.4 ? 1 : 0;
    }
    const double thr = rng.uniform();
    const auto ours = confusion(p, y, thr);
    const auto oracle = confusion_oracle(p, y, thr);
    CHECK(ours == oracle);
    const auto metrics = prf_metrics(ours);
    CHECK(metrics.accuracy ==
          static_cast<double>(oracle.tp + oracle.tn) / static_cast<double>(n));
    if (oracle.tp + oracle.fp > 0)
      CHECK(metrics.precision ==
            static_cast<double>(oracle.tp) /
                static_cast<double>(oracle.tp + oracle.fp));
    if (oracle.tp + oracle.fn > 0)
      CHECK(metrics.recall == static_cast<double>(oracle.tp) /
                                  static_cast<double>(oracle.tp + oracle.fn));
    // Both F-score forms agree: tp/(tp + (fp+fn)/2) == 2PR/(P+R).
    if (metrics.precision_defined && metrics.recall_defined &&
        metrics.precision + metrics.recall > 0) {
      CHECK(metrics.f1 == doctest::Approx(2.0 * metrics.precision * metrics.recall /
                                          (metrics.precision + metrics.recall))
                              .epsilon(1e-12));
    }
  }
}

TEST_CASE("roc_auc: forced and statistical cases") {
  // Perfect separation.
  const auto perfect =
      roc_auc(std::vector<double>{0.9, 0.8, 0.2, 0.1}, std::vector<int>{1, 1, 0, 0});
  CHECK(perfect.auc == doctest::Approx(1.0));
  CHECK(perfect.points.front().fpr == 0.0);
  CHECK(perfect.points.back().tpr == 1.0);
  // Single-class label vectors are rejected.
  CHECK_THROWS_AS(roc_auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}),
                  DataError);
  // Independent scores: auc ~ 0.5.
  Rng rng(5);
  const int n = 4000;
  std::vector<double> s(n);
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    s[i] = rng.uniform();
    y[i] = rng.uniform() < 0.5 ? 1 : 0;
  }
  y[0] = 1;
  y[1] = 0;
  CHECK(roc_auc(s, y).auc == doctest::Approx(0.5).epsilon(0.1));
  CHECK(std::abs(roc_auc(s, y).auc - 0.5) < 0.05);
}

TEST_CASE("roc_auc equals the all-pairs oracle within 1e-9 (n <= 500)") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(5, 500));
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) {
      s[i] = rng.uniform();
      if (rng.uniform() < 0.4) s[i] = std::round(s[i] * 8.0) / 8.0;  // heavy ties
      y[i] = rng.uniform() < 0.35 ? 1 : 0;
    }
    y[0] = 1;
    y[1] = 0;
    const double ours = roc_auc(s, y).auc;
    const double oracle = auc_pairwise_oracle(s, y);
    CHECK(std::abs(ours - oracle) < 1e-9);
  }
}

TEST_CASE("roc_auc is invariant under strictly monotone score transforms") {
  Rng rng(17);
  const int n = 200;
  std::vector<double> s(n);
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    s[i] = rng.uniform();
    y[i] = rng.uniform() < 0.5 ? 1 : 0;
  }
  y[0] = 1;
  y[1] = 0;
  std::vector<double> warped(n);
  for (int i = 0; i < n; ++i) warped[i] = std::exp(3.0 * s[i]) + 7.0;
  CHECK(roc_auc(s, y).auc == doctest::Approx(roc_auc(warped, y).auc).epsilon(1e-12));
}

TEST_CASE("make_ranking orders by score desc, user asc; duplicates rejected") {
  auto r = make_ranking(RankMethod::model,
                        {{"b", 0.5}, {"a", 0.5}, {"c", 0.9}, {"d", 0.1}});
  CHECK(r.entries[0].first == "c");
  CHECK(r.entries[1].first == "a");
  CHECK(r.entries[2].first == "b");
  CHECK(r.entries[3].first == "d");
  CHECK_THROWS_AS(make_ranking(RankMethod::model, {{"a", 0.5}, {"a", 0.4}}),
                  DataError);
}

TEST_CASE("precision_at_k: table-style examples") {
  // Ten retrieved users, all spammers: P@10 = 1.
  std::vector<std::pair<std::string, double>> entries;
  std::map<std::string, int> labels;
  for (int i = 0; i < 12; ++i) {
    const std::string id = "u" + std::to_string(10 + i);
    entries.emplace_back(id, 1.0 - i * 0.01);
    labels[id] = i < 10 ? 1 : 0;
  }
  const auto ranking = make_ranking(RankMethod::ddf, entries);
  CHECK(precision_at_k(ranking, labels, 10) == 1.0);
  // Three of the first ten: P@10 = 0.3.
  std::map<std::string, int> sparse = labels;
  for (int i = 0; i < 12; ++i) sparse["u" + std::to_string(10 + i)] = i < 3 ? 1 : 0;
  CHECK(precision_at_k(ranking, sparse, 10) == doctest::Approx(0.3));
  // k = full length gives overall prevalence.
  CHECK(precision_at_k(ranking, sparse, 12) == doctest::Approx(3.0 / 12.0));
  CHECK_THROWS_AS(precision_at_k(ranking, labels, 0), DataError);
  CHECK_THROWS_AS(precision_at_k(ranking, labels, 13), DataError);
}

TEST_CASE("average_precision_at_k: hand example 0.9167") {
  // Relevance by rank: 1,1,0,1,0 with 3 spammers total.
  std::vector<std::pair<std::string, double>> entries = {
      {"a", 0.9}, {"b", 0.8}, {"c", 0.7}, {"d", 0.6}, {"e", 0.5}};
  const std::map<std::string, int> labels = {
      {"a", 1}, {"b", 1}, {"c", 0}, {"d", 1}, {"e", 0}};
  const auto ranking = make_ranking(RankMethod::ddf, entries);
  CHECK(average_precision_at_k(ranking, labels, 5) ==
        doctest::Approx((1.0 + 1.0 + 0.75) / 3.0).epsilon(1e-12));
  // Top-k all relevant with >= k relevant items in total.
  const std::map<std::string, int> all_rel = {
      {"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}, {"e", 1}};
  CHECK(average_precision_at_k(ranking, all_rel, 3) == 1.0);
  // No spammers at all: AP = 0.
  const std::map<std::string, int> none = {
      {"a", 0}, {"b", 0}, {"c", 0}, {"d", 0}, {"e", 0}};
  CHECK(average_precision_at_k(ranking, none, 5) == 0.0);
}

TEST_CASE("AP@k matches the brute-force oracle over 1000 random rankings") {
  Rng rng(91);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 20;
    std::vector<std::pair<std::string, double>> entries;
    std::map<std::string, int> labels;
    std::vector<int> relevance;
    int total_relevant = 0;
    for (int i = 0; i < n; ++i) {
      const std::string id = "u" + std::to_string(100 + i);
      entries.emplace_back(id, static_cast<double>(n - i));  // fixed order
      const int rel = rng.uniform() < 0.35 ? 1 : 0;
      labels[id] = rel;
      relevance.push_back(rel);
      total_relevant += rel;
    }
    const auto ranking = make_ranking(RankMethod::dif, entries);
    const int k = static_cast<int>(rng.uniform_int(1, n));
    const double ours = average_precision_at_k(ranking, labels, k);
    const double oracle = apk_oracle(relevance, k, total_relevant);
    CHECK(std::abs(ours - oracle) < 1e-12);
  }
}

TEST_CASE("AP@k properties: perfect prefix iff 1; tail permutation invariance") {
  Rng rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 15;
    std::vector<int> relevance(n);
    int total = 0;
    for (auto& r : relevance) {
      r = rng.uniform() < 0.4 ? 1 : 0;
      total += r;
    }
    if (total == 0) relevance[static_cast<std::size_t>(rng.uniform_int(0, n - 1))] = total = 1;
    const int k = static_cast<int>(rng.uniform_int(1, n));
    const double ap = apk_oracle(relevance, k, total);
    CHECK(ap <= 1.0 + 1e-15);
    // == 1 iff the top-min(k, R) ranks are all relevant.
    const int m = std::min(k, total);
    bool perfect_prefix = true;
    for (int i = 0; i < m; ++i) perfect_prefix &= relevance[i] == 1;
    CHECK((std::abs(ap - 1.0) < 1e-12) == perfect_prefix);
  }

  // Permutation below rank k leaves P@k and AP@k unchanged.
  std::vector<std::pair<std::string, double>> entries;
  std::map<std::string, int> labels;
  for (int i = 0; i < 12; ++i) {
    const std::string id = "u" + std::to_string(i);
    entries.emplace_back(id, 100.0 - i);
    labels[id] = i % 3 == 0 ? 1 : 0;
  }
  const auto base = make_ranking(RankMethod::ddf, entries);
  auto shuffled_entries = entries;
  std::swap(shuffled_entries[8].second, shuffled_entries[11].second);
  const auto shuffled = make_ranking(RankMethod::ddf, shuffled_entries);
  for (const int k : {3, 5, 7}) {
    CHECK(precision_at_k(base, labels, k) == precision_at_k(shuffled, labels, k));
    CHECK(average_precision_at_k(base, labels, k) ==
          average_precision_at_k(shuffled, labels, k));
  }
}

TEST_CASE("low_in_degree ranks fewest-followers first") {
  FeatureMatrix m;
  std::array<double, 18> x{};
  x[12] = 5;
  m.rows.push_back(row_of("small", x, 1));
  x[12] = 500;
  m.rows.push_back(row_of("mid", x, 0));
  x[12] = 50000;
  m.rows.push_back(row_of("large", x, 0));
  const auto ranking = rank_baseline(RankMethod::low_in_degree, m);
  CHECK(ranking.entries[0].first == "small");
  CHECK(ranking.entries[2].first == "large");
}

TEST_CASE("dfm: reputation on the Table 7 Spammer1 counts") {
  FeatureMatrix m = table7_among_legitimates();
  const auto ranking = rank_baseline(RankMethod::dfm, m);
  // Reputation itself: 910/1163.
  const double reputation = 910.0 / (910.0 + 253.0);
  CHECK(reputation == doctest::Approx(0.7824).epsilon(1e-4));
  // The ranking runs and scores stay in [0,1].
  for (const auto& [user, score] : ranking.entries) {
    CHECK(score >= 0.0);
    CHECK(score <= 1.0);
  }
  // DFM needs tweet counts; stripping them is an error.
  for (auto& row : m.rows) row.fv.designated_tweet_count = -1;
  CHECK_THROWS_WITH_AS(rank_baseline(RankMethod::dfm, m),
                       doctest::Contains("missing"), DataError);
}

TEST_CASE("ddf puts the Table 7 spammers in the top decile; low in-degree fails") {
  const FeatureMatrix m = table7_among_legitimates();
  const auto labels = labels_of(m);
  const std::size_t decile = m.rows.size() / 10;  // 10 of 103

  const auto ddf = rank_baseline(RankMethod::ddf, m);
  std::size_t found = 0;
  for (std::size_t i = 0; i < decile; ++i) {
    const auto& user = ddf.entries[i].first;
    if (user.rfind("spammer", 0) == 0) ++found;
  }
  CHECK(found == 3);

  const auto low = rank_baseline(RankMethod::low_in_degree, m);
  std::size_t low_found = 0;
  for (std::size_t i = 0; i < decile; ++i) {
    if (low.entries[i].first.rfind("spammer", 0) == 0) ++low_found;
  }
  CHECK(low_found < 3);
}

TEST_CASE("baseline scores are invariant under monotone column transforms") {
  FeatureMatrix m = table7_among_legitimates();
  for (const auto method :
       {RankMethod::ddf, RankMethod::dif, RankMethod::low_in_degree}) {
    CAPTURE(to_string(method));
    const auto before = rank_baseline(method, m);
    FeatureMatrix warped = m;
    for (auto& row : warped.rows) {
      for (int j = 0; j < 18; ++j) {
        // Strictly increasing transform per column.
        row.fv.x[j] = std::atan(row.fv.x[j] / 1000.0) * 5.0 + 2.0;
      }
    }
    const auto after = rank_baseline(method, warped);
    REQUIRE(before.entries.size() == after.entries.size());
    for (std::size_t i = 0; i < before.entries.size(); ++i)
      CHECK(before.entries[i].first == after.entries[i].first);
  }
}

TEST_CASE("rank_baseline rejects the model pseudo-method and empty input") {
  FeatureMatrix empty;
  CHECK_THROWS_AS(rank_baseline(RankMethod::ddf, empty), DataError);
  const FeatureMatrix m = table7_among_legitimates();
  CHECK_THROWS_AS(rank_baseline(RankMethod::model, m), DataError);
}

TEST_CASE("rank method names round-trip") {
  for (const auto m : {RankMethod::model, RankMethod::ddf, RankMethod::dif,
                       RankMethod::low_in_degree, RankMethod::dfm})
    CHECK(parse_rank_method(to_string(m)) == m);
  CHECK_FALSE(parse_rank_method("nope").has_value());
}
