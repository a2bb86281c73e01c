#include "spamlens/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "spamlens/csv.hpp"
#include "spamlens/util.hpp"

namespace spamlens::eval {
namespace {

/// Mid-rank percentile of each value within its column, scaled to [0,1].
/// All-equal columns sit at 0.5.
std::vector<double> percentiles(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<double> out(n, 0.5);
  if (n < 2) return out;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < n; ++i) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), values[i]);
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), values[i]);
    const double less = static_cast<double>(lo - sorted.begin());
    const double equal = static_cast<double>(hi - lo);
    out[i] = (less + 0.5 * (equal - 1.0)) / static_cast<double>(n - 1);
  }
  return out;
}

double extremity(double pct) { return 2.0 * std::abs(pct - 0.5); }

std::vector<double> column(const features::FeatureMatrix& matrix, int index) {
  std::vector<double> out;
  out.reserve(matrix.rows.size());
  for (const auto& row : matrix.rows) out.push_back(row.fv.x[index]);
  return out;
}

int relevance(const std::map<std::string, int>& labels, const std::string& user) {
  const auto it = labels.find(user);
  if (it == labels.end())
    throw DataError("ranking metrics: no label for user '" + user + "'");
  return it->second;
}

}  // namespace

ConfusionCounts confusion(std::span<const double> predictions,
                          std::span<const int> labels, double threshold) {
  if (predictions.size() != labels.size())
    throw DataError("confusion: prediction/label length mismatch");
  if (threshold < 0.0 || threshold > 1.0)
    throw DataError("confusion: threshold outside [0,1]");
  ConfusionCounts c;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool predicted = predictions[i] >= threshold;
    const bool actual = labels[i] == 1;
    if (predicted && actual) ++c.tp;
    else if (predicted && !actual) ++c.fp;
    else if (!predicted && actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

PrfMetrics prf_metrics(const ConfusionCounts& c) {
  if (c.total() == 0) throw DataError("prf_metrics: empty confusion counts");
  PrfMetrics m;
  m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  if (c.tp + c.fp == 0) {
    m.precision = 0.0;
    m.precision_defined = false;
  } else {
    m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  }
  if (c.tp + c.fn == 0) {
    m.recall = 0.0;
    m.recall_defined = false;
  } else {
    m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  }
  const double denom = static_cast<double>(c.tp) +
                       0.5 * static_cast<double>(c.fp + c.fn);
  if (denom == 0.0) {
    m.f1 = 0.0;
    m.f1_defined = false;
  } else {
    m.f1 = static_cast<double>(c.tp) / denom;
  }
  return m;
}

RocResult roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw DataError("roc_auc: score/label length mismatch");
  std::int64_t pos = 0, neg = 0;
  for (const int y : labels) (y == 1 ? pos : neg)++;
  if (pos == 0 || neg == 0)
    throw DataError("roc_auc: both classes must be present");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  RocResult result;
  result.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::int64_t tp = 0, fp = 0;
  double auc = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    // Consume the whole tie group at this score.
    const double score = scores[order[i]];
    std::int64_t tie_pos = 0, tie_neg = 0;
    while (i < order.size() && scores[order[i]] == score) {
      (labels[order[i]] == 1 ? tie_pos : tie_neg)++;
      ++i;
    }
    const double prev_tpr = static_cast<double>(tp) / static_cast<double>(pos);
    const double prev_fpr = static_cast<double>(fp) / static_cast<double>(neg);
    tp += tie_pos;
    fp += tie_neg;
    const double tpr = static_cast<double>(tp) / static_cast<double>(pos);
    const double fpr = static_cast<double>(fp) / static_cast<double>(neg);
    auc += (fpr - prev_fpr) * 0.5 * (tpr + prev_tpr);
    result.points.push_back({fpr, tpr, score});
  }
  result.auc = auc;
  return result;
}

std::string to_string(RankMethod m) {
  switch (m) {
    case RankMethod::model: return "model";
    case RankMethod::ddf: return "ddf";
    case RankMethod::dif: return "dif";
    case RankMethod::low_in_degree: return "low_in_degree";
    case RankMethod::dfm: return "dfm";
  }
  return "?";
}

std::optional<RankMethod> parse_rank_method(const std::string& s) {
  for (const RankMethod m : {RankMethod::model, RankMethod::ddf, RankMethod::dif,
                             RankMethod::low_in_degree, RankMethod::dfm})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

RankingResult make_ranking(RankMethod method,
                           std::vector<std::pair<std::string, double>> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].first == entries[i - 1].first)
      throw DataError("ranking: duplicate user '" + entries[i].first + "'");
  }
  return {method, std::move(entries)};
}

double precision_at_k(const RankingResult& ranking,
                      const std::map<std::string, int>& labels, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > ranking.entries.size())
    throw DataError("precision_at_k: k out of range");
  std::int64_t hits = 0;
  for (int i = 0; i < k; ++i)
    hits += relevance(labels, ranking.entries[i].first);
  return static_cast<double>(hits) / static_cast<double>(k);
}

double average_precision_at_k(const RankingResult& ranking,
                              const std::map<std::string, int>& labels, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > ranking.entries.size())
    throw DataError("average_precision_at_k: k out of range");
  std::int64_t total_spammers = 0;
  for (const auto& [user, y] : labels) total_spammers += y;
  if (total_spammers == 0) return 0.0;
  const double nk = static_cast<double>(
      std::min<std::int64_t>(k, total_spammers));
  std::int64_t hits = 0;
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    const int rel = relevance(labels, ranking.entries[i].first);
    hits += rel;
    if (rel == 1)
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / nk;
}

RankingResult rank_baseline(RankMethod method,
                            const features::FeatureMatrix& matrix) {
  const std::size_t n = matrix.rows.size();
  if (n == 0) throw DataError("rank_baseline: empty matrix");

  std::vector<std::pair<std::string, double>> entries;
  entries.reserve(n);

  const auto pct_of = [&](int feature_index) {
    return percentiles(column(matrix, feature_index));
  };

  switch (method) {
    case RankMethod::model:
      throw DataError("rank_baseline: 'model' is not a baseline method");
    case RankMethod::low_in_degree: {
      const auto pct13 = pct_of(12);
      for (std::size_t i = 0; i < n; ++i)
        entries.emplace_back(matrix.rows[i].user_id, 1.0 - pct13[i]);
      break;
    }
    case RankMethod::ddf: {
      // Extremes of x6/x7 plus low engagement on the other topic-dependent
      // features; x12 enters by magnitude of negativity.
      const auto pct6 = pct_of(5);
      const auto pct7 = pct_of(6);
      static const int low_features[] = {0, 1, 2, 3, 4, 7, 8, 9, 10, 17};
      std::vector<std::vector<double>> low;
      for (const int j : low_features) low.push_back(pct_of(j));
      std::vector<double> neg12;
      neg12.reserve(n);
      for (const auto& row : matrix.rows) neg12.push_back(-row.fv.x[11]);
      const auto pct_neg12 = percentiles(neg12);
      for (std::size_t i = 0; i < n; ++i) {
        double s = extremity(pct6[i]) + extremity(pct7[i]);
        for (const auto& p : low) s += 1.0 - p[i];
        s += pct_neg12[i];
        entries.emplace_back(matrix.rows[i].user_id,
                             s / static_cast<double>(2 + low.size() + 1));
      }
      break;
    }
    case RankMethod::dif: {
      // All 16 features except x6/x7, lowest values first.
      std::vector<std::vector<double>> pcts;
      for (int j = 0; j < features::kNumFeatures; ++j) {
        if (j == 5 || j == 6) continue;
        pcts.push_back(pct_of(j));
      }
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (const auto& p : pcts) s += 1.0 - p[i];
        entries.emplace_back(matrix.rows[i].user_id,
                             s / static_cast<double>(pcts.size()));
      }
      break;
    }
    case RankMethod::dfm: {
      std::vector<double> url_ratio(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& fv = matrix.rows[i].fv;
        if (fv.designated_tweet_count < 0)
          throw DataError(
              "rank_baseline: dfm needs designated tweet counts (missing "
              "column; load topic_counts.csv)");
        url_ratio[i] =
            fv.x[2] / static_cast<double>(
                          std::max<std::int64_t>(fv.designated_tweet_count, 1));
      }
      const auto pct_url = percentiles(url_ratio);
      const auto pct18 = pct_of(17);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& fv = matrix.rows[i].fv;
        const double fol = fv.x[12], frd = fv.x[13];
        const double reputation = fol + frd > 0.0 ? fol / (fol + frd) : 0.0;
        const double s = (1.0 - reputation) + pct_url[i] + pct18[i];
        entries.emplace_back(matrix.rows[i].user_id, s / 3.0);
      }
      break;
    }
  }
  return make_ranking(method, std::move(entries));
}

void write_ranking_csv(const RankingResult& ranking,
                       const std::map<std::string, int>& labels,
                       const std::string& path) {
  std::ostringstream out;
  out << "rank,user_id,score,label\n";
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    const auto& [user, score] = ranking.entries[i];
    out << (i + 1) << ',' << csv_escape(user) << ',' << format_double(score) << ',';
    const auto it = labels.find(user);
    if (it != labels.end()) out << it->second;
    out << '\n';
  }
  write_file(path, out.str());
}

void write_apk_csv(const std::vector<ApkRow>& rows, const std::string& path) {
  std::ostringstream out;
  out << "method,k,p_at_k,ap_at_k\n";
  for (const auto& row : rows) {
    out << row.method << ',' << row.k << ',' << format_double(row.p_at_k) << ','
        << format_double(row.ap_at_k) << '\n';
  }
  write_file(path, out.str());
}

}  // namespace spamlens::eval
