#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "spamlens/csv.hpp"
#include "spamlens/topics.hpp"
#include "spamlens/util.hpp"

namespace spamlens::topics {
namespace {

using textproc::SparseVec;

double logsumexp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (const double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

struct TrainingSet {
  std::vector<SparseVec> x;
  std::vector<int> y;
  std::vector<std::string> classes;
};

TrainingSet vectorize(const std::vector<LabeledDoc>& docs,
                      const textproc::TokenizerConfig& tok,
                      textproc::Vectorizer& vectorizer_out) {
  std::vector<std::vector<std::string>> token_docs;
  token_docs.reserve(docs.size());
  for (const auto& d : docs) token_docs.push_back(textproc::tokenize(d.text, tok));
  vectorizer_out = textproc::Vectorizer::fit(token_docs, tok);

  TrainingSet set;
  std::map<std::string, int> class_index;
  for (const auto& d : docs) class_index.emplace(d.label, 0);
  if (class_index.size() < 2)
    throw DataError("train_topic_classifier: need at least 2 classes, got " +
                    std::to_string(class_index.size()));
  int next = 0;
  for (auto& [label, idx] : class_index) {
    idx = next++;
    set.classes.push_back(label);
  }
  set.x.reserve(docs.size());
  set.y.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    set.x.push_back(vectorizer_out.transform(token_docs[i]));
    set.y.push_back(class_index[docs[i].label]);
  }
  return set;
}

// Class scores for one document given dense per-class weights and biases.
std::vector<double> raw_scores(const SparseVec& x,
                               const std::vector<std::vector<double>>& weights,
                               const std::vector<double>& bias) {
  std::vector<double> out(weights.size());
  for (std::size_t c = 0; c < weights.size(); ++c) {
    double s = bias[c];
    for (const auto& [idx, v] : x.entries) s += weights[c][idx] * v;
    out[c] = s;
  }
  return out;
}

void train_multinomial_nb(const TrainingSet& set, double alpha,
                          std::vector<std::vector<double>>& weights,
                          std::vector<double>& bias) {
  const std::size_t n_classes = set.classes.size();
  const std::size_t vocab = weights.front().size();
  std::vector<std::vector<double>> feature_sum(n_classes,
                                               std::vector<double>(vocab, 0.0));
  std::vector<double> class_count(n_classes, 0.0);
  for (std::size_t i = 0; i < set.x.size(); ++i) {
    const int c = set.y[i];
    class_count[c] += 1.0;
    for (const auto& [idx, v] : set.x[i].entries) feature_sum[c][idx] += v;
  }
  for (std::size_t c = 0; c < n_classes; ++c) {
    const double total =
        std::accumulate(feature_sum[c].begin(), feature_sum[c].end(), 0.0);
    const double denom = std::log(total + alpha * static_cast<double>(vocab));
    for (std::size_t j = 0; j < vocab; ++j)
      weights[c][j] = std::log(feature_sum[c][j] + alpha) - denom;
    bias[c] = std::log(class_count[c] / static_cast<double>(set.x.size()));
  }
}

// Softmax regression, mini-batch SGD on cross-entropy with L2. The L2 decay
// is applied through a lazy scale factor so updates stay sparse.
std::vector<double> train_sgd_softmax(const TrainingSet& set,
                                      const TopicHyperParams& hp,
                                      std::vector<std::vector<double>>& weights,
                                      std::vector<double>& bias) {
  const std::size_t n = set.x.size();
  const std::size_t n_classes = set.classes.size();
  Rng rng(hp.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  double scale = 1.0;
  std::vector<double> curve;
  const auto unscale = [&] {
    for (auto& row : weights)
      for (double& w : row) w *= scale;
    scale = 1.0;
  };

  std::size_t step = 0;
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += hp.batch_size) {
      const std::size_t end = std::min(n, start + hp.batch_size);
      const double bs = static_cast<double>(end - start);
      const double lr = hp.learning_rate / (1.0 + 0.01 * static_cast<double>(step));
      ++step;

      // L2 shrinkage for the whole batch, folded into the scale factor.
      if (hp.l2 > 0.0) scale *= 1.0 - lr * hp.l2;
      if (scale < 1e-9) unscale();

      std::vector<std::vector<std::pair<int, double>>> grads(n_classes);
      std::vector<double> bias_grad(n_classes, 0.0);
      for (std::size_t bi = start; bi < end; ++bi) {
        const auto& x = set.x[order[bi]];
        std::vector<double> scores(n_classes);
        for (std::size_t c = 0; c < n_classes; ++c) {
          double s = bias[c];
          for (const auto& [idx, v] : x.entries) s += scale * weights[c][idx] * v;
          scores[c] = s;
        }
        const double lse = logsumexp(scores);
        epoch_loss += lse - scores[set.y[order[bi]]];
        for (std::size_t c = 0; c < n_classes; ++c) {
          const double p = std::exp(scores[c] - lse);
          const double g = p - (set.y[order[bi]] == static_cast<int>(c) ? 1.0 : 0.0);
          if (g == 0.0) continue;
          bias_grad[c] += g;
          for (const auto& [idx, v] : x.entries) grads[c].emplace_back(idx, g * v);
        }
      }
      for (std::size_t c = 0; c < n_classes; ++c) {
        bias[c] -= lr * bias_grad[c] / bs;
        for (const auto& [idx, g] : grads[c]) weights[c][idx] -= lr * g / (bs * scale);
      }
    }
    curve.push_back(epoch_loss / static_cast<double>(n));
  }
  unscale();
  return curve;
}

// One-vs-rest binary logistic fits sharing the SGD machinery.
std::vector<double> train_logistic_ovr(const TrainingSet& set,
                                       const TopicHyperParams& hp,
                                       std::vector<std::vector<double>>& weights,
                                       std::vector<double>& bias) {
  const std::size_t n = set.x.size();
  const std::size_t n_classes = set.classes.size();
  std::vector<double> curve(hp.epochs, 0.0);
  for (std::size_t c = 0; c < n_classes; ++c) {
    Rng rng(Rng::derive(hp.seed, c));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::size_t step = 0;
    for (int epoch = 0; epoch < hp.epochs; ++epoch) {
      rng.shuffle(order);
      double epoch_loss = 0.0;
      for (std::size_t start = 0; start < n; start += hp.batch_size) {
        const std::size_t end = std::min(n, start + hp.batch_size);
        const double bs = static_cast<double>(end - start);
        const double lr = hp.learning_rate / (1.0 + 0.01 * static_cast<double>(step));
        ++step;
        std::vector<std::pair<int, double>> grad;
        double bias_grad = 0.0;
        for (std::size_t bi = start; bi < end; ++bi) {
          const auto& x = set.x[order[bi]];
          const double target = set.y[order[bi]] == static_cast<int>(c) ? 1.0 : 0.0;
          double s = bias[c];
          for (const auto& [idx, v] : x.entries) s += weights[c][idx] * v;
          const double p = 1.0 / (1.0 + std::exp(-s));
          epoch_loss += -(target * std::log(std::max(p, 1e-12)) +
                          (1.0 - target) * std::log(std::max(1.0 - p, 1e-12)));
          const double g = p - target;
          if (g == 0.0) continue;
          bias_grad += g;
          for (const auto& [idx, v] : x.entries) grad.emplace_back(idx, g * v);
        }
        bias[c] -= lr * bias_grad / bs;
        for (const auto& [idx, g] : grad) {
          weights[c][idx] -= lr * (g / bs + hp.l2 * weights[c][idx]);
        }
      }
      curve[epoch] += epoch_loss / static_cast<double>(n * n_classes);
    }
  }
  return curve;
}

}  // namespace

TopicModel TopicModel::train(const std::vector<LabeledDoc>& docs,
                             TopicAlgorithm algorithm, const TopicHyperParams& hp,
                             const textproc::TokenizerConfig& tok) {
  TopicModel m;
  m.algorithm_ = algorithm;
  TrainingSet set = vectorize(docs, tok, m.vectorizer_);
  m.classes_ = set.classes;
  m.weights_.assign(set.classes.size(),
                    std::vector<double>(m.vectorizer_.vocab_size(), 0.0));
  m.bias_.assign(set.classes.size(), 0.0);

  switch (algorithm) {
    case TopicAlgorithm::multinomial_nb:
      train_multinomial_nb(set, hp.alpha, m.weights_, m.bias_);
      break;
    case TopicAlgorithm::sgd_softmax:
      m.training_curve_ = train_sgd_softmax(set, hp, m.weights_, m.bias_);
      break;
    case TopicAlgorithm::logistic_regression:
      m.training_curve_ = train_logistic_ovr(set, hp, m.weights_, m.bias_);
      break;
  }

  std::size_t correct = 0;
  for (std::size_t i = 0; i < set.x.size(); ++i) {
    const auto scores = raw_scores(set.x[i], m.weights_, m.bias_);
    const auto best = std::max_element(scores.begin(), scores.end());
    if (static_cast<int>(best - scores.begin()) == set.y[i]) ++correct;
  }
  m.training_accuracy_ =
      static_cast<double>(correct) / static_cast<double>(set.x.size());
  return m;
}

std::vector<double> TopicModel::class_probabilities(const std::string& text) const {
  const auto tokens = textproc::tokenize(text, vectorizer_.config());
  const SparseVec x = vectorizer_.transform(tokens);
  if (x.entries.empty()) return {};
  auto scores = raw_scores(x, weights_, bias_);
  std::vector<double> probs(scores.size());
  switch (algorithm_) {
    case TopicAlgorithm::multinomial_nb:
    case TopicAlgorithm::sgd_softmax: {
      const double lse = logsumexp(scores);
      for (std::size_t c = 0; c < scores.size(); ++c)
        probs[c] = std::exp(scores[c] - lse);
      break;
    }
    case TopicAlgorithm::logistic_regression: {
      // One-vs-rest sigmoids normalized to sum to one.
      double total = 0.0;
      for (std::size_t c = 0; c < scores.size(); ++c) {
        probs[c] = 1.0 / (1.0 + std::exp(-scores[c]));
        total += probs[c];
      }
      if (total <= 0.0) {
        std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(probs.size()));
      } else {
        for (double& p : probs) p /= total;
      }
      break;
    }
  }
  return probs;
}

Classification TopicModel::classify(const std::string& text) const {
  const auto probs = class_probabilities(text);
  if (probs.empty()) return {};  // no-signal
  std::size_t best = 0;
  for (std::size_t c = 1; c < probs.size(); ++c) {
    if (probs[c] > probs[best] ||
        (probs[c] == probs[best] && classes_[c] < classes_[best]))
      best = c;
  }
  return {classes_[best], probs[best]};
}

double TopicModel::accuracy(const std::vector<LabeledDoc>& docs) const {
  if (docs.empty()) throw DataError("accuracy: empty document set");
  std::size_t correct = 0;
  for (const auto& d : docs) {
    const auto c = classify(d.text);
    if (c.label && *c.label == d.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(docs.size());
}

std::string TopicModel::to_json() const {
  nlohmann::ordered_json j;
  j["model_format_version"] = 1;
  j["kind"] = "topic_model";
  j["algorithm"] = topics::to_string(algorithm_);
  j["classes"] = classes_;
  j["bias"] = bias_;
  j["weights"] = weights_;
  j["training_accuracy"] = training_accuracy_;
  j["training_curve"] = training_curve_;
  j["vectorizer"] = nlohmann::ordered_json::parse(vectorizer_.to_json());
  return j.dump();
}

TopicModel TopicModel::from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("topic model: invalid JSON: ") + e.what());
  }
  if (!j.contains("model_format_version") || j["model_format_version"] != 1)
    throw DataError("topic model: missing or unsupported model_format_version");
  TopicModel m;
  const auto algo = parse_topic_algorithm(j.at("algorithm").get<std::string>());
  if (!algo) throw DataError("topic model: unknown algorithm");
  m.algorithm_ = *algo;
  m.classes_ = j.at("classes").get<std::vector<std::string>>();
  m.bias_ = j.at("bias").get<std::vector<double>>();
  m.weights_ = j.at("weights").get<std::vector<std::vector<double>>>();
  m.training_accuracy_ = j.at("training_accuracy").get<double>();
  m.training_curve_ = j.at("training_curve").get<std::vector<double>>();
  m.vectorizer_ = textproc::Vectorizer::from_json(j.at("vectorizer").dump());
  if (m.weights_.size() != m.classes_.size() || m.bias_.size() != m.classes_.size())
    throw DataError("topic model: parameter block count mismatch");
  for (const auto& row : m.weights_) {
    if (static_cast<int>(row.size()) != m.vectorizer_.vocab_size())
      throw DataError("topic model: weight width mismatch");
  }
  return m;
}

void TopicModel::save(const std::string& path) const { write_file(path, to_json()); }

TopicModel TopicModel::load(const std::string& path) {
  return from_json(read_file(path));
}

}  // namespace spamlens::topics
