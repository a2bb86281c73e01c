#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spamlens/corpus.hpp"
#include "spamlens/textproc.hpp"

namespace spamlens::topics {

/// The 8 high-level topics shared by both taggers after mapping.
enum class UnifiedTopic {
  technology_and_computing,
  business_and_industrial,
  automotive_and_vehicles,
  sports,
  science,
  news,
  law_govt_and_politics,
  religion_and_spirituality,
};

inline constexpr int kNumTopics = 8;

const std::vector<UnifiedTopic>& all_topics();
std::string to_string(UnifiedTopic t);
std::optional<UnifiedTopic> parse_topic(const std::string& s);

enum class Source { newsgroup, external };

/// Maps the 20 newsgroup labels and external category paths onto the
/// unified taxonomy. External paths map by their top-level segment.
class TaxonomyMapping {
 public:
  static TaxonomyMapping standard();

  /// TSV override: source<TAB>label<TAB>unified_topic per line.
  static TaxonomyMapping from_tsv(const std::string& path);

  std::optional<UnifiedTopic> map(Source source, const std::string& label) const;

  const std::map<std::string, UnifiedTopic>& newsgroup_map() const {
    return newsgroup_;
  }
  const std::map<std::string, UnifiedTopic>& external_map() const {
    return external_;
  }

 private:
  std::map<std::string, UnifiedTopic> newsgroup_;
  std::map<std::string, UnifiedTopic> external_;  // keyed by top-level segment
};

enum class TopicAlgorithm { multinomial_nb, logistic_regression, sgd_softmax };

std::string to_string(TopicAlgorithm a);
std::optional<TopicAlgorithm> parse_topic_algorithm(const std::string& s);

struct TopicHyperParams {
  double alpha = 0.01;          // Laplace smoothing (multinomial_nb)
  int epochs = 20;              // sgd_softmax / logistic_regression
  double learning_rate = 0.5;   // initial step size
  double l2 = 1e-6;             // L2 penalty
  int batch_size = 64;
  std::uint64_t seed = 7;
};

struct LabeledDoc {
  std::string label;
  std::string text;
};

/// One classifier decision; empty token streams yield the no-signal
/// result (no label, score 0).
struct Classification {
  std::optional<std::string> label;
  double score = 0.0;
};

class TopicModel {
 public:
  /// Trains on labeled documents. Throws DataError when fewer than two
  /// classes are present or no document survives tokenization.
  static TopicModel train(const std::vector<LabeledDoc>& docs,
                          TopicAlgorithm algorithm,
                          const TopicHyperParams& hp = {},
                          const textproc::TokenizerConfig& tok = {});

  /// Argmax class with its normalized probability; ties broken by
  /// lexicographic class label.
  Classification classify(const std::string& text) const;

  /// Probabilities over all classes (ordered as classes()); empty for
  /// no-signal input.
  std::vector<double> class_probabilities(const std::string& text) const;

  double accuracy(const std::vector<LabeledDoc>& docs) const;

  TopicAlgorithm algorithm() const { return algorithm_; }
  const std::vector<std::string>& classes() const { return classes_; }
  const textproc::Vectorizer& vectorizer() const { return vectorizer_; }
  double training_accuracy() const { return training_accuracy_; }
  /// Mean training loss per epoch (gradient-based algorithms only).
  const std::vector<double>& training_curve() const { return training_curve_; }

  std::string to_json() const;
  static TopicModel from_json(const std::string& json_text);
  void save(const std::string& path) const;
  static TopicModel load(const std::string& path);

 private:
  TopicModel() = default;

  TopicAlgorithm algorithm_ = TopicAlgorithm::multinomial_nb;
  textproc::Vectorizer vectorizer_;
  std::vector<std::string> classes_;
  // One parameter block per class: weights over the vocabulary plus bias.
  // multinomial_nb stores log P(t|c) and log prior in the same layout.
  std::vector<std::vector<double>> weights_;
  std::vector<double> bias_;
  double training_accuracy_ = 0.0;
  std::vector<double> training_curve_;

  friend TopicModel train_impl(const std::vector<LabeledDoc>&, TopicAlgorithm,
                               const TopicHyperParams&,
                               const textproc::TokenizerConfig&);
};

/// Reads a 20-Newsgroups style corpus: one subdirectory per class, one
/// document per file.
std::vector<LabeledDoc> load_newsgroups_dir(const std::string& dir);

/// External tagger result; the sentiment slot is filled only when the
/// backing service reports one.
struct TagResult {
  std::vector<std::pair<std::string, double>> categories;  // (path, score)
  std::optional<double> sentiment;
};

class ExternalTagger {
 public:
  virtual ~ExternalTagger() = default;
  virtual TagResult analyze(const std::string& text) const = 0;
  virtual bool is_stub() const { return false; }
};

/// Offline stand-in: routes the newsgroup model's decision through the
/// mapping and emits it as an external category path. Agreement with the
/// newsgroup side is therefore trivially high; MatchingStats flags it.
class OfflineStubTagger : public ExternalTagger {
 public:
  OfflineStubTagger(const TopicModel* model, const TaxonomyMapping* mapping)
      : model_(model), mapping_(mapping) {}
  TagResult analyze(const std::string& text) const override;
  bool is_stub() const override { return true; }

 private:
  const TopicModel* model_;
  const TaxonomyMapping* mapping_;
};

/// HTTP adapter. POST {"text": ...} -> {"categories":[{"label","score"}],
/// "sentiment":{"score"}}.
class HttpTagger : public ExternalTagger {
 public:
  explicit HttpTagger(const std::string& base_url, int timeout_seconds = 10);
  ~HttpTagger() override;
  TagResult analyze(const std::string& text) const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SourceLabel {
  std::optional<std::string> label;  // category path or newsgroup
  double score = 0.0;
};

struct TopicAssignment {
  std::string tweet_id;
  std::optional<UnifiedTopic> topic;
  SourceLabel source_a;  // external tagger
  SourceLabel source_b;  // newsgroup model
  bool accepted = false;
};

std::optional<UnifiedTopic> map_to_unified(const TaxonomyMapping& mapping,
                                           Source source,
                                           const std::string& label);

/// Accepts iff both sides map to the same unified topic and both scores
/// reach min_score.
TopicAssignment agree_label(const std::string& tweet_id,
                            const TagResult& external_result,
                            const Classification& newsgroup_result,
                            const TaxonomyMapping& mapping,
                            double min_score = 0.0);

struct TopicMatch {
  std::size_t count_a = 0;  // external tagger picked this topic
  std::size_t count_b = 0;  // newsgroup model picked this topic
  std::size_t matched = 0;

  double pct_matching() const {
    return count_a == 0 ? 0.0
                        : static_cast<double>(matched) / static_cast<double>(count_a);
  }
};

struct MatchingStats {
  std::map<UnifiedTopic, TopicMatch> by_topic;
  std::size_t total_tweets = 0;
  std::size_t accepted = 0;
  bool stub_tagger = false;
};

struct TagCorpusResult {
  std::map<std::string, TopicAssignment> assignments;  // by tweet_id
  MatchingStats stats;
};

TagCorpusResult tag_corpus(const corpus::Corpus& corpus, const TopicModel& model,
                           const ExternalTagger& tagger,
                           const TaxonomyMapping& mapping,
                           double min_score = 0.0, int threads = 1);

/// assignments.csv / matching_stats.csv interchange.
void write_assignments_csv(const std::map<std::string, TopicAssignment>& assignments,
                           const std::string& path);
std::map<std::string, TopicAssignment> read_assignments_csv(const std::string& path);
void write_matching_stats_csv(const MatchingStats& stats, const std::string& path);

}  // namespace spamlens::topics
