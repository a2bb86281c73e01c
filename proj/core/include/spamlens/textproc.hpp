#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace spamlens::textproc {

const std::set<std::string>& default_stopwords();

/// Loads a stopword file, one token per line.
std::set<std::string> load_stopwords(const std::string& path);

struct TokenizerConfig {
  bool lowercase = true;
  bool strip_urls = true;
  bool strip_mentions = true;
  int min_token_len = 2;
  std::set<std::string> stopwords = default_stopwords();
};

/// Splits text into tokens: URLs (http/https through the next whitespace)
/// and @-mentions are removed first, then maximal runs of letters/digits
/// are collected. '#' is a separator, so hashtag words survive as plain
/// tokens. Bytes >= 0x80 are treated as letters so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerConfig& config);

/// Sparse vector, entries sorted by column index.
struct SparseVec {
  std::vector<std::pair<int, double>> entries;

  double norm() const;
  double dot(const SparseVec& other) const;
};

/// TF-IDF vectorizer with smoothed idf: ln((1+N)/(1+df)) + 1.
class Vectorizer {
 public:
  /// Fits on pre-tokenized documents. Throws DataError when every
  /// document is empty.
  static Vectorizer fit(const std::vector<std::vector<std::string>>& documents,
                        const TokenizerConfig& config);

  /// tf * idf, L2-normalized; the zero vector stays zero. Out-of-vocabulary
  /// tokens are ignored.
  SparseVec transform(const std::vector<std::string>& document) const;

  int vocab_size() const { return static_cast<int>(terms_.size()); }
  int doc_count() const { return doc_count_; }
  const TokenizerConfig& config() const { return config_; }

  /// Column index for a token, -1 when out of vocabulary.
  int index_of(const std::string& token) const;
  const std::string& term(int index) const { return terms_[index]; }
  double idf(int index) const { return idf_[index]; }
  const std::vector<double>& idf() const { return idf_; }
  int document_frequency(const std::string& token) const;

  std::string to_json() const;
  static Vectorizer from_json(const std::string& json_text);

  Vectorizer() = default;

 private:
  std::map<std::string, int> vocabulary_;  // token -> column
  std::vector<std::string> terms_;         // column -> token
  std::vector<double> idf_;
  std::vector<int> df_;
  int doc_count_ = 0;
  TokenizerConfig config_;
};

}  // namespace spamlens::textproc
