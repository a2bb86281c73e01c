#include "spamlens/textproc.hpp"

#include <cmath>
#include <unordered_map>

#include <json.hpp>

#include "spamlens/util.hpp"

namespace spamlens::textproc {
namespace {

bool is_token_char(unsigned char c) {
  if (c >= 0x80) return true;  // UTF-8 continuation/lead byte, keep word intact
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

bool is_mention_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

bool is_ws(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerConfig& config) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (config.strip_urls && (starts_with_ci(text.substr(i), "http://") ||
                              starts_with_ci(text.substr(i), "https://"))) {
      while (i < n && !is_ws(static_cast<unsigned char>(text[i]))) ++i;
      continue;
    }
    if (config.strip_mentions && text[i] == '@' && i + 1 < n &&
        is_mention_char(static_cast<unsigned char>(text[i + 1]))) {
      ++i;
      while (i < n && is_mention_char(static_cast<unsigned char>(text[i]))) ++i;
      continue;
    }
    if (!is_token_char(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < n && is_token_char(static_cast<unsigned char>(text[i]))) ++i;
    std::string tok(text.substr(start, i - start));
    if (config.lowercase) tok = to_lower_ascii(tok);
    if (static_cast<int>(tok.size()) < config.min_token_len) continue;
    if (config.stopwords.count(tok)) continue;
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

double SparseVec::norm() const {
  double s = 0.0;
  for (const auto& [idx, v] : entries) s += v * v;
  return std::sqrt(s);
}

double SparseVec::dot(const SparseVec& other) const {
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < entries.size() && j < other.entries.size()) {
    if (entries[i].first < other.entries[j].first) ++i;
    else if (entries[i].first > other.entries[j].first) ++j;
    else s += entries[i++].second * other.entries[j++].second;
  }
  return s;
}

Vectorizer Vectorizer::fit(const std::vector<std::vector<std::string>>& documents,
                           const TokenizerConfig& config) {
  std::map<std::string, int> df;
  bool any_nonempty = false;
  for (const auto& doc : documents) {
    if (!doc.empty()) any_nonempty = true;
    std::set<std::string> distinct(doc.begin(), doc.end());
    for (const auto& t : distinct) ++df[t];
  }
  if (!any_nonempty) throw DataError("fit_vectorizer: no usable documents");

  Vectorizer v;
  v.config_ = config;
  v.doc_count_ = static_cast<int>(documents.size());
  v.terms_.reserve(df.size());
  v.idf_.reserve(df.size());
  v.df_.reserve(df.size());
  int col = 0;
  for (const auto& [token, count] : df) {
    v.vocabulary_.emplace(token, col++);
    v.terms_.push_back(token);
    v.df_.push_back(count);
    v.idf_.push_back(std::log((1.0 + v.doc_count_) / (1.0 + count)) + 1.0);
  }
  return v;
}

SparseVec Vectorizer::transform(const std::vector<std::string>& document) const {
  std::map<int, double> counts;
  for (const auto& tok : document) {
    const auto it = vocabulary_.find(tok);
    if (it != vocabulary_.end()) counts[it->second] += 1.0;
  }
  SparseVec out;
  out.entries.reserve(counts.size());
  double sq = 0.0;
  for (const auto& [idx, tf] : counts) {
    const double w = tf * idf_[idx];
    out.entries.emplace_back(idx, w);
    sq += w * w;
  }
  if (sq > 0.0) {
    const double inv = 1.0 / std::sqrt(sq);
    for (auto& [idx, w] : out.entries) w *= inv;
  }
  return out;
}

int Vectorizer::index_of(const std::string& token) const {
  const auto it = vocabulary_.find(token);
  return it == vocabulary_.end() ? -1 : it->second;
}

int Vectorizer::document_frequency(const std::string& token) const {
  const int idx = index_of(token);
  return idx < 0 ? 0 : df_[idx];
}

std::string Vectorizer::to_json() const {
  nlohmann::ordered_json j;
  j["doc_count"] = doc_count_;
  j["terms"] = terms_;
  j["df"] = df_;
  j["idf"] = idf_;
  nlohmann::ordered_json cfg;
  cfg["lowercase"] = config_.lowercase;
  cfg["strip_urls"] = config_.strip_urls;
  cfg["strip_mentions"] = config_.strip_mentions;
  cfg["min_token_len"] = config_.min_token_len;
  cfg["stopwords"] = std::vector<std::string>(config_.stopwords.begin(),
                                              config_.stopwords.end());
  j["tokenizer"] = std::move(cfg);
  return j.dump();
}

Vectorizer Vectorizer::from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("vectorizer: invalid JSON: ") + e.what());
  }
  Vectorizer v;
  v.doc_count_ = j.at("doc_count").get<int>();
  v.terms_ = j.at("terms").get<std::vector<std::string>>();
  v.df_ = j.at("df").get<std::vector<int>>();
  v.idf_ = j.at("idf").get<std::vector<double>>();
  if (v.terms_.size() != v.idf_.size() || v.terms_.size() != v.df_.size())
    throw DataError("vectorizer: term/idf/df length mismatch");
  for (std::size_t i = 0; i < v.terms_.size(); ++i)
    v.vocabulary_.emplace(v.terms_[i], static_cast<int>(i));
  const auto& cfg = j.at("tokenizer");
  v.config_.lowercase = cfg.at("lowercase").get<bool>();
  v.config_.strip_urls = cfg.at("strip_urls").get<bool>();
  v.config_.strip_mentions = cfg.at("strip_mentions").get<bool>();
  v.config_.min_token_len = cfg.at("min_token_len").get<int>();
  const auto words = cfg.at("stopwords").get<std::vector<std::string>>();
  v.config_.stopwords = std::set<std::string>(words.begin(), words.end());
  return v;
}

}  // namespace spamlens::textproc
