#include <fstream>

#include "spamlens/textproc.hpp"
#include "spamlens/util.hpp"

namespace spamlens::textproc {
namespace {

// Compact English stopword list; close to the classic SMART/Glasgow lists.
const char* const kStopwords[] = {
    "a",       "about",  "above",   "after",   "again",   "against", "all",
    "am",      "an",     "and",     "any",     "are",     "aren",    "as",
    "at",      "be",     "because", "been",    "before",  "being",   "below",
    "between", "both",   "but",     "by",      "can",     "cannot",  "could",
    "did",     "do",     "does",    "doing",   "don",     "down",    "during",
    "each",    "few",    "for",     "from",    "further", "had",     "has",
    "have",    "having", "he",      "her",     "here",    "hers",    "herself",
    "him",     "himself","his",     "how",     "i",       "if",      "in",
    "into",    "is",     "isn",     "it",      "its",     "itself",  "just",
    "me",      "more",   "most",    "my",      "myself",  "no",      "nor",
    "not",     "now",    "of",      "off",     "on",      "once",    "only",
    "or",      "other",  "ought",   "our",     "ours",    "ourselves", "out",
    "over",    "own",    "same",    "she",     "should",  "so",      "some",
    "such",    "than",   "that",    "the",     "their",   "theirs",  "them",
    "themselves", "then", "there",  "these",   "they",    "this",    "those",
    "through", "to",     "too",     "under",   "until",   "up",      "very",
    "was",     "we",     "were",    "what",    "when",    "where",   "which",
    "while",   "who",    "whom",    "why",     "will",    "with",    "would",
    "you",     "your",   "yours",   "yourself","yourselves",
};

}  // namespace

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words(std::begin(kStopwords),
                                           std::end(kStopwords));
  return words;
}

std::set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stopword file: " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const std::string w = trim(line);
    if (!w.empty()) words.insert(w);
  }
  return words;
}

}  // namespace spamlens::textproc
