#include "spamlens/sentiment.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "spamlens/textproc.hpp"
#include "spamlens/util.hpp"

namespace spamlens::sentiment {

SentimentLexicon SentimentLexicon::from_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon file: " + path);
  SentimentLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError("lexicon file " + path + " line " + std::to_string(lineno) +
                      ": expected token<TAB>valence");
    const std::string token = trim(line.substr(0, tab));
    double valence;
    try {
      valence = std::stod(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw DataError("lexicon file " + path + " line " + std::to_string(lineno) +
                      ": bad valence");
    }
    if (valence < -1.0 || valence > 1.0)
      throw DataError("lexicon file " + path + " line " + std::to_string(lineno) +
                      ": valence outside [-1, 1]");
    lex.valence[token] = valence;
  }
  return lex;
}

double score_text(const SentimentLexicon& lexicon, std::string_view text) {
  static const textproc::TokenizerConfig default_config;
  const auto tokens = textproc::tokenize(text, default_config);
  double sum = 0.0;
  std::size_t matched = 0;
  for (const auto& tok : tokens) {
    const auto it = lexicon.valence.find(tok);
    if (it == lexicon.valence.end()) continue;
    sum += it->second;
    ++matched;
  }
  if (matched == 0) return 0.0;
  return std::clamp(sum / static_cast<double>(matched), -1.0, 1.0);
}

std::map<topics::UnifiedTopic, TopicSentiment> aggregate_reply_sentiment(
    const std::vector<ScoredReply>& replies) {
  std::map<topics::UnifiedTopic, TopicSentiment> out;
  for (const auto& r : replies) {
    if (!r.topic) continue;
    TopicSentiment& agg = out[*r.topic];
    const double score = std::clamp(r.score, -1.0, 1.0);
    if (score > 0.0) agg.pos_sum += score;
    else if (score < 0.0) agg.neg_sum += score;
    ++agg.reply_count;
  }
  return out;
}

}  // namespace spamlens::sentiment
