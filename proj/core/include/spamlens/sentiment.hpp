#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "spamlens/topics.hpp"

namespace spamlens::sentiment {

struct SentimentLexicon {
  std::unordered_map<std::string, double> valence;  // token -> [-1, 1]

  /// Bundled small English list.
  static const SentimentLexicon& builtin();

  /// TSV file: token<TAB>valence. Valences outside [-1, 1] are rejected.
  static SentimentLexicon from_tsv(const std::string& path);
};

enum class Polarity { positive, neutral, negative };

struct ReplySentiment {
  std::string reply_id;
  double score = 0.0;
  Polarity polarity = Polarity::neutral;
};

inline Polarity polarity_of(double score) {
  if (score > 0.0) return Polarity::positive;
  if (score < 0.0) return Polarity::negative;
  return Polarity::neutral;
}

/// Mean valence of lexicon-matched tokens (textproc default tokenization),
/// 0 when nothing matches; clamped to [-1, 1].
double score_text(const SentimentLexicon& lexicon, std::string_view text);

struct TopicSentiment {
  double pos_sum = 0.0;   // >= 0
  double neg_sum = 0.0;   // <= 0
  std::size_t reply_count = 0;
};

struct ScoredReply {
  std::string reply_id;
  std::optional<topics::UnifiedTopic> topic;  // parent tweet's accepted topic
  double score = 0.0;
};

/// Per-topic positive/negative sums and counts. Replies to topic-rejected
/// tweets (topic == nullopt) contribute to no topic; neutral replies count
/// toward reply_count only. Scores are clamped to [-1, 1] on entry.
std::map<topics::UnifiedTopic, TopicSentiment> aggregate_reply_sentiment(
    const std::vector<ScoredReply>& replies);

}  // namespace spamlens::sentiment
