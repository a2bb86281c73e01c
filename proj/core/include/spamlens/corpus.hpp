#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spamlens/timeutil.hpp"

namespace spamlens::corpus {

struct RawTweet {
  std::string tweet_id;
  std::string user_id;
  UtcSeconds created_at = 0;
  std::string text;
  std::vector<std::string> urls;
  std::vector<std::string> hashtags;  // without leading '#'
  std::int64_t retweet_count = 0;
  std::int64_t like_count = 0;

  bool operator==(const RawTweet&) const = default;
};

struct Reply {
  std::string reply_id;
  std::string tweet_id;  // parent
  std::string text;

  bool operator==(const Reply&) const = default;
};

enum class UserLabel { spammer, legitimate };

std::string to_string(UserLabel label);
std::optional<UserLabel> parse_user_label(const std::string& s);

struct UserProfile {
  std::string user_id;
  std::int64_t followers_count = 0;  // FOL_u
  std::int64_t friends_count = 0;    // FRD_u
  UtcSeconds created_at = 0;
  std::optional<UserLabel> label;

  bool operator==(const UserProfile&) const = default;
};

struct Corpus {
  std::map<std::string, UserProfile> users;
  std::map<std::string, RawTweet> tweets;
  std::map<std::string, Reply> replies;

  bool operator==(const Corpus&) const = default;
};

struct IngestReport {
  std::size_t quarantined_tweets = 0;   // tweets whose user_id is unknown
  std::size_t quarantined_replies = 0;  // replies whose tweet_id is unknown
  std::size_t duplicate_ids_dropped = 0;
  std::vector<std::string> quarantined_tweet_ids;
  std::vector<std::string> quarantined_reply_ids;

  std::size_t quarantine_count() const {
    return quarantined_tweets + quarantined_replies;
  }
};

struct IngestResult {
  Corpus corpus;
  IngestReport report;
};

/// Loads users/tweets/replies JSONL files. In strict mode any duplicate
/// primary id or dangling reference is an error; otherwise identical
/// duplicates pass through (one copy kept, counted) and dangling records
/// are quarantined with a count.
IngestResult ingest_corpus(const std::string& users_path,
                           const std::string& tweets_path,
                           const std::string& replies_path,
                           bool strict = false);

struct CleanseReport {
  std::size_t duplicate_tweets = 0;
  std::size_t duplicate_replies = 0;
  std::size_t media_urls = 0;

  bool operator==(const CleanseReport&) const = default;
};

/// Removes exact-duplicate tweets (same user_id + trimmed text, earliest
/// created_at kept) and replies (same parent + trimmed text, smallest
/// reply_id kept), and drops media URLs (.jpg .jpeg .png .gif .mp4 on the
/// URL path, case-insensitive). Total; never fails.
std::pair<Corpus, CleanseReport> cleanse(const Corpus& corpus);

/// (as_of - created_at) in days / 365.25. Throws DataError when as_of
/// precedes the profile creation time.
double account_age_years(const UserProfile& profile, UtcSeconds as_of);

/// Writes the corpus back to the JSONL interchange format.
void write_corpus(const Corpus& corpus, const std::string& users_path,
                  const std::string& tweets_path,
                  const std::string& replies_path);

/// Latest tweet timestamp; profile creation time fallback for empty
/// corpora. Used as the default "as_of" for age computations.
UtcSeconds max_created_at(const Corpus& corpus);

/// True when the URL path ends in an image/video extension.
bool is_media_url(const std::string& url);

}  // namespace spamlens::corpus
