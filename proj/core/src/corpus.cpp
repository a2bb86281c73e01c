#include "spamlens/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spamlens/util.hpp"

namespace spamlens::corpus {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string require_string(const json& j, const char* field,
                           const std::string& where) {
  if (!j.contains(field) || !j[field].is_string())
    throw DataError(where + ": missing or non-string field '" + field + "'");
  return j[field].get<std::string>();
}

std::int64_t require_count(const json& j, const char* field,
                           const std::string& where) {
  if (!j.contains(field) || !j[field].is_number_integer())
    throw DataError(where + ": missing or non-integer field '" + field + "'");
  const auto v = j[field].get<std::int64_t>();
  if (v < 0) throw DataError(where + ": negative '" + std::string(field) + "'");
  return v;
}

std::vector<std::string> optional_string_list(const json& j, const char* field,
                                              const std::string& where) {
  if (!j.contains(field)) return {};
  if (!j[field].is_array())
    throw DataError(where + ": field '" + std::string(field) + "' is not a list");
  std::vector<std::string> out;
  for (const auto& item : j[field]) {
    if (!item.is_string())
      throw DataError(where + ": non-string entry in '" + std::string(field) + "'");
    out.push_back(item.get<std::string>());
  }
  return out;
}

template <class Fn>
void for_each_jsonl(const std::string& path, const char* what, Fn fn) {
  std::ifstream in(path);
  if (!in) throw DataError(std::string("cannot open ") + what + " file: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::string where =
        std::string(what) + " file " + path + " line " + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(where + ": malformed JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw DataError(where + ": record is not a JSON object");
    fn(j, where);
  }
}

std::string url_path_component(const std::string& url) {
  std::size_t start = 0;
  const auto scheme = url.find("://");
  if (scheme != std::string::npos) start = scheme + 3;
  const auto slash = url.find('/', start);
  if (slash == std::string::npos) return "";
  auto end = url.find_first_of("?#", slash);
  if (end == std::string::npos) end = url.size();
  return url.substr(slash, end - slash);
}

bool ends_with_ci(const std::string& s, const char* suffix) {
  const std::size_t n = std::char_traits<char>::length(suffix);
  if (s.size() < n) return false;
  return to_lower_ascii(s.substr(s.size() - n)) == suffix;
}

}  // namespace

std::string to_string(UserLabel label) {
  return label == UserLabel::spammer ? "spammer" : "legitimate";
}

std::optional<UserLabel> parse_user_label(const std::string& s) {
  if (s == "spammer") return UserLabel::spammer;
  if (s == "legitimate") return UserLabel::legitimate;
  return std::nullopt;
}

bool is_media_url(const std::string& url) {
  const std::string path = url_path_component(url);
  return ends_with_ci(path, ".jpg") || ends_with_ci(path, ".jpeg") ||
         ends_with_ci(path, ".png") || ends_with_ci(path, ".gif") ||
         ends_with_ci(path, ".mp4");
}

IngestResult ingest_corpus(const std::string& users_path,
                           const std::string& tweets_path,
                           const std::string& replies_path, bool strict) {
  IngestResult result;
  Corpus& c = result.corpus;
  IngestReport& report = result.report;

  for_each_jsonl(users_path, "users", [&](const json& j, const std::string& where) {
    UserProfile u;
    u.user_id = require_string(j, "user_id", where);
    if (u.user_id.empty()) throw DataError(where + ": empty user_id");
    u.followers_count = require_count(j, "followers_count", where);
    u.friends_count = require_count(j, "friends_count", where);
    u.created_at = parse_rfc3339(require_string(j, "created_at", where));
    if (j.contains("label") && !j["label"].is_null()) {
      const auto text = j["label"].get<std::string>();
      u.label = parse_user_label(text);
      if (!u.label) throw DataError(where + ": unknown label '" + text + "'");
    }
    const auto it = c.users.find(u.user_id);
    if (it != c.users.end()) {
      if (strict) throw DataError(where + ": duplicate user_id '" + u.user_id + "'");
      if (it->second == u) {
        ++report.duplicate_ids_dropped;
        return;
      }
      throw DataError(where + ": conflicting duplicate user_id '" + u.user_id + "'");
    }
    c.users.emplace(u.user_id, std::move(u));
  });

  for_each_jsonl(tweets_path, "tweets", [&](const json& j, const std::string& where) {
    RawTweet t;
    t.tweet_id = require_string(j, "tweet_id", where);
    if (t.tweet_id.empty()) throw DataError(where + ": empty tweet_id");
    t.user_id = require_string(j, "user_id", where);
    t.created_at = parse_rfc3339(require_string(j, "created_at", where));
    t.text = require_string(j, "text", where);
    t.urls = optional_string_list(j, "urls", where);
    t.hashtags = optional_string_list(j, "hashtags", where);
    t.retweet_count = require_count(j, "retweet_count", where);
    t.like_count = require_count(j, "like_count", where);
    const auto it = c.tweets.find(t.tweet_id);
    if (it != c.tweets.end()) {
      if (strict) throw DataError(where + ": duplicate tweet_id '" + t.tweet_id + "'");
      if (it->second == t) {
        ++report.duplicate_ids_dropped;
        return;
      }
      // Same id, different content: keep the first, quarantine the rest.
      ++report.quarantined_tweets;
      report.quarantined_tweet_ids.push_back(t.tweet_id);
      return;
    }
    if (!c.users.count(t.user_id)) {
      if (strict)
        throw DataError(where + ": tweet '" + t.tweet_id +
                        "' references unknown user '" + t.user_id + "'");
      ++report.quarantined_tweets;
      report.quarantined_tweet_ids.push_back(t.tweet_id);
      return;
    }
    c.tweets.emplace(t.tweet_id, std::move(t));
  });

  for_each_jsonl(replies_path, "replies", [&](const json& j, const std::string& where) {
    Reply r;
    r.reply_id = require_string(j, "reply_id", where);
    if (r.reply_id.empty()) throw DataError(where + ": empty reply_id");
    r.tweet_id = require_string(j, "tweet_id", where);
    r.text = require_string(j, "text", where);
    const auto it = c.replies.find(r.reply_id);
    if (it != c.replies.end()) {
      if (strict) throw DataError(where + ": duplicate reply_id '" + r.reply_id + "'");
      if (it->second == r) {
        ++report.duplicate_ids_dropped;
        return;
      }
      ++report.quarantined_replies;
      report.quarantined_reply_ids.push_back(r.reply_id);
      return;
    }
    if (!c.tweets.count(r.tweet_id)) {
      if (strict)
        throw DataError(where + ": reply '" + r.reply_id +
                        "' references unknown tweet '" + r.tweet_id + "'");
      ++report.quarantined_replies;
      report.quarantined_reply_ids.push_back(r.reply_id);
      return;
    }
    c.replies.emplace(r.reply_id, std::move(r));
  });

  return result;
}

std::pair<Corpus, CleanseReport> cleanse(const Corpus& corpus) {
  Corpus out;
  CleanseReport report;
  out.users = corpus.users;

  // Tweet dedup key: (user_id, trimmed text). Earliest created_at wins;
  // ties fall to the smaller tweet_id.
  std::map<std::pair<std::string, std::string>, const RawTweet*> survivors;
  for (const auto& [id, tweet] : corpus.tweets) {
    const auto key = std::make_pair(tweet.user_id, trim(tweet.text));
    const auto it = survivors.find(key);
    if (it == survivors.end()) {
      survivors.emplace(key, &tweet);
    } else if (tweet.created_at < it->second->created_at ||
               (tweet.created_at == it->second->created_at &&
                tweet.tweet_id < it->second->tweet_id)) {
      it->second = &tweet;
      ++report.duplicate_tweets;
    } else {
      ++report.duplicate_tweets;
    }
  }
  for (const auto& [key, tweet] : survivors) {
    RawTweet copy = *tweet;
    std::vector<std::string> kept;
    kept.reserve(copy.urls.size());
    for (const auto& url : copy.urls) {
      if (is_media_url(url)) ++report.media_urls;
      else kept.push_back(url);
    }
    copy.urls = std::move(kept);
    out.tweets.emplace(copy.tweet_id, std::move(copy));
  }

  // Reply dedup key: (parent tweet, trimmed text); smallest reply_id wins.
  std::map<std::pair<std::string, std::string>, const Reply*> reply_survivors;
  for (const auto& [id, reply] : corpus.replies) {
    const auto key = std::make_pair(reply.tweet_id, trim(reply.text));
    const auto it = reply_survivors.find(key);
    if (it == reply_survivors.end()) reply_survivors.emplace(key, &reply);
    else ++report.duplicate_replies;  // map order means smaller id seen first
  }
  for (const auto& [key, reply] : reply_survivors) {
    if (!out.tweets.count(reply->tweet_id)) continue;  // parent deduped away
    out.replies.emplace(reply->reply_id, *reply);
  }

  return {std::move(out), report};
}

double account_age_years(const UserProfile& profile, UtcSeconds as_of) {
  if (as_of < profile.created_at)
    throw DataError("account_age_years: as_of precedes creation of user '" +
                    profile.user_id + "'");
  return days_between(profile.created_at, as_of) / 365.25;
}

void write_corpus(const Corpus& corpus, const std::string& users_path,
                  const std::string& tweets_path,
                  const std::string& replies_path) {
  const auto open = [](const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    return out;
  };

  auto users = open(users_path);
  for (const auto& [id, u] : corpus.users) {
    ordered_json j;
    j["user_id"] = u.user_id;
    j["followers_count"] = u.followers_count;
    j["friends_count"] = u.friends_count;
    j["created_at"] = format_rfc3339(u.created_at);
    if (u.label) j["label"] = to_string(*u.label);
    users << j.dump() << '\n';
  }

  auto tweets = open(tweets_path);
  for (const auto& [id, t] : corpus.tweets) {
    ordered_json j;
    j["tweet_id"] = t.tweet_id;
    j["user_id"] = t.user_id;
    j["created_at"] = format_rfc3339(t.created_at);
    j["text"] = t.text;
    j["urls"] = t.urls;
    j["hashtags"] = t.hashtags;
    j["retweet_count"] = t.retweet_count;
    j["like_count"] = t.like_count;
    tweets << j.dump() << '\n';
  }

  auto replies = open(replies_path);
  for (const auto& [id, r] : corpus.replies) {
    ordered_json j;
    j["reply_id"] = r.reply_id;
    j["tweet_id"] = r.tweet_id;
    j["text"] = r.text;
    replies << j.dump() << '\n';
  }
}

UtcSeconds max_created_at(const Corpus& corpus) {
  UtcSeconds latest = 0;
  bool any = false;
  for (const auto& [id, t] : corpus.tweets) {
    if (!any || t.created_at > latest) latest = t.created_at;
    any = true;
  }
  if (!any) {
    for (const auto& [id, u] : corpus.users) {
      if (!any || u.created_at > latest) latest = u.created_at;
      any = true;
    }
  }
  return latest;
}

}  // namespace spamlens::corpus
