#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "spamlens/corpus.hpp"
#include "spamlens/timeutil.hpp"

namespace testsupport {

/// Self-cleaning temporary directory under the system temp path.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    base_ = std::filesystem::temp_directory_path() /
            ("spamlens_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(base_);
    std::filesystem::create_directories(base_);
  }
  ~TempDir() { std::filesystem::remove_all(base_); }

  std::string path(const std::string& name = "") const {
    return name.empty() ? base_.string() : (base_ / name).string();
  }

 private:
  std::filesystem::path base_;
};

inline void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline spamlens::corpus::UserProfile make_user(const std::string& id,
                                               std::int64_t followers = 100,
                                               std::int64_t friends = 50,
                                               const std::string& created =
                                                   "2015-01-01T00:00:00Z") {
  spamlens::corpus::UserProfile u;
  u.user_id = id;
  u.followers_count = followers;
  u.friends_count = friends;
  u.created_at = spamlens::parse_rfc3339(created);
  return u;
}

inline spamlens::corpus::RawTweet make_tweet(
    const std::string& id, const std::string& user, const std::string& text,
    const std::string& created = "2020-01-01T00:00:00Z") {
  spamlens::corpus::RawTweet t;
  t.tweet_id = id;
  t.user_id = user;
  t.text = text;
  t.created_at = spamlens::parse_rfc3339(created);
  return t;
}

}  // namespace testsupport
