#include "spamlens/topics.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "spamlens/csv.hpp"
#include "spamlens/util.hpp"

namespace spamlens::topics {
namespace {

const char* kTopicNames[kNumTopics] = {
    "technology_and_computing", "business_and_industrial",
    "automotive_and_vehicles",  "sports",
    "science",                  "news",
    "law_govt_and_politics",    "religion_and_spirituality",
};

// External taxonomy top-level segments as the NLU service spells them.
const char* kExternalSegments[kNumTopics] = {
    "technology and computing", "business and industrial",
    "automotive and vehicles",  "sports",
    "science",                  "news",
    "law, govt and politics",   "religion and spirituality",
};

struct NgPair {
  const char* newsgroup;
  UnifiedTopic topic;
};

const NgPair kNewsgroupPairs[] = {
    {"comp.graphics", UnifiedTopic::technology_and_computing},
    {"comp.os.ms-windows.misc", UnifiedTopic::technology_and_computing},
    {"comp.sys.ibm.pc.hardware", UnifiedTopic::technology_and_computing},
    {"comp.sys.mac.hardware", UnifiedTopic::technology_and_computing},
    {"comp.windows.x", UnifiedTopic::technology_and_computing},
    {"sci.electronics", UnifiedTopic::technology_and_computing},
    {"misc.forsale", UnifiedTopic::business_and_industrial},
    {"rec.autos", UnifiedTopic::automotive_and_vehicles},
    {"rec.motorcycles", UnifiedTopic::automotive_and_vehicles},
    {"rec.sport.baseball", UnifiedTopic::sports},
    {"rec.sport.hockey", UnifiedTopic::sports},
    {"sci.crypt", UnifiedTopic::science},
    {"sci.med", UnifiedTopic::science},
    {"sci.space", UnifiedTopic::science},
    {"talk.politics.guns", UnifiedTopic::news},
    {"talk.politics.mideast", UnifiedTopic::news},
    {"talk.politics.misc", UnifiedTopic::law_govt_and_politics},
    {"talk.religion.misc", UnifiedTopic::religion_and_spirituality},
    {"alt.atheism", UnifiedTopic::religion_and_spirituality},
    {"soc.religion.christian", UnifiedTopic::religion_and_spirituality},
};

std::string top_level_segment(const std::string& path) {
  std::size_t start = 0;
  if (!path.empty() && path[0] == '/') start = 1;
  const auto next = path.find('/', start);
  const auto seg = next == std::string::npos ? path.substr(start)
                                             : path.substr(start, next - start);
  return to_lower_ascii(trim(seg));
}

}  // namespace

const std::vector<UnifiedTopic>& all_topics() {
  static const std::vector<UnifiedTopic> topics = [] {
    std::vector<UnifiedTopic> t;
    for (int i = 0; i < kNumTopics; ++i) t.push_back(static_cast<UnifiedTopic>(i));
    return t;
  }();
  return topics;
}

std::string to_string(UnifiedTopic t) {
  return kTopicNames[static_cast<int>(t)];
}

std::optional<UnifiedTopic> parse_topic(const std::string& s) {
  for (int i = 0; i < kNumTopics; ++i) {
    if (s == kTopicNames[i]) return static_cast<UnifiedTopic>(i);
  }
  return std::nullopt;
}

std::string to_string(TopicAlgorithm a) {
  switch (a) {
    case TopicAlgorithm::multinomial_nb: return "multinomial_nb";
    case TopicAlgorithm::logistic_regression: return "logistic_regression";
    case TopicAlgorithm::sgd_softmax: return "sgd_softmax";
  }
  return "?";
}

std::optional<TopicAlgorithm> parse_topic_algorithm(const std::string& s) {
  if (s == "multinomial_nb" || s == "mnb") return TopicAlgorithm::multinomial_nb;
  if (s == "logistic_regression" || s == "lr")
    return TopicAlgorithm::logistic_regression;
  if (s == "sgd_softmax" || s == "sgd") return TopicAlgorithm::sgd_softmax;
  return std::nullopt;
}

TaxonomyMapping TaxonomyMapping::standard() {
  TaxonomyMapping m;
  for (const auto& pair : kNewsgroupPairs)
    m.newsgroup_.emplace(pair.newsgroup, pair.topic);
  for (int i = 0; i < kNumTopics; ++i)
    m.external_.emplace(kExternalSegments[i], static_cast<UnifiedTopic>(i));
  return m;
}

TaxonomyMapping TaxonomyMapping::from_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open mapping file: " + path);
  TaxonomyMapping m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || line[0] == '#') continue;
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) parts.push_back(field);
    if (parts.size() != 3)
      throw DataError("mapping file " + path + " line " + std::to_string(lineno) +
                      ": expected source<TAB>label<TAB>topic");
    const auto topic = parse_topic(trim(parts[2]));
    if (!topic)
      throw DataError("mapping file " + path + " line " + std::to_string(lineno) +
                      ": unknown unified topic '" + parts[2] + "'");
    const std::string source = trim(parts[0]);
    if (source == "newsgroup") {
      m.newsgroup_[trim(parts[1])] = *topic;
    } else if (source == "external") {
      m.external_[to_lower_ascii(trim(parts[1]))] = *topic;
    } else {
      throw DataError("mapping file " + path + " line " + std::to_string(lineno) +
                      ": unknown source '" + source + "'");
    }
  }
  return m;
}

std::optional<UnifiedTopic> TaxonomyMapping::map(Source source,
                                                 const std::string& label) const {
  if (source == Source::newsgroup) {
    const auto it = newsgroup_.find(label);
    if (it == newsgroup_.end()) return std::nullopt;
    return it->second;
  }
  const auto it = external_.find(top_level_segment(label));
  if (it == external_.end()) return std::nullopt;
  return it->second;
}

std::optional<UnifiedTopic> map_to_unified(const TaxonomyMapping& mapping,
                                           Source source,
                                           const std::string& label) {
  return mapping.map(source, label);
}

std::vector<LabeledDoc> load_newsgroups_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw DataError("newsgroups directory not found: " + dir);
  std::vector<LabeledDoc> docs;
  std::vector<fs::path> classes;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) classes.push_back(entry.path());
  }
  std::sort(classes.begin(), classes.end());
  for (const auto& cls : classes) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(cls)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      docs.push_back({cls.filename().string(), read_file(file.string())});
    }
  }
  if (docs.empty()) throw DataError("no documents under: " + dir);
  return docs;
}

TagResult OfflineStubTagger::analyze(const std::string& text) const {
  TagResult result;
  const Classification c = model_->classify(text);
  if (!c.label) return result;
  const auto topic = mapping_->map(Source::newsgroup, *c.label);
  if (!topic) return result;
  // Re-emit as an external category path for the mapped unified topic.
  const std::string segment = kExternalSegments[static_cast<int>(*topic)];
  result.categories.emplace_back("/" + segment, c.score);
  return result;
}

TopicAssignment agree_label(const std::string& tweet_id,
                            const TagResult& external_result,
                            const Classification& newsgroup_result,
                            const TaxonomyMapping& mapping, double min_score) {
  TopicAssignment a;
  a.tweet_id = tweet_id;
  if (!external_result.categories.empty()) {
    // Top-1 category per tagger, even when several are returned.
    a.source_a.label = external_result.categories.front().first;
    a.source_a.score = external_result.categories.front().second;
  }
  if (newsgroup_result.label) {
    a.source_b.label = *newsgroup_result.label;
    a.source_b.score = newsgroup_result.score;
  }
  if (!a.source_a.label || !a.source_b.label) return a;
  const auto topic_a = mapping.map(Source::external, *a.source_a.label);
  const auto topic_b = mapping.map(Source::newsgroup, *a.source_b.label);
  if (topic_a && topic_b && *topic_a == *topic_b && a.source_a.score >= min_score &&
      a.source_b.score >= min_score) {
    a.topic = *topic_a;
    a.accepted = true;
  }
  return a;
}

TagCorpusResult tag_corpus(const corpus::Corpus& corpus, const TopicModel& model,
                           const ExternalTagger& tagger,
                           const TaxonomyMapping& mapping, double min_score,
                           int threads) {
  std::vector<const corpus::RawTweet*> tweets;
  tweets.reserve(corpus.tweets.size());
  for (const auto& [id, tweet] : corpus.tweets) tweets.push_back(&tweet);

  std::vector<TopicAssignment> slots(tweets.size());
  parallel_for(tweets.size(), threads, [&](std::size_t i) {
    const auto& tweet = *tweets[i];
    const TagResult external = tagger.analyze(tweet.text);
    const Classification ng = model.classify(tweet.text);
    slots[i] = agree_label(tweet.tweet_id, external, ng, mapping, min_score);
  });

  TagCorpusResult result;
  result.stats.stub_tagger = tagger.is_stub();
  result.stats.total_tweets = tweets.size();
  for (auto& a : slots) {
    if (a.source_a.label) {
      if (const auto t = mapping.map(Source::external, *a.source_a.label))
        ++result.stats.by_topic[*t].count_a;
    }
    if (a.source_b.label) {
      if (const auto t = mapping.map(Source::newsgroup, *a.source_b.label))
        ++result.stats.by_topic[*t].count_b;
    }
    if (a.accepted) {
      ++result.stats.by_topic[*a.topic].matched;
      ++result.stats.accepted;
    }
    result.assignments.emplace(a.tweet_id, std::move(a));
  }
  return result;
}

void write_assignments_csv(const std::map<std::string, TopicAssignment>& assignments,
                           const std::string& path) {
  std::ostringstream out;
  out << "tweet_id,topic,accepted,source_a_label,source_a_score,source_b_label,"
         "source_b_score\n";
  for (const auto& [id, a] : assignments) {
    out << csv_escape(a.tweet_id) << ','
        << (a.topic ? to_string(*a.topic) : std::string()) << ','
        << (a.accepted ? '1' : '0') << ','
        << csv_escape(a.source_a.label.value_or("")) << ','
        << format_double(a.source_a.score) << ','
        << csv_escape(a.source_b.label.value_or("")) << ','
        << format_double(a.source_b.score) << '\n';
  }
  write_file(path, out.str());
}

std::map<std::string, TopicAssignment> read_assignments_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open assignments file: " + path);
  std::map<std::string, TopicAssignment> out;
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (header) {
      header = false;
      continue;
    }
    if (trim(line).empty()) continue;
    const auto f = parse_csv_line(line);
    if (f.size() != 7)
      throw DataError("assignments file " + path + " line " +
                      std::to_string(lineno) + ": expected 7 fields");
    TopicAssignment a;
    a.tweet_id = f[0];
    if (!f[1].empty()) {
      a.topic = parse_topic(f[1]);
      if (!a.topic)
        throw DataError("assignments file " + path + " line " +
                        std::to_string(lineno) + ": unknown topic '" + f[1] + "'");
    }
    a.accepted = f[2] == "1";
    if (!f[3].empty()) a.source_a.label = f[3];
    a.source_a.score = std::stod(f[4]);
    if (!f[5].empty()) a.source_b.label = f[5];
    a.source_b.score = std::stod(f[6]);
    out.emplace(a.tweet_id, std::move(a));
  }
  return out;
}

void write_matching_stats_csv(const MatchingStats& stats, const std::string& path) {
  std::ostringstream out;
  out << "topic,count_a,count_b,matched,pct_matching,stub_tagger\n";
  for (const auto& topic : all_topics()) {
    const auto it = stats.by_topic.find(topic);
    const TopicMatch m = it == stats.by_topic.end() ? TopicMatch{} : it->second;
    out << to_string(topic) << ',' << m.count_a << ',' << m.count_b << ','
        << m.matched << ',' << format_double(m.pct_matching()) << ','
        << (stats.stub_tagger ? '1' : '0') << '\n';
  }
  write_file(path, out.str());
}

}  // namespace spamlens::topics
