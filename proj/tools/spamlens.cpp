#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spamlens/corpus.hpp"
#include "spamlens/csv.hpp"
#include "spamlens/eval.hpp"
#include "spamlens/features.hpp"
#include "spamlens/models.hpp"
#include "spamlens/sentiment.hpp"
#include "spamlens/svg.hpp"
#include "spamlens/synthgen.hpp"
#include "spamlens/textproc.hpp"
#include "spamlens/topics.hpp"
#include "spamlens/util.hpp"

namespace fs = std::filesystem;
using namespace spamlens;

namespace {

constexpr const char* kVersion = "0.1.0";

struct GlobalOptions {
  int threads = 1;
  std::uint64_t seed = 1;
};

/// One run manifest per command, written next to the outputs. Carries the
/// wall-clock duration, so manifests are excluded from byte-identical
/// reproducibility comparisons.
class ManifestWriter {
 public:
  ManifestWriter(std::string command, std::string output_dir)
      : command_(std::move(command)),
        output_dir_(std::move(output_dir)),
        start_(std::chrono::steady_clock::now()) {}

  void config(const std::string& key, const std::string& value) {
    config_[key] = value;
  }
  void config(const std::string& key, double value) {
    config_[key] = format_double(value);
  }
  void config(const std::string& key, std::int64_t value) {
    config_[key] = std::to_string(value);
  }
  void input(const std::string& path) { inputs_.push_back(path); }
  void output(const std::string& path) { outputs_.push_back(path); }

  void write(std::uint64_t seed) {
    const auto elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start_)
                             .count();
    nlohmann::ordered_json j;
    j["command"] = command_;
    j["tool_version"] = kVersion;
    j["seed"] = seed;
    nlohmann::ordered_json cfg;
    for (const auto& [k, v] : config_) cfg[k] = v;
    j["config"] = std::move(cfg);
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["duration_seconds"] = elapsed;
    fs::create_directories(output_dir_);
    write_file((fs::path(output_dir_) / (command_ + ".manifest.json")).string(),
               j.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::string output_dir_;
  std::map<std::string, std::string> config_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

std::map<std::string, std::string> parse_hp(const std::vector<std::string>& kvs) {
  std::map<std::string, std::string> out;
  for (const auto& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw DataError("--hp expects key=value, got '" + kv + "'");
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

corpus::Corpus load_corpus(const std::string& dir, bool strict,
                           ManifestWriter& manifest) {
  const auto users = (fs::path(dir) / "users.jsonl").string();
  const auto tweets = (fs::path(dir) / "tweets.jsonl").string();
  const auto replies = (fs::path(dir) / "replies.jsonl").string();
  manifest.input(users);
  manifest.input(tweets);
  manifest.input(replies);
  auto result = corpus::ingest_corpus(users, tweets, replies, strict);
  if (result.report.quarantine_count() > 0) {
    std::cerr << "[corpus] quarantined " << result.report.quarantined_tweets
              << " tweets, " << result.report.quarantined_replies
              << " replies\n";
  }
  return std::move(result.corpus);
}

topics::TopicModel load_or_build_topic_model(const std::string& model_path,
                                             std::uint64_t seed) {
  if (!model_path.empty()) return topics::TopicModel::load(model_path);
  // Offline default: a multinomial NB model over the builtin vocabulary
  // corpus, deterministic for a given seed.
  std::cerr << "[tag] no --model given, training builtin topic model\n";
  const auto docs = synthgen::builtin_newsgroup_documents(50, seed);
  topics::TopicHyperParams hp;
  hp.seed = seed;
  return topics::TopicModel::train(docs, topics::TopicAlgorithm::multinomial_nb, hp);
}

std::map<std::string, int> labels_of(const features::FeatureMatrix& matrix) {
  std::map<std::string, int> labels;
  for (const auto& row : matrix.rows)
    if (row.label) labels[row.user_id] = *row.label;
  return labels;
}

// ---------------------------------------------------------------- synth --

int cmd_synth(const GlobalOptions& g, const std::string& output,
              int n_users, double spam_ratio, int tweets_min, int tweets_max) {
  ManifestWriter manifest("synth", output);
  synthgen::SynthConfig config;
  config.n_users = n_users;
  config.spam_ratio = spam_ratio;
  config.tweets_per_user_min = tweets_min;
  config.tweets_per_user_max = tweets_max;
  config.seed = g.seed;
  manifest.config("n_users", static_cast<std::int64_t>(n_users));
  manifest.config("spam_ratio", spam_ratio);
  manifest.config("tweets_per_user_min", static_cast<std::int64_t>(tweets_min));
  manifest.config("tweets_per_user_max", static_cast<std::int64_t>(tweets_max));

  const auto result = synthgen::generate(config);
  fs::create_directories(output);
  const auto users = (fs::path(output) / "users.jsonl").string();
  const auto tweets = (fs::path(output) / "tweets.jsonl").string();
  const auto replies = (fs::path(output) / "replies.jsonl").string();
  corpus::write_corpus(result.corpus, users, tweets, replies);
  synthgen::write_manifest(config, result,
                           (fs::path(output) / "manifest.json").string());
  manifest.output(users);
  manifest.output(tweets);
  manifest.output(replies);
  manifest.output((fs::path(output) / "manifest.json").string());
  manifest.write(g.seed);
  std::cerr << "[synth] wrote " << result.corpus.users.size() << " users, "
            << result.corpus.tweets.size() << " tweets, "
            << result.corpus.replies.size() << " replies to " << output << "\n";
  return 0;
}

// --------------------------------------------------------------- ingest --

int cmd_ingest(const GlobalOptions& g, const std::string& input,
               const std::string& output, bool strict) {
  ManifestWriter manifest("ingest", output);
  manifest.config("strict", strict ? "true" : "false");
  manifest.config("input", input);

  const auto users_in = (fs::path(input) / "users.jsonl").string();
  const auto tweets_in = (fs::path(input) / "tweets.jsonl").string();
  const auto replies_in = (fs::path(input) / "replies.jsonl").string();
  manifest.input(users_in);
  manifest.input(tweets_in);
  manifest.input(replies_in);

  const auto ingest = corpus::ingest_corpus(users_in, tweets_in, replies_in, strict);
  const auto [clean, report] = corpus::cleanse(ingest.corpus);

  fs::create_directories(output);
  const auto users_out = (fs::path(output) / "users.jsonl").string();
  const auto tweets_out = (fs::path(output) / "tweets.jsonl").string();
  const auto replies_out = (fs::path(output) / "replies.jsonl").string();
  corpus::write_corpus(clean, users_out, tweets_out, replies_out);

  nlohmann::ordered_json j;
  j["quarantined_tweets"] = ingest.report.quarantined_tweets;
  j["quarantined_replies"] = ingest.report.quarantined_replies;
  j["duplicate_ids_dropped"] = ingest.report.duplicate_ids_dropped;
  j["duplicate_tweets_removed"] = report.duplicate_tweets;
  j["duplicate_replies_removed"] = report.duplicate_replies;
  j["media_urls_removed"] = report.media_urls;
  const auto report_path = (fs::path(output) / "cleanse_report.json").string();
  write_file(report_path, j.dump(2) + "\n");

  manifest.output(users_out);
  manifest.output(tweets_out);
  manifest.output(replies_out);
  manifest.output(report_path);
  manifest.write(g.seed);
  std::cerr << "[ingest] " << clean.tweets.size() << " tweets kept; removed "
            << report.duplicate_tweets << " duplicate tweets, "
            << report.media_urls << " media urls\n";
  return 0;
}

// --------------------------------------------------------- train-topics --

int cmd_train_topics(const GlobalOptions& g, const std::string& input,
                     int builtin_docs, const std::string& test_input,
                     const std::string& algo_name, const std::string& output,
                     const std::vector<std::string>& hp_kvs,
                     const std::string& stopwords_path) {
  const auto algo = topics::parse_topic_algorithm(algo_name);
  if (!algo) throw CLI::ValidationError("--algo", "unknown algorithm " + algo_name);

  const auto out_dir = fs::path(output).has_parent_path()
                           ? fs::path(output).parent_path().string()
                           : std::string(".");
  ManifestWriter manifest("train-topics", out_dir);
  manifest.config("algo", algo_name);
  manifest.config("input", input.empty() ? "<builtin>" : input);

  topics::TopicHyperParams hp;
  hp.seed = g.seed;
  for (const auto& [k, v] : parse_hp(hp_kvs)) {
    if (k == "alpha") hp.alpha = std::stod(v);
    else if (k == "epochs") hp.epochs = std::stoi(v);
    else if (k == "learning_rate") hp.learning_rate = std::stod(v);
    else if (k == "l2") hp.l2 = std::stod(v);
    else if (k == "batch_size") hp.batch_size = std::stoi(v);
    else throw DataError("train-topics: unknown hyperparameter '" + k + "'");
    manifest.config("hp." + k, v);
  }

  textproc::TokenizerConfig tok;
  if (!stopwords_path.empty()) {
    tok.stopwords = textproc::load_stopwords(stopwords_path);
    manifest.input(stopwords_path);
  }

  std::vector<topics::LabeledDoc> docs;
  if (input.empty()) {
    docs = synthgen::builtin_newsgroup_documents(builtin_docs, g.seed);
    manifest.config("builtin_docs", static_cast<std::int64_t>(builtin_docs));
  } else {
    manifest.input(input);
    docs = topics::load_newsgroups_dir(input);
  }
  std::cerr << "[train-topics] " << docs.size() << " documents, algorithm "
            << topics::to_string(*algo) << "\n";
  const auto model = topics::TopicModel::train(docs, *algo, hp, tok);
  std::cerr << "[train-topics] training accuracy "
            << model.training_accuracy() << "\n";
  if (!test_input.empty()) {
    const auto test_docs = topics::load_newsgroups_dir(test_input);
    manifest.input(test_input);
    std::cerr << "[train-topics] test accuracy " << model.accuracy(test_docs)
              << " on " << test_docs.size() << " documents\n";
  }
  model.save(output);
  manifest.output(output);
  manifest.write(g.seed);
  return 0;
}

// ------------------------------------------------------------------ tag --

int cmd_tag(const GlobalOptions& g, const std::string& input,
            const std::string& model_path, const std::string& output,
            double min_score, const std::string& mapping_path) {
  ManifestWriter manifest("tag", output);
  manifest.config("input", input);
  manifest.config("min_score", min_score);

  const auto corpus_data = load_corpus(input, false, manifest);
  const auto model = load_or_build_topic_model(model_path, g.seed);
  if (!model_path.empty()) manifest.input(model_path);

  const auto mapping = mapping_path.empty()
                           ? topics::TaxonomyMapping::standard()
                           : topics::TaxonomyMapping::from_tsv(mapping_path);
  if (!mapping_path.empty()) manifest.input(mapping_path);

  std::unique_ptr<topics::ExternalTagger> tagger;
  if (const char* url = std::getenv("SPAMLENS_NLU_URL"); url && *url) {
    std::cerr << "[tag] using external tagger at " << url << "\n";
    tagger = std::make_unique<topics::HttpTagger>(url);
    manifest.config("nlu_url", std::string(url));
  } else {
    tagger = std::make_unique<topics::OfflineStubTagger>(&model, &mapping);
    manifest.config("nlu_url", "<offline stub>");
  }

  const auto result =
      topics::tag_corpus(corpus_data, model, *tagger, mapping, min_score, g.threads);
  fs::create_directories(output);
  const auto assignments_path = (fs::path(output) / "assignments.csv").string();
  const auto stats_path = (fs::path(output) / "matching_stats.csv").string();
  topics::write_assignments_csv(result.assignments, assignments_path);
  topics::write_matching_stats_csv(result.stats, stats_path);
  manifest.output(assignments_path);
  manifest.output(stats_path);
  manifest.write(g.seed);
  std::cerr << "[tag] accepted " << result.stats.accepted << " / "
            << result.stats.total_tweets << " tweets"
            << (result.stats.stub_tagger ? " (offline stub: agreement is trivially high)" : "")
            << "\n";
  return 0;
}

// ------------------------------------------------------------- features --

int cmd_features(const GlobalOptions& g, const std::string& input,
                 const std::string& assignments_path, const std::string& output,
                 const std::string& topic_name, const std::string& lexicon_path) {
  ManifestWriter manifest("features", output);
  manifest.config("input", input);
  manifest.config("topic", topic_name);

  const auto topic = topics::parse_topic(topic_name);
  if (!topic) throw CLI::ValidationError("--topic", "unknown topic " + topic_name);

  const auto corpus_data = load_corpus(input, false, manifest);
  manifest.input(assignments_path);
  const auto assignments = topics::read_assignments_csv(assignments_path);

  sentiment::SentimentLexicon lexicon = sentiment::SentimentLexicon::builtin();
  if (!lexicon_path.empty()) {
    lexicon = sentiment::SentimentLexicon::from_tsv(lexicon_path);
    manifest.input(lexicon_path);
  }

  const auto matrix = features::build_feature_matrix(
      corpus_data, assignments, lexicon, *topic, std::nullopt, g.threads);

  fs::create_directories(output);
  const auto features_path = (fs::path(output) / "features.csv").string();
  const auto counts_path = (fs::path(output) / "topic_counts.csv").string();
  features::write_features_csv(matrix, features_path);
  features::write_topic_counts_csv(matrix, counts_path);
  manifest.output(features_path);
  manifest.output(counts_path);
  manifest.write(g.seed);
  std::cerr << "[features] wrote " << matrix.rows.size() << " rows to "
            << features_path << "\n";
  return 0;
}

// --------------------------------------------------------------- select --

int cmd_select(const GlobalOptions& g, const std::string& input, double lambda,
               const std::string& output) {
  ManifestWriter manifest("select", output);
  manifest.config("input", input);
  manifest.config("lambda", lambda);
  manifest.input(input);

  const auto matrix = features::read_features_csv(input);
  const auto result = features::lasso_select(matrix, lambda);
  const double lmax = features::lasso_lambda_max(matrix);

  fs::create_directories(output);
  std::ostringstream out;
  out << "feature,weight,selected\n";
  for (int j = 0; j < features::kNumFeatures; ++j) {
    const auto& name = features::feature_names()[j];
    const bool selected =
        std::find(result.selected.begin(), result.selected.end(), name) !=
        result.selected.end();
    out << name << ',' << format_double(result.weights[j]) << ','
        << (selected ? 1 : 0) << '\n';
  }
  const auto path = (fs::path(output) / "selected.csv").string();
  write_file(path, out.str());
  manifest.output(path);
  manifest.write(g.seed);
  std::cerr << "[select] lambda " << lambda << " (lambda_max " << lmax << "): "
            << result.selected.size() << " features selected\n";
  return 0;
}

// ---------------------------------------------------------------- train --

void write_importance_csv(const models::TrainedModel& model,
                          const std::string& path) {
  std::ostringstream out;
  out << "feature,weight\n";
  for (const auto& [name, weight] : model.feature_importance())
    out << name << ',' << format_double(weight) << '\n';
  write_file(path, out.str());
}

int cmd_train(const GlobalOptions& g, const std::string& input,
              const std::string& algo_name, const std::vector<std::string>& hp_kvs,
              const std::string& output, int search_budget, int cv_k) {
  ManifestWriter manifest("train", output);
  manifest.config("input", input);
  manifest.config("algo", algo_name);
  manifest.input(input);

  const auto algo = models::parse_algorithm(algo_name);
  if (!algo) throw CLI::ValidationError("--algo", "unknown algorithm " + algo_name);

  const auto matrix = features::read_features_csv(input);
  const auto data = models::to_labeled_data(matrix);

  models::ModelSpec spec;
  spec.algorithm = *algo;
  spec.seed = g.seed;
  spec.hyperparameters = parse_hp(hp_kvs);
  for (const auto& [k, v] : spec.hyperparameters) manifest.config("hp." + k, v);
  models::validate_spec(spec);

  fs::create_directories(output);
  if (search_budget > 0) {
    manifest.config("search_budget", static_cast<std::int64_t>(search_budget));
    manifest.config("cv_k", static_cast<std::int64_t>(cv_k));
    const auto space = models::default_search_space(*algo);
    const auto outcome = models::random_search(*algo, space, data, search_budget,
                                               cv_k, g.seed, g.threads);
    spec = outcome.best;
    // Explicit --hp overrides win over searched values.
    for (const auto& [k, v] : parse_hp(hp_kvs)) spec.hyperparameters[k] = v;
    std::ostringstream trials;
    trials << "trial,spec,failed,mean_f1,mean_auc\n";
    for (std::size_t i = 0; i < outcome.trials.size(); ++i) {
      const auto& t = outcome.trials[i];
      trials << i << ',' << csv_escape(models::spec_to_string(t.spec)) << ','
             << (t.failed ? 1 : 0) << ',' << format_double(t.mean_f1) << ','
             << format_double(t.mean_auc) << '\n';
    }
    const auto trials_path = (fs::path(output) / "search_trials.csv").string();
    write_file(trials_path, trials.str());
    manifest.output(trials_path);
    std::cerr << "[train] random search best: " << models::spec_to_string(spec)
              << " (mean F1 " << outcome.best_cv.mean.f1 << ")\n";
  }

  const auto model = models::train(spec, data, g.threads);
  const auto model_path = (fs::path(output) / "model.json").string();
  model.save(model_path);
  const auto importance_path = (fs::path(output) / "importance.csv").string();
  write_importance_csv(model, importance_path);
  manifest.output(model_path);
  manifest.output(importance_path);
  manifest.write(g.seed);
  std::cerr << "[train] " << models::spec_to_string(spec) << " -> " << model_path
            << "\n";
  return 0;
}

// ------------------------------------------------------------- evaluate --

int cmd_evaluate(const GlobalOptions& g, const std::string& input,
                 std::vector<std::string> algo_names,
                 const std::vector<std::string>& hp_kvs, int k, double split,
                 const std::string& output) {
  ManifestWriter manifest("evaluate", output);
  manifest.config("input", input);
  manifest.config("k", static_cast<std::int64_t>(k));
  manifest.config("split", split);
  manifest.input(input);

  if (algo_names.empty()) {
    for (const auto a : models::all_algorithms())
      algo_names.push_back(models::to_string(a));
  }
  const auto hp = parse_hp(hp_kvs);
  const auto matrix = features::read_features_csv(input);
  const auto data = models::to_labeled_data(matrix);
  if (split <= 0.0 || split >= 1.0)
    throw CLI::ValidationError("--split", "must be in (0,1)");

  // Deterministic stratified holdout: the last ceil((1-split)*n_c) of each
  // class's shuffled members form the test set.
  const int holdout_folds = std::max(
      2, static_cast<int>(std::lround(1.0 / (1.0 - split))));
  const auto fold_of = models::make_folds(data, holdout_folds, true, g.seed);
  models::LabeledData train_set, test_set;
  train_set.feature_names = data.feature_names;
  test_set.feature_names = data.feature_names;
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto& dst = fold_of[i] == 0 ? test_set : train_set;
    dst.x.push_back(data.x[i]);
    dst.y.push_back(data.y[i]);
  }

  std::ostringstream metrics;
  metrics << "algorithm,fold,accuracy,precision,recall,f1,auc\n";
  std::ostringstream roc;
  roc << "algorithm,fpr,tpr,threshold\n";

  const auto emit = [&](const std::string& algo, const std::string& fold,
                        const models::FoldMetrics& m) {
    metrics << algo << ',' << fold << ',' << format_double(m.accuracy) << ','
            << format_double(m.precision) << ',' << format_double(m.recall)
            << ',' << format_double(m.f1) << ',' << format_double(m.auc) << '\n';
  };

  for (const auto& algo_name : algo_names) {
    const auto algo = models::parse_algorithm(algo_name);
    if (!algo)
      throw CLI::ValidationError("--algo", "unknown algorithm " + algo_name);
    models::ModelSpec spec;
    spec.algorithm = *algo;
    spec.seed = g.seed;
    // The --hp pool is shared across algorithms; each one takes only the
    // keys it declares.
    for (const auto& [key, value] : hp) {
      if (models::default_hyperparameters(*algo).count(key))
        spec.hyperparameters[key] = value;
    }
    models::validate_spec(spec);

    std::cerr << "[evaluate] " << algo_name << ": " << k << "-fold CV\n";
    const auto cv = models::cross_validate(spec, data, k, true, g.seed, g.threads);
    for (int f = 0; f < cv.k; ++f)
      emit(algo_name, std::to_string(f + 1), cv.folds[f]);
    emit(algo_name, "mean", cv.mean);
    emit(algo_name, "std", cv.stddev);

    const auto model = models::train(spec, train_set, g.threads);
    const auto probs = model.predict_proba(test_set);
    models::FoldMetrics hm;
    const auto counts = eval::confusion(probs, test_set.y, 0.5);
    const auto prf = eval::prf_metrics(counts);
    hm.accuracy = prf.accuracy;
    hm.precision = prf.precision;
    hm.recall = prf.recall;
    hm.f1 = prf.f1;
    const auto roc_result = eval::roc_auc(probs, test_set.y);
    hm.auc = roc_result.auc;
    emit(algo_name, "holdout", hm);
    for (const auto& point : roc_result.points) {
      roc << algo_name << ',' << format_double(point.fpr) << ','
          << format_double(point.tpr) << ',' << format_double(point.threshold)
          << '\n';
    }
  }

  fs::create_directories(output);
  const auto metrics_path = (fs::path(output) / "metrics.csv").string();
  const auto roc_path = (fs::path(output) / "roc.csv").string();
  write_file(metrics_path, metrics.str());
  write_file(roc_path, roc.str());
  manifest.output(metrics_path);
  manifest.output(roc_path);
  manifest.write(g.seed);
  return 0;
}

// ----------------------------------------------------------------- rank --

int cmd_rank(const GlobalOptions& g, const std::string& input,
             const std::string& topic_counts, std::vector<std::string> methods,
             const std::string& model_path, const std::string& ks_text,
             const std::string& output) {
  ManifestWriter manifest("rank", output);
  manifest.config("input", input);
  manifest.input(input);

  auto matrix = features::read_features_csv(input);
  if (!topic_counts.empty()) {
    features::read_topic_counts_csv(matrix, topic_counts);
    manifest.input(topic_counts);
  }
  const auto labels = labels_of(matrix);

  if (methods.empty()) methods = {"ddf", "dif", "low_in_degree", "dfm"};
  std::vector<int> ks;
  {
    std::stringstream ss(ks_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (trim(item).empty()) continue;
      ks.push_back(std::stoi(item));
    }
    if (ks.empty()) throw CLI::ValidationError("--k", "no k values given");
  }
  manifest.config("k", ks_text);

  fs::create_directories(output);
  std::vector<eval::ApkRow> apk_rows;
  for (const auto& method_name : methods) {
    const auto method = eval::parse_rank_method(method_name);
    if (!method)
      throw CLI::ValidationError("--method", "unknown method " + method_name);
    eval::RankingResult ranking;
    if (*method == eval::RankMethod::model) {
      if (model_path.empty())
        throw CLI::ValidationError("--model", "required for --method model");
      manifest.input(model_path);
      const auto model = models::TrainedModel::load(model_path);
      std::vector<std::pair<std::string, double>> entries;
      for (const auto& row : matrix.rows)
        entries.emplace_back(row.user_id, model.predict_proba(row.fv));
      ranking = eval::make_ranking(eval::RankMethod::model, std::move(entries));
    } else {
      ranking = eval::rank_baseline(*method, matrix);
    }
    const auto ranking_path =
        (fs::path(output) / ("ranking_" + method_name + ".csv")).string();
    eval::write_ranking_csv(ranking, labels, ranking_path);
    manifest.output(ranking_path);
    for (const int k : ks) {
      if (k < 1 || static_cast<std::size_t>(k) > ranking.entries.size()) {
        std::cerr << "[rank] skipping k=" << k << " (out of range)\n";
        continue;
      }
      apk_rows.push_back({method_name, k,
                          eval::precision_at_k(ranking, labels, k),
                          eval::average_precision_at_k(ranking, labels, k)});
    }
  }
  const auto apk_path = (fs::path(output) / "apk.csv").string();
  eval::write_apk_csv(apk_rows, apk_path);
  manifest.output(apk_path);
  manifest.write(g.seed);
  std::cerr << "[rank] wrote " << apk_rows.size() << " (method, k) rows\n";
  return 0;
}

// --------------------------------------------------------------- report --

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(parse_csv_line(line));
  }
  return rows;
}

int cmd_report(const GlobalOptions& g, const std::string& input,
               const std::string& output) {
  ManifestWriter manifest("report", output);
  manifest.config("input", input);
  fs::create_directories(output);
  bool wrote_any = false;

  const auto roc_path = fs::path(input) / "roc.csv";
  if (fs::exists(roc_path)) {
    manifest.input(roc_path.string());
    const auto rows = read_csv(roc_path.string());
    std::map<std::string, svg::Series> by_algo;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      auto& series = by_algo[rows[i][0]];
      series.name = rows[i][0];
      series.points.emplace_back(std::stod(rows[i][1]), std::stod(rows[i][2]));
    }
    std::vector<svg::Series> series;
    for (auto& [name, s] : by_algo) series.push_back(std::move(s));
    const auto out_path = (fs::path(output) / "roc.svg").string();
    write_file(out_path, svg::line_chart("ROC (holdout)", "false positive rate",
                                         "true positive rate", series, true));
    manifest.output(out_path);
    wrote_any = true;
  }

  const auto metrics_path = fs::path(input) / "metrics.csv";
  if (fs::exists(metrics_path)) {
    manifest.input(metrics_path.string());
    const auto rows = read_csv(metrics_path.string());
    // Grouped bars of the CV means: one group per metric, one bar per algo.
    const std::vector<std::string> metric_names = {"accuracy", "precision",
                                                   "recall", "f1", "auc"};
    std::vector<svg::Series> series;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i][1] != "mean") continue;
      svg::Series s;
      s.name = rows[i][0];
      for (std::size_t m = 0; m < metric_names.size(); ++m)
        s.points.emplace_back(static_cast<double>(m), std::stod(rows[i][2 + m]));
      series.push_back(std::move(s));
    }
    const auto out_path = (fs::path(output) / "metrics.svg").string();
    write_file(out_path, svg::grouped_bar_chart("Cross-validation means",
                                                metric_names, series));
    manifest.output(out_path);
    wrote_any = true;
  }

  const auto apk_path = fs::path(input) / "apk.csv";
  if (fs::exists(apk_path)) {
    manifest.input(apk_path.string());
    const auto rows = read_csv(apk_path.string());
    std::map<std::string, svg::Series> pk, apk;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double k = std::stod(rows[i][1]);
      pk[rows[i][0]].name = rows[i][0];
      pk[rows[i][0]].points.emplace_back(k, std::stod(rows[i][2]));
      apk[rows[i][0]].name = rows[i][0];
      apk[rows[i][0]].points.emplace_back(k, std::stod(rows[i][3]));
    }
    std::vector<svg::Series> pk_series, apk_series;
    for (auto& [name, s] : pk) pk_series.push_back(std::move(s));
    for (auto& [name, s] : apk) apk_series.push_back(std::move(s));
    const auto pk_path = (fs::path(output) / "pk.svg").string();
    const auto apk_out = (fs::path(output) / "apk.svg").string();
    write_file(pk_path, svg::line_chart("P@k", "k", "precision", pk_series));
    write_file(apk_out, svg::line_chart("AP@k", "k", "average precision", apk_series));
    manifest.output(pk_path);
    manifest.output(apk_out);
    wrote_any = true;
  }

  const auto importance_path = fs::path(input) / "importance.csv";
  if (fs::exists(importance_path)) {
    manifest.input(importance_path.string());
    const auto rows = read_csv(importance_path.string());
    std::vector<std::pair<std::string, double>> bars;
    for (std::size_t i = 1; i < rows.size(); ++i)
      bars.emplace_back(rows[i][0], std::stod(rows[i][1]));
    const auto out_path = (fs::path(output) / "importance.svg").string();
    write_file(out_path, svg::bar_chart("Feature importance", bars));
    manifest.output(out_path);
    wrote_any = true;
  }

  if (!wrote_any)
    throw DataError("report: no known CSVs (roc/metrics/apk/importance) in " + input);
  manifest.write(g.seed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spamlens: multi-topic social spammer detection pipeline"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();  // --seed/--threads may follow the subcommand

  GlobalOptions g;
  app.add_option("--threads", g.threads, "worker thread cap")->capture_default_str();
  app.add_option("--seed", g.seed, "master seed")->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "generate a labeled synthetic corpus");
  std::string synth_out;
  int synth_n = 4000, synth_tmin = 20, synth_tmax = 60;
  double synth_ratio = 0.3775;
  synth->add_option("--output", synth_out, "output directory")->required();
  synth->add_option("--n", synth_n, "number of users")->capture_default_str();
  synth->add_option("--spam-ratio", synth_ratio, "spammer fraction")->capture_default_str();
  synth->add_option("--tweets-min", synth_tmin)->capture_default_str();
  synth->add_option("--tweets-max", synth_tmax)->capture_default_str();

  // ingest
  auto* ingest = app.add_subcommand("ingest", "load, validate and cleanse a corpus");
  std::string ingest_in, ingest_out;
  bool ingest_strict = false;
  ingest->add_option("--input", ingest_in, "corpus directory")->required();
  ingest->add_option("--output", ingest_out, "output directory")->required();
  ingest->add_flag("--strict", ingest_strict, "hard-fail on referential errors");

  // train-topics
  auto* tt = app.add_subcommand("train-topics", "train the newsgroup topic classifier");
  std::string tt_in, tt_test, tt_algo = "sgd_softmax", tt_out = "topic_model.json";
  std::string tt_stopwords;
  int tt_builtin = 50;
  std::vector<std::string> tt_hp;
  tt->add_option("--input", tt_in, "newsgroups directory (one subdir per class)");
  tt->add_option("--test-input", tt_test, "held-out newsgroups directory");
  tt->add_option("--builtin-docs", tt_builtin,
                 "docs per class for the builtin corpus (when no --input)")
      ->capture_default_str();
  tt->add_option("--algo", tt_algo, "multinomial_nb | logistic_regression | sgd_softmax")
      ->capture_default_str();
  tt->add_option("--output", tt_out, "model file")->capture_default_str();
  tt->add_option("--hp", tt_hp, "hyperparameter key=value (repeatable)");
  tt->add_option("--stopwords", tt_stopwords, "stopword file, one token per line");

  // tag
  auto* tag = app.add_subcommand("tag", "label tweets by dual-tagger agreement");
  std::string tag_in, tag_model, tag_out, tag_mapping;
  double tag_min_score = 0.0;
  tag->add_option("--input", tag_in, "corpus directory")->required();
  tag->add_option("--model", tag_model, "topic model file (builtin when absent)");
  tag->add_option("--output", tag_out, "output directory")->required();
  tag->add_option("--min-score", tag_min_score, "agreement score floor")
      ->capture_default_str();
  tag->add_option("--mapping", tag_mapping, "taxonomy mapping TSV override");

  // features
  auto* feat = app.add_subcommand("features", "build the 18-feature matrix");
  std::string feat_in, feat_assign, feat_out, feat_lexicon;
  std::string feat_topic = "technology_and_computing";
  feat->add_option("--input", feat_in, "corpus directory")->required();
  feat->add_option("--assignments", feat_assign, "assignments.csv from tag")->required();
  feat->add_option("--output", feat_out, "output directory")->required();
  feat->add_option("--topic", feat_topic, "designated topic")->capture_default_str();
  feat->add_option("--lexicon", feat_lexicon, "sentiment lexicon TSV");

  // select
  auto* select = app.add_subcommand("select", "lasso feature selection");
  std::string select_in, select_out;
  double select_lambda = 0.01;
  select->add_option("--input", select_in, "features.csv")->required();
  select->add_option("--lambda", select_lambda, "L1 penalty")->capture_default_str();
  select->add_option("--output", select_out, "output directory")->required();

  // train
  auto* train = app.add_subcommand("train", "train a spammer classifier");
  std::string train_in, train_algo, train_out;
  std::vector<std::string> train_hp;
  int train_search = 0, train_k = 10;
  train->add_option("--input", train_in, "features.csv")->required();
  train->add_option("--algo", train_algo, "classifier algorithm")->required();
  train->add_option("--hp", train_hp, "hyperparameter key=value (repeatable)");
  train->add_option("--output", train_out, "output directory")->required();
  train->add_option("--search", train_search, "random-search budget (0 = off)")
      ->capture_default_str();
  train->add_option("--k", train_k, "CV folds during search")->capture_default_str();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "k-fold CV + holdout metrics");
  std::string eval_in, eval_out;
  std::vector<std::string> eval_algos, eval_hp;
  int eval_k = 10;
  double eval_split = 0.8;
  evaluate->add_option("--input", eval_in, "features.csv")->required();
  evaluate->add_option("--algo", eval_algos, "algorithms (repeatable; default all)");
  evaluate->add_option("--hp", eval_hp, "hyperparameter key=value (repeatable)");
  evaluate->add_option("--k", eval_k, "CV folds")->capture_default_str();
  evaluate->add_option("--split", eval_split, "train fraction for the holdout")
      ->capture_default_str();
  evaluate->add_option("--output", eval_out, "output directory")->required();

  // rank
  auto* rank = app.add_subcommand("rank", "baseline and model rankings with P@k/AP@k");
  std::string rank_in, rank_counts, rank_model, rank_out, rank_ks = "10,20,30,40,50";
  std::vector<std::string> rank_methods;
  rank->add_option("--input", rank_in, "features.csv")->required();
  rank->add_option("--topic-counts", rank_counts, "topic_counts.csv (needed by dfm)");
  rank->add_option("--method", rank_methods,
                   "ddf | dif | low_in_degree | dfm | model (repeatable)");
  rank->add_option("--model", rank_model, "model.json for --method model");
  rank->add_option("--k", rank_ks, "comma-separated k list")->capture_default_str();
  rank->add_option("--output", rank_out, "output directory")->required();

  // report
  auto* report = app.add_subcommand("report", "render SVG charts from CSV reports");
  std::string report_in, report_out;
  report->add_option("--input", report_in, "directory with csv reports")->required();
  report->add_option("--output", report_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;  // usage error
  }

  try {
    if (synth->parsed())
      return cmd_synth(g, synth_out, synth_n, synth_ratio, synth_tmin, synth_tmax);
    if (ingest->parsed()) return cmd_ingest(g, ingest_in, ingest_out, ingest_strict);
    if (tt->parsed())
      return cmd_train_topics(g, tt_in, tt_builtin, tt_test, tt_algo, tt_out,
                              tt_hp, tt_stopwords);
    if (tag->parsed())
      return cmd_tag(g, tag_in, tag_model, tag_out, tag_min_score, tag_mapping);
    if (feat->parsed())
      return cmd_features(g, feat_in, feat_assign, feat_out, feat_topic, feat_lexicon);
    if (select->parsed()) return cmd_select(g, select_in, select_lambda, select_out);
    if (train->parsed())
      return cmd_train(g, train_in, train_algo, train_hp, train_out, train_search,
                       train_k);
    if (evaluate->parsed())
      return cmd_evaluate(g, eval_in, eval_algos, eval_hp, eval_k, eval_split,
                          eval_out);
    if (rank->parsed())
      return cmd_rank(g, rank_in, rank_counts, rank_methods, rank_model, rank_ks,
                      rank_out);
    if (report->parsed()) return cmd_report(g, report_in, report_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
