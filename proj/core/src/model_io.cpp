#include <json.hpp>

#include "spamlens/csv.hpp"
#include "spamlens/models.hpp"
#include "spamlens/util.hpp"

namespace spamlens::models {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json tree_to_json(const Tree& tree) {
  ordered_json jt;
  ordered_json nodes = ordered_json::array();
  for (const auto& n : tree.nodes) {
    ordered_json jn;
    jn["feature"] = n.feature;
    jn["threshold"] = n.threshold;
    jn["left"] = n.left;
    jn["right"] = n.right;
    jn["value"] = n.value;
    jn["majority"] = n.majority;
    jn["n"] = n.n_samples;
    nodes.push_back(std::move(jn));
  }
  jt["nodes"] = std::move(nodes);
  jt["importance"] = tree.importance;
  return jt;
}

Tree tree_from_json(const json& jt) {
  Tree tree;
  for (const auto& jn : jt.at("nodes")) {
    TreeNode n;
    n.feature = jn.at("feature").get<int>();
    n.threshold = jn.at("threshold").get<double>();
    n.left = jn.at("left").get<int>();
    n.right = jn.at("right").get<int>();
    n.value = jn.at("value").get<double>();
    n.majority = jn.at("majority").get<int>();
    n.n_samples = jn.at("n").get<std::int64_t>();
    tree.nodes.push_back(n);
  }
  tree.importance = jt.at("importance").get<std::vector<double>>();
  if (tree.nodes.empty()) throw DataError("model file: empty tree");
  return tree;
}

}  // namespace

struct ModelIo {
  static std::string dump(const TrainedModel& m) {
    ordered_json j;
    j["model_format_version"] = 1;
    j["algorithm"] = to_string(m.spec_.algorithm);
    j["seed"] = m.spec_.seed;
    j["hyperparameters"] = m.spec_.hyperparameters;
    j["feature_names"] = m.feature_names_;
    ordered_json std_block;
    std_block["mean"] = m.mean_;
    std_block["std"] = m.stddev_;
    j["standardization"] = std::move(std_block);
    j["training_curve"] = m.training_curve_;

    ordered_json params;
    if (m.gnb_) {
      params["log_prior"] = std::vector<double>{m.gnb_->log_prior[0],
                                                m.gnb_->log_prior[1]};
      params["mean0"] = m.gnb_->mean[0];
      params["mean1"] = m.gnb_->mean[1];
      params["var0"] = m.gnb_->var[0];
      params["var1"] = m.gnb_->var[1];
    } else if (m.glm_) {
      params["weights"] = m.glm_->weights;
      params["intercept"] = m.glm_->intercept;
      params["iterations"] = m.glm_->iterations;
      params["grad_norm"] = m.glm_->grad_norm;
    } else if (m.forest_) {
      ordered_json trees = ordered_json::array();
      for (const auto& t : m.forest_->trees) trees.push_back(tree_to_json(t));
      params["trees"] = std::move(trees);
    } else if (m.gbt_) {
      params["f0"] = m.gbt_->f0;
      params["learning_rate"] = m.gbt_->learning_rate;
      ordered_json trees = ordered_json::array();
      for (const auto& t : m.gbt_->trees) trees.push_back(tree_to_json(t));
      params["trees"] = std::move(trees);
    } else if (m.mlp_) {
      params["hidden"] = m.mlp_->hidden;
      params["activation"] =
          m.mlp_->activation == MlpActivation::rectifier ? "rectifier" : "tanh";
      params["loss"] =
          m.mlp_->loss == MlpLoss::cross_entropy ? "cross_entropy" : "quadratic";
      params["w1"] = m.mlp_->w1;
      params["b1"] = m.mlp_->b1;
      params["w2"] = m.mlp_->w2;
      params["b2"] = m.mlp_->b2;
    }
    j["parameters"] = std::move(params);
    return j.dump();
  }

  static TrainedModel parse(const std::string& text) {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw DataError(std::string("model file: invalid JSON: ") + e.what());
    }
    if (!j.contains("model_format_version"))
      throw DataError("model file: missing model_format_version");
    if (j["model_format_version"] != 1)
      throw DataError("model file: unsupported model_format_version");

    TrainedModel m;
    const auto algo = parse_algorithm(j.at("algorithm").get<std::string>());
    if (!algo) throw DataError("model file: unknown algorithm");
    m.spec_.algorithm = *algo;
    m.spec_.seed = j.at("seed").get<std::uint64_t>();
    m.spec_.hyperparameters =
        j.at("hyperparameters").get<std::map<std::string, std::string>>();
    m.feature_names_ = j.at("feature_names").get<std::vector<std::string>>();
    m.mean_ = j.at("standardization").at("mean").get<std::vector<double>>();
    m.stddev_ = j.at("standardization").at("std").get<std::vector<double>>();
    if (m.mean_.size() != m.feature_names_.size() ||
        m.stddev_.size() != m.feature_names_.size())
      throw DataError("model file: standardization width mismatch");
    m.training_curve_ = j.at("training_curve").get<std::vector<double>>();

    const auto& params = j.at("parameters");
    switch (m.spec_.algorithm) {
      case Algorithm::gaussian_nb: {
        GaussianNbParams p;
        const auto prior = params.at("log_prior").get<std::vector<double>>();
        if (prior.size() != 2) throw DataError("model file: bad log_prior");
        p.log_prior[0] = prior[0];
        p.log_prior[1] = prior[1];
        p.mean[0] = params.at("mean0").get<std::vector<double>>();
        p.mean[1] = params.at("mean1").get<std::vector<double>>();
        p.var[0] = params.at("var0").get<std::vector<double>>();
        p.var[1] = params.at("var1").get<std::vector<double>>();
        m.gnb_ = std::move(p);
        break;
      }
      case Algorithm::glm_logistic: {
        GlmParams p;
        p.weights = params.at("weights").get<std::vector<double>>();
        p.intercept = params.at("intercept").get<double>();
        p.iterations = params.at("iterations").get<int>();
        p.grad_norm = params.at("grad_norm").get<double>();
        m.glm_ = std::move(p);
        break;
      }
      case Algorithm::decision_tree:
      case Algorithm::random_forest: {
        ForestParams p;
        for (const auto& jt : params.at("trees")) p.trees.push_back(tree_from_json(jt));
        if (p.trees.empty()) throw DataError("model file: no trees");
        m.forest_ = std::move(p);
        break;
      }
      case Algorithm::gradient_boosted_trees: {
        GbtParams p;
        p.f0 = params.at("f0").get<double>();
        p.learning_rate = params.at("learning_rate").get<double>();
        for (const auto& jt : params.at("trees")) p.trees.push_back(tree_from_json(jt));
        m.gbt_ = std::move(p);
        break;
      }
      case Algorithm::mlp: {
        MlpParams p;
        p.hidden = params.at("hidden").get<int>();
        p.activation = params.at("activation").get<std::string>() == "tanh"
                           ? MlpActivation::tanh
                           : MlpActivation::rectifier;
        p.loss = params.at("loss").get<std::string>() == "quadratic"
                     ? MlpLoss::quadratic
                     : MlpLoss::cross_entropy;
        p.w1 = params.at("w1").get<std::vector<double>>();
        p.b1 = params.at("b1").get<std::vector<double>>();
        p.w2 = params.at("w2").get<std::vector<double>>();
        p.b2 = params.at("b2").get<double>();
        if (p.w1.size() != static_cast<std::size_t>(p.hidden) * m.feature_names_.size())
          throw DataError("model file: mlp weight width mismatch");
        m.mlp_ = std::move(p);
        break;
      }
    }
    return m;
  }
};

std::string TrainedModel::to_json() const { return ModelIo::dump(*this); }

TrainedModel TrainedModel::from_json(const std::string& json_text) {
  return ModelIo::parse(json_text);
}

void TrainedModel::save(const std::string& path) const {
  write_file(path, to_json());
}

TrainedModel TrainedModel::load(const std::string& path) {
  return from_json(read_file(path));
}

}  // namespace spamlens::models
