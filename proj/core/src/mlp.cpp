#include "spamlens/detail/mlp_net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "models_internal.hpp"

namespace spamlens::models::detail {

void MlpNet::init(Rng& rng) {
  w1.assign(static_cast<std::size_t>(hidden) * input, 0.0);
  b1.assign(hidden, 0.0);
  w2.assign(hidden, 0.0);
  b2 = 0.0;
  const double limit1 = std::sqrt(6.0 / static_cast<double>(input + hidden));
  const double limit2 = std::sqrt(6.0 / static_cast<double>(hidden + 1));
  for (double& w : w1) w = rng.uniform(-limit1, limit1);
  for (double& w : w2) w = rng.uniform(-limit2, limit2);
}

double MlpNet::forward(std::span<const double> x) const {
  double z2 = b2;
  for (int h = 0; h < hidden; ++h) {
    double z = b1[h];
    for (int j = 0; j < input; ++j) z += w1[h * input + j] * x[j];
    const double a =
        activation == MlpActivation::rectifier ? std::max(0.0, z) : std::tanh(z);
    z2 += w2[h] * a;
  }
  return internal::sigmoid(z2);
}

double MlpNet::loss_and_gradient(const std::vector<std::vector<double>>& x,
                                 const std::vector<int>& y,
                                 const std::vector<std::size_t>& batch,
                                 MlpNet& grad) const {
  grad.w1.assign(w1.size(), 0.0);
  grad.b1.assign(b1.size(), 0.0);
  grad.w2.assign(w2.size(), 0.0);
  grad.b2 = 0.0;

  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  double data_loss = 0.0;
  std::vector<double> z(hidden), a(hidden);

  for (const auto idx : batch) {
    const auto& row = x[idx];
    const double target = static_cast<double>(y[idx]);
    double z2 = b2;
    for (int h = 0; h < hidden; ++h) {
      double s = b1[h];
      for (int j = 0; j < input; ++j) s += w1[h * input + j] * row[j];
      z[h] = s;
      a[h] = activation == MlpActivation::rectifier ? std::max(0.0, s)
                                                    : std::tanh(s);
      z2 += w2[h] * a[h];
    }
    const double p = internal::sigmoid(z2);

    double dz2;
    if (loss == MlpLoss::cross_entropy) {
      const double pc = std::clamp(p, 1e-12, 1.0 - 1e-12);
      data_loss += -(target * std::log(pc) + (1.0 - target) * std::log(1.0 - pc));
      dz2 = p - target;  // d(loss)/d(z2) for sigmoid + cross-entropy
    } else {
      const double diff = p - target;
      data_loss += 0.5 * diff * diff;
      dz2 = diff * p * (1.0 - p);
    }

    grad.b2 += dz2 * inv_batch;
    for (int h = 0; h < hidden; ++h) {
      grad.w2[h] += dz2 * a[h] * inv_batch;
      const double dact = activation == MlpActivation::rectifier
                              ? (z[h] > 0.0 ? 1.0 : 0.0)
                              : 1.0 - a[h] * a[h];
      const double dz = dz2 * w2[h] * dact;
      if (dz == 0.0) continue;
      grad.b1[h] += dz * inv_batch;
      for (int j = 0; j < input; ++j)
        grad.w1[h * input + j] += dz * row[j] * inv_batch;
    }
  }

  double penalty = 0.0;
  const auto penalize = [&](const std::vector<double>& w, std::vector<double>& g) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      penalty += l1 * std::abs(w[i]) + 0.5 * l2 * w[i] * w[i];
      g[i] += l1 * (w[i] > 0.0 ? 1.0 : (w[i] < 0.0 ? -1.0 : 0.0)) + l2 * w[i];
    }
  };
  penalize(w1, grad.w1);
  penalize(w2, grad.w2);

  return data_loss * inv_batch + penalty;
}

double MlpNet::objective(const std::vector<std::vector<double>>& x,
                         const std::vector<int>& y,
                         const std::vector<std::size_t>& batch) const {
  double data_loss = 0.0;
  for (const auto idx : batch) {
    const double p = forward(x[idx]);
    const double target = static_cast<double>(y[idx]);
    if (loss == MlpLoss::cross_entropy) {
      const double pc = std::clamp(p, 1e-12, 1.0 - 1e-12);
      data_loss += -(target * std::log(pc) + (1.0 - target) * std::log(1.0 - pc));
    } else {
      const double diff = p - target;
      data_loss += 0.5 * diff * diff;
    }
  }
  data_loss /= static_cast<double>(batch.size());
  double penalty = 0.0;
  for (const double w : w1) penalty += l1 * std::abs(w) + 0.5 * l2 * w * w;
  for (const double w : w2) penalty += l1 * std::abs(w) + 0.5 * l2 * w * w;
  return data_loss + penalty;
}

double& MlpNet::parameter(std::size_t index) {
  if (index < w1.size()) return w1[index];
  index -= w1.size();
  if (index < b1.size()) return b1[index];
  index -= b1.size();
  if (index < w2.size()) return w2[index];
  return b2;
}

double MlpNet::parameter(std::size_t index) const {
  return const_cast<MlpNet*>(this)->parameter(index);
}

}  // namespace spamlens::models::detail

namespace spamlens::models::internal {

MlpParams train_mlp(const TrainContext& ctx, const HpReader& hp,
                    std::vector<double>& curve) {
  detail::MlpNet net;
  net.input = static_cast<int>(ctx.x.front().size());
  net.hidden = hp.integer("hidden_units");
  if (net.hidden < 1) throw DataError("mlp: hidden_units must be >= 1");
  const std::string act = hp.str("activation");
  if (act == "rectifier" || act == "relu") {
    net.activation = MlpActivation::rectifier;
  } else if (act == "tanh") {
    net.activation = MlpActivation::tanh;
  } else {
    throw DataError("mlp: activation must be rectifier or tanh, got '" + act + "'");
  }
  const std::string loss = hp.str("loss");
  if (loss == "cross_entropy") net.loss = MlpLoss::cross_entropy;
  else if (loss == "quadratic") net.loss = MlpLoss::quadratic;
  else throw DataError("mlp: loss must be cross_entropy or quadratic");
  net.l1 = hp.real("l1");
  net.l2 = hp.real("l2");
  const int epochs = hp.integer("epochs");
  const double lr = hp.real("learning_rate");
  const double momentum = hp.real("adaptive_rate");
  const int batch_size = std::max(1, hp.integer("batch_size"));

  Rng rng(ctx.seed);
  net.init(rng);

  detail::MlpNet grad = net;  // shape only
  detail::MlpNet velocity = net;
  velocity.w1.assign(net.w1.size(), 0.0);
  velocity.b1.assign(net.b1.size(), 0.0);
  velocity.w2.assign(net.w2.size(), 0.0);
  velocity.b2 = 0.0;

  const std::size_t n = ctx.x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  curve.clear();
  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < n; start += batch_size) {
      const std::size_t end = std::min(n, start + batch_size);
      const std::vector<std::size_t> batch(order.begin() + start,
                                           order.begin() + end);
      epoch_loss += net.loss_and_gradient(ctx.x, ctx.y, batch, grad);
      ++batches;
      const auto update = [&](std::vector<double>& w, std::vector<double>& v,
                              const std::vector<double>& g) {
        for (std::size_t i = 0; i < w.size(); ++i) {
          v[i] = momentum * v[i] - lr * g[i];
          w[i] += v[i];
        }
      };
      update(net.w1, velocity.w1, grad.w1);
      update(net.b1, velocity.b1, grad.b1);
      update(net.w2, velocity.w2, grad.w2);
      velocity.b2 = momentum * velocity.b2 - lr * grad.b2;
      net.b2 += velocity.b2;
    }
    curve.push_back(epoch_loss / static_cast<double>(batches));
  }

  MlpParams out;
  out.hidden = net.hidden;
  out.activation = net.activation;
  out.loss = net.loss;
  out.w1 = std::move(net.w1);
  out.b1 = std::move(net.b1);
  out.w2 = std::move(net.w2);
  out.b2 = net.b2;
  return out;
}

}  // namespace spamlens::models::internal
