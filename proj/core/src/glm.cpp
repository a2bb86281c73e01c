#include <cmath>

#include "models_internal.hpp"

namespace spamlens::models::internal {
namespace {

// Gaussian elimination with partial pivoting; a is destroyed.
std::vector<double> solve_dense(std::vector<std::vector<double>> a,
                                std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-14) {
      a[pivot][col] += 1e-10;  // ridge jitter for singular systems
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    const double inv = 1.0 / a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a[r][col] * inv;
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

double mean_log_loss(const std::vector<std::vector<double>>& x,
                     const std::vector<int>& y, const std::vector<double>& w,
                     double b, const std::vector<bool>& active) {
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double z = b;
    for (std::size_t j = 0; j < w.size(); ++j)
      if (active[j]) z += w[j] * x[i][j];
    const double p = std::clamp(sigmoid(z), 1e-15, 1.0 - 1e-15);
    loss -= y[i] == 1 ? std::log(p) : std::log(1.0 - p);
  }
  return loss / static_cast<double>(x.size());
}

}  // namespace

GlmParams train_glm(const TrainContext& ctx, const HpReader& hp) {
  const std::string family = hp.str("family");
  if (family != "binomial")
    throw DataError("glm_logistic: only the binomial family is supported, got '" +
                    family + "'");
  const std::string solver = hp.str("solver");
  if (solver != "irlsm" && solver != "l-bfgs" && solver != "irls")
    throw DataError("glm_logistic: unknown solver '" + solver + "'");
  const bool fit_intercept = hp.boolean("fit_intercept");
  const int max_iterations = hp.integer("max_iterations");
  const double tolerance = hp.real("tolerance");

  const std::size_t n = ctx.x.size();
  const std::size_t d = ctx.x.front().size();

  // Standardized zero-variance columns are all-zero: keep them out of the
  // Newton system so it stays non-singular, their weight stays 0.
  std::vector<bool> active(d, false);
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (ctx.x[i][j] != 0.0) {
        active[j] = true;
        cols.push_back(j);
        break;
      }
    }
  }

  GlmParams p;
  p.weights.assign(d, 0.0);
  p.intercept = 0.0;

  const std::size_t dim = cols.size() + (fit_intercept ? 1 : 0);
  std::vector<double> eta(n, 0.0), prob(n), grad(dim);
  double loss = mean_log_loss(ctx.x, ctx.y, p.weights, p.intercept, active);

  for (int iter = 0; iter < max_iterations; ++iter) {
    p.iterations = iter;
    for (std::size_t i = 0; i < n; ++i) {
      double z = p.intercept;
      for (const auto j : cols) z += p.weights[j] * ctx.x[i][j];
      eta[i] = z;
      prob[i] = sigmoid(z);
    }
    // Mean-gradient of the log-loss.
    double gmax = 0.0;
    for (std::size_t a = 0; a < cols.size(); ++a) {
      double g = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        g += (prob[i] - ctx.y[i]) * ctx.x[i][cols[a]];
      grad[a] = g / static_cast<double>(n);
      gmax = std::max(gmax, std::abs(grad[a]));
    }
    if (fit_intercept) {
      double g = 0.0;
      for (std::size_t i = 0; i < n; ++i) g += prob[i] - ctx.y[i];
      grad[cols.size()] = g / static_cast<double>(n);
      gmax = std::max(gmax, std::abs(grad[cols.size()]));
    }
    p.grad_norm = gmax;
    if (gmax < tolerance) return p;

    // Newton system: (X^T W X / n) delta = -grad, with the intercept column
    // appended when fitted.
    std::vector<std::vector<double>> h(dim, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      const double w = std::max(prob[i] * (1.0 - prob[i]), 1e-10);
      for (std::size_t a = 0; a < cols.size(); ++a) {
        const double xa = ctx.x[i][cols[a]];
        for (std::size_t b = a; b < cols.size(); ++b)
          h[a][b] += w * xa * ctx.x[i][cols[b]];
        if (fit_intercept) h[a][cols.size()] += w * xa;
      }
      if (fit_intercept) h[cols.size()][cols.size()] += w;
    }
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = 0; b < a; ++b) h[a][b] = h[b][a];
    for (auto& row : h)
      for (double& v : row) v /= static_cast<double>(n);

    // Small ridge keeps the step bounded when columns are collinear
    // (x6/x7 are deterministically related); it damps the step only, the
    // optimum is still defined by the gradient tolerance.
    for (std::size_t a = 0; a < dim; ++a) h[a][a] += 1e-8;
    std::vector<double> rhs(dim);
    for (std::size_t a = 0; a < dim; ++a) rhs[a] = -grad[a];
    const std::vector<double> delta = solve_dense(std::move(h), std::move(rhs));

    // Newton can still propose a hopeless scale on ill-conditioned data;
    // normalize overly long steps before the line search.
    double dnorm = 0.0;
    for (const double v : delta) dnorm = std::max(dnorm, std::abs(v));

    // Step-halving keeps IRLS monotone on badly scaled or separable data.
    double step = dnorm > 1e3 ? 1e3 / dnorm : 1.0;
    for (int half = 0; half < 60; ++half) {
      GlmParams trial = p;
      for (std::size_t a = 0; a < cols.size(); ++a)
        trial.weights[cols[a]] += step * delta[a];
      if (fit_intercept) trial.intercept += step * delta[cols.size()];
      const double trial_loss =
          mean_log_loss(ctx.x, ctx.y, trial.weights, trial.intercept, active);
      if (trial_loss <= loss + 1e-15) {
        p.weights = std::move(trial.weights);
        p.intercept = trial.intercept;
        loss = trial_loss;
        break;
      }
      step *= 0.5;
    }
  }
  return p;
}

}  // namespace spamlens::models::internal
