#include <algorithm>
#include <cmath>
#include <numeric>

#include "spamlens/features.hpp"
#include "spamlens/util.hpp"

namespace spamlens::features {
namespace {

struct Standardized {
  std::vector<std::vector<double>> x;  // n x d, zero-variance columns zeroed
  std::vector<int> y;
  std::vector<bool> active;
};

Standardized standardize(const FeatureMatrix& matrix) {
  Standardized s;
  for (const auto& row : matrix.rows) {
    if (!row.label) continue;
    s.x.emplace_back(row.fv.x.begin(), row.fv.x.end());
    s.y.push_back(*row.label);
  }
  if (s.x.size() < 2) throw DataError("lasso_select: need at least 2 labeled rows");
  const std::size_t n = s.x.size(), d = kNumFeatures;
  s.active.assign(d, true);
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (const auto& row : s.x) mean += row[j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& row : s.x) var += (row[j] - mean) * (row[j] - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    if (sd == 0.0) {
      s.active[j] = false;
      for (auto& row : s.x) row[j] = 0.0;
    } else {
      for (auto& row : s.x) row[j] = (row[j] - mean) / sd;
    }
  }
  const auto pos = std::count(s.y.begin(), s.y.end(), 1);
  if (pos == 0 || pos == static_cast<std::int64_t>(n))
    throw DataError("lasso_select: labels contain a single class");
  return s;
}

double soft_threshold(double a, double lambda) {
  if (a > lambda) return a - lambda;
  if (a < -lambda) return a + lambda;
  return 0.0;
}

}  // namespace

double lasso_lambda_max(const FeatureMatrix& matrix) {
  const Standardized s = standardize(matrix);
  const std::size_t n = s.x.size();
  double ybar = 0.0;
  for (const int v : s.y) ybar += v;
  ybar /= static_cast<double>(n);
  double lmax = 0.0;
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    if (!s.active[j]) continue;
    double g = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      g += s.x[i][j] * (static_cast<double>(s.y[i]) - ybar);
    lmax = std::max(lmax, std::abs(g) / static_cast<double>(n));
  }
  return lmax;
}

LassoResult lasso_select(const FeatureMatrix& matrix, double lambda) {
  if (lambda < 0.0) throw DataError("lasso_select: lambda must be >= 0");
  const Standardized s = standardize(matrix);
  const std::size_t n = s.x.size(), d = kNumFeatures;

  LassoResult result;
  result.lambda = lambda;
  result.weights.assign(d, 0.0);

  double ybar = 0.0;
  for (const int v : s.y) ybar += v;
  ybar /= static_cast<double>(n);
  result.intercept = std::log(ybar / (1.0 - ybar));

  // Outer IRLS loop; inner cyclic coordinate descent with soft
  // thresholding on the penalized weighted least squares problem.
  std::vector<double> eta(n), prob(n), weight(n), residual(n);
  constexpr int kMaxOuter = 200;
  constexpr int kMaxInner = 200;
  constexpr double kInnerTol = 1e-12;
  constexpr double kOuterTol = 1e-10;

  for (int outer = 0; outer < kMaxOuter; ++outer) {
    result.iterations = outer + 1;
    for (std::size_t i = 0; i < n; ++i) {
      double z = result.intercept;
      for (std::size_t j = 0; j < d; ++j)
        if (result.weights[j] != 0.0) z += result.weights[j] * s.x[i][j];
      eta[i] = z;
      prob[i] = 1.0 / (1.0 + std::exp(-z));
      weight[i] = std::max(prob[i] * (1.0 - prob[i]), 1e-6);
      // Working response minus current fit.
      residual[i] = (static_cast<double>(s.y[i]) - prob[i]) / weight[i];
    }

    double outer_change = 0.0;
    for (int inner = 0; inner < kMaxInner; ++inner) {
      double max_change = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        if (!s.active[j]) continue;
        double numer = 0.0, denom = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          numer += weight[i] * s.x[i][j] *
                   (residual[i] + s.x[i][j] * result.weights[j]);
          denom += weight[i] * s.x[i][j] * s.x[i][j];
        }
        numer /= static_cast<double>(n);
        denom /= static_cast<double>(n);
        const double updated = soft_threshold(numer, lambda) / denom;
        const double delta = updated - result.weights[j];
        if (delta != 0.0) {
          for (std::size_t i = 0; i < n; ++i) residual[i] -= delta * s.x[i][j];
          result.weights[j] = updated;
          max_change = std::max(max_change, std::abs(delta));
        }
      }
      // Intercept (unpenalized).
      double wsum = 0.0, wres = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        wsum += weight[i];
        wres += weight[i] * residual[i];
      }
      const double delta_b = wres / wsum;
      if (delta_b != 0.0) {
        result.intercept += delta_b;
        for (std::size_t i = 0; i < n; ++i) residual[i] -= delta_b;
        max_change = std::max(max_change, std::abs(delta_b));
      }
      outer_change = std::max(outer_change, max_change);
      if (max_change < kInnerTol) break;
    }
    if (outer_change < kOuterTol) break;
  }

  for (std::size_t j = 0; j < d; ++j) {
    if (std::abs(result.weights[j]) > 1e-8)
      result.selected.push_back(feature_names()[j]);
  }
  return result;
}

}  // namespace spamlens::features
