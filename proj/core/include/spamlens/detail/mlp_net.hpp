#pragma once

#include <cstddef>
#include <vector>

#include "spamlens/models.hpp"
#include "spamlens/util.hpp"

namespace spamlens::models::detail {

/// One-hidden-layer network with a sigmoid output unit. Exposed so tests
/// can finite-difference the full training objective parameter by
/// parameter.
struct MlpNet {
  int input = 0;
  int hidden = 0;
  MlpActivation activation = MlpActivation::rectifier;
  MlpLoss loss = MlpLoss::cross_entropy;
  double l1 = 0.0;
  double l2 = 0.0;

  std::vector<double> w1;  // hidden x input, row-major
  std::vector<double> b1;
  std::vector<double> w2;
  double b2 = 0.0;

  void init(Rng& rng);

  double forward(std::span<const double> x) const;

  /// Mean data loss over the batch plus L1/L2 penalties. Gradients are
  /// accumulated into a parameter-shaped gradient net (same field layout,
  /// penalties included).
  double loss_and_gradient(const std::vector<std::vector<double>>& x,
                           const std::vector<int>& y,
                           const std::vector<std::size_t>& batch,
                           MlpNet& grad) const;

  /// Objective only (used by finite-difference checks).
  double objective(const std::vector<std::vector<double>>& x,
                   const std::vector<int>& y,
                   const std::vector<std::size_t>& batch) const;

  std::size_t parameter_count() const {
    return w1.size() + b1.size() + w2.size() + 1;
  }
  double& parameter(std::size_t index);
  double parameter(std::size_t index) const;
};

}  // namespace spamlens::models::detail
