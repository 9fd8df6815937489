#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "shgcn/numkit/matrix.hpp"

namespace shgcn::trainkit {

struct AdamConfig {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;

  void validate() const;
};

struct OptimizerState {
  AdamConfig config;
  std::uint64_t step_count = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;

  explicit OptimizerState(AdamConfig cfg = {});
};

// Bias-corrected Adam update in Double. Moment buffers are allocated on the
// first call and must keep their shapes afterwards (ShapeError otherwise).
// Weight decay, when non-zero, is added to the gradient (L2 form).
void adam_step(OptimizerState& state, std::span<numkit::Matrix> params, std::span<const numkit::Matrix> grads);

}  // namespace shgcn::trainkit
