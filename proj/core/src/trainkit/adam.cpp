#include "shgcn/trainkit/adam.hpp"

#include <cmath>

#include "shgcn/error.hpp"

namespace shgcn::trainkit {

void AdamConfig::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ContractError("learning rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ContractError("Adam betas must lie in [0, 1)");
  }
  if (!(eps > 0.0)) throw ContractError("Adam epsilon must be positive");
  if (!(weight_decay >= 0.0)) throw ContractError("weight decay must be non-negative");
}

OptimizerState::OptimizerState(AdamConfig cfg) : config(cfg) { config.validate(); }

void adam_step(OptimizerState& state, std::span<numkit::Matrix> params, std::span<const numkit::Matrix> grads) {
  if (params.size() != grads.size()) throw ShapeError("adam_step: parameter and gradient counts differ");
  if (state.m.empty()) {
    for (const auto& p : params) {
      state.m.emplace_back(p.size(), 0.0);
      state.v.emplace_back(p.size(), 0.0);
    }
  }
  if (state.m.size() != params.size()) throw ShapeError("adam_step: parameter count changed between steps");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i].same_shape(grads[i]) || state.m[i].size() != params[i].size()) {
      throw ShapeError("adam_step: shape mismatch for parameter " + std::to_string(i));
    }
  }

  const AdamConfig& cfg = state.config;
  ++state.step_count;
  const double t = static_cast<double>(state.step_count);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto theta = params[i].data();
    const auto g = grads[i].data();
    auto& m = state.m[i];
    auto& v = state.v[i];
    std::vector<double> next(theta.begin(), theta.end());
    for (std::size_t k = 0; k < next.size(); ++k) {
      const double gk = g[k] + cfg.weight_decay * theta[k];
      m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * gk;
      v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * gk * gk;
      next[k] -= cfg.lr * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + cfg.eps);
    }
    params[i] = numkit::Matrix(params[i].rows(), params[i].cols(), std::move(next), params[i].mode());
  }
}

}  // namespace shgcn::trainkit
