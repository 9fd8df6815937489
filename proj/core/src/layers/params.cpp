#include "shgcn/layers/params.hpp"

#include <algorithm>
#include <cmath>

#include "shgcn/error.hpp"

namespace shgcn::layers {

std::string to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::SHGCN: return "shgcn";
    case LayerKind::HGCN_AGG0: return "hgcn-agg0";
    case LayerKind::GCN: return "gcn";
  }
  return "?";
}

std::string to_string(Activation activation) {
  return activation == Activation::ReLU ? "relu" : "identity";
}

std::string to_string(Task task) {
  switch (task) {
    case Task::LinkPrediction: return "lp";
    case Task::NodeClassification: return "nc";
    case Task::GraphRegression: return "gr";
  }
  return "?";
}

LayerKind parse_layer_kind(std::string_view text) {
  if (text == "shgcn") return LayerKind::SHGCN;
  if (text == "hgcn-agg0" || text == "agg0") return LayerKind::HGCN_AGG0;
  if (text == "gcn") return LayerKind::GCN;
  throw ContractError("unknown model '" + std::string(text) + "' (expected shgcn, hgcn-agg0 or gcn)");
}

Activation parse_activation(std::string_view text) {
  if (text == "relu") return Activation::ReLU;
  if (text == "identity" || text == "id") return Activation::Identity;
  throw ContractError("unknown activation '" + std::string(text) + "' (expected relu or identity)");
}

Task parse_task(std::string_view text) {
  if (text == "lp") return Task::LinkPrediction;
  if (text == "nc") return Task::NodeClassification;
  if (text == "gr") return Task::GraphRegression;
  throw ContractError("unknown task '" + std::string(text) + "' (expected lp, nc or gr)");
}

bool is_hyperbolic(LayerKind kind) noexcept { return kind != LayerKind::GCN; }

double curvature_from_theta(double theta_c) noexcept {
  // Stable softplus: log1p(exp(-|x|)) + max(x, 0), floored so that very
  // negative theta cannot underflow to zero curvature.
  return std::max(std::log1p(std::exp(-std::abs(theta_c))) + std::max(theta_c, 0.0), kMinCurvature);
}

double theta_for_curvature(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ContractError("curvature must be positive and finite");
  // Inverse softplus; for large c, log(expm1(c)) = c + log1p(-exp(-c)).
  return c > 30.0 ? c + std::log1p(-std::exp(-c)) : std::log(std::expm1(c));
}

void ModelConfig::validate() const {
  if (num_layers < 1) throw ContractError("num_layers must be at least 1");
  if (hidden_dim < 1) throw ContractError("hidden_dim must be at least 1");
  if (!(init_curvature > 0.0) || !std::isfinite(init_curvature)) throw ContractError("curvature must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ContractError("dropout must lie in [0, 1)");
}

void DecoderConfig::validate() const {
  if (!(t > 0.0) || !std::isfinite(t)) throw ContractError("Fermi-Dirac temperature t must be positive");
  if (!std::isfinite(r)) throw ContractError("Fermi-Dirac radius r must be finite");
}

}  // namespace shgcn::layers
