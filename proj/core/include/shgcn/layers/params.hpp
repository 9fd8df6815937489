#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "shgcn/numkit/matrix.hpp"

namespace shgcn::layers {

enum class LayerKind { SHGCN, HGCN_AGG0, GCN };
enum class Activation { ReLU, Identity };
enum class Task { LinkPrediction, NodeClassification, GraphRegression };

// CLI spellings: shgcn, hgcn-agg0, gcn / relu, identity / lp, nc, gr.
std::string to_string(LayerKind kind);
std::string to_string(Activation activation);
std::string to_string(Task task);
LayerKind parse_layer_kind(std::string_view text);
Activation parse_activation(std::string_view text);
Task parse_task(std::string_view text);

bool is_hyperbolic(LayerKind kind) noexcept;

// Curvature is softplus(theta_c), so it stays positive for any theta_c.
// Lower bound on c = softplus(theta_c); keeps curvature positive when the
// softplus underflows.
inline constexpr double kMinCurvature = 0x1p-1022;

double curvature_from_theta(double theta_c) noexcept;
double theta_for_curvature(double c);

struct LayerParams {
  numkit::Matrix W;  // d_out x d_in
  numkit::Matrix b;  // 1 x d_out
  double theta_c = 0.0;

  double curvature() const noexcept { return curvature_from_theta(theta_c); }
  std::size_t in_dim() const noexcept { return W.cols(); }
  std::size_t out_dim() const noexcept { return W.rows(); }
};

struct ModelConfig {
  LayerKind layer_kind = LayerKind::SHGCN;
  std::size_t num_layers = 2;
  std::size_t hidden_dim = 16;
  // Hidden layers use this; the last layer is always the identity.
  Activation activation = Activation::ReLU;
  double init_curvature = 1.0;
  bool trainable_curvature = true;
  double dropout = 0.0;

  // Throws ContractError on out-of-range values.
  void validate() const;
};

struct DecoderConfig {
  double r = 2.0;
  double t = 1.0;
  Task task = Task::LinkPrediction;

  void validate() const;
};

}  // namespace shgcn::layers
