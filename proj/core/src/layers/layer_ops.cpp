#include "shgcn/layers/layer_ops.hpp"

#include <limits>

#include "shgcn/error.hpp"
#include "shgcn/hypgeo/poincare.hpp"
#include "shgcn/hypgeo/tape_ops.hpp"
#include "shgcn/numkit/ops.hpp"

namespace shgcn::layers {
namespace {

namespace nk = numkit::ops;
namespace hg = hypgeo::ops;

double eps_of(Var x) { return hypgeo::default_projection_eps(x.tape().mode()); }

Var to_ball_var(Var v, Var c) { return hg::project(hg::exp0(v, c), c, eps_of(v)); }

void check_dims(Var H, Var W, Var b, const char* who) {
  if (H.cols() != W.cols()) {
    throw ShapeError(std::string(who) + ": input has " + std::to_string(H.cols()) + " columns, W expects " +
                     std::to_string(W.cols()));
  }
  if (b.rows() != 1 || b.cols() != W.rows()) throw ShapeError(std::string(who) + ": bias must be 1 x d_out");
}

LayerVars bind(numkit::Tape& tape, const LayerParams& params) {
  return {tape.constant(params.W), tape.constant(params.b),
          tape.constant(numkit::Matrix::scalar(params.curvature()))};
}

}  // namespace

Var curvature(Var theta) {
  return nk::clamp(nk::softplus(theta), kMinCurvature, std::numeric_limits<double>::infinity());
}

Var activate(Var x, Activation activation) {
  return activation == Activation::ReLU ? nk::relu(x) : x;
}

Var feature_transform(Var H, Var W, Var b, Var c) {
  check_dims(H, W, b, "feature_transform");
  const Var E = to_ball_var(nk::matmul(H, nk::transpose(W)), c);
  const Var B = to_ball_var(b, c);
  return hg::mobius_add(E, B, c);
}

Var shgcn_layer(Var H, const graphcore::NormalizedAdjacency& adj, const LayerVars& p, Activation activation) {
  const Var M = feature_transform(H, p.W, p.b, p.c);
  return activate(graphcore::propagate(adj, hg::log0(M, p.c)), activation);
}

Var hgcn_agg0_layer(Var Hd, const graphcore::NormalizedAdjacency& adj, const LayerVars& p, Var c_out,
                    Activation activation) {
  const Var T = hg::log0(Hd, p.c);
  const Var M = feature_transform(T, p.W, p.b, p.c);
  const Var S = graphcore::propagate(adj, hg::log0(M, p.c));
  const Var Y = to_ball_var(S, p.c);
  const Var U = activate(hg::log0(Y, p.c), activation);
  return to_ball_var(U, c_out);
}

Var gcn_layer(Var H, const graphcore::NormalizedAdjacency& adj, Var W, Var b, Activation activation) {
  check_dims(H, W, b, "gcn_layer");
  const Var Z = nk::add(nk::matmul(H, nk::transpose(W)), b);
  return activate(graphcore::propagate(adj, Z), activation);
}

numkit::Matrix feature_transform_forward(const numkit::Matrix& H, const LayerParams& params,
                                         numkit::PrecisionMode mode) {
  numkit::Tape tape(mode);
  const LayerVars p = bind(tape, params);
  return feature_transform(tape.constant(H), p.W, p.b, p.c).value();
}

numkit::Matrix shgcn_layer_forward(const numkit::Matrix& H, const graphcore::NormalizedAdjacency& adj,
                                   const LayerParams& params, Activation activation, numkit::PrecisionMode mode) {
  numkit::Tape tape(mode);
  return shgcn_layer(tape.constant(H), adj, bind(tape, params), activation).value();
}

numkit::Matrix hgcn_agg0_layer_forward(const numkit::Matrix& Hd, const graphcore::NormalizedAdjacency& adj,
                                       const LayerParams& params, Activation activation,
                                       numkit::PrecisionMode mode) {
  numkit::Tape tape(mode);
  const LayerVars p = bind(tape, params);
  return hgcn_agg0_layer(tape.constant(Hd), adj, p, p.c, activation).value();
}

numkit::Matrix gcn_layer_forward(const numkit::Matrix& H, const graphcore::NormalizedAdjacency& adj,
                                 const numkit::Matrix& W, const numkit::Matrix& b, Activation activation,
                                 numkit::PrecisionMode mode) {
  numkit::Tape tape(mode);
  return gcn_layer(tape.constant(H), adj, tape.constant(W), tape.constant(b), activation).value();
}

numkit::Matrix to_ball(const numkit::Matrix& X, double c, numkit::PrecisionMode mode) {
  numkit::Tape tape(mode);
  return to_ball_var(tape.constant(X), tape.constant(numkit::Matrix::scalar(c))).value();
}

numkit::Matrix from_ball(const numkit::Matrix& Hd, double c, numkit::PrecisionMode mode) {
  numkit::Tape tape(mode);
  return hg::log0(tape.constant(Hd), tape.constant(numkit::Matrix::scalar(c))).value();
}

}  // namespace shgcn::layers
