#pragma once

#include "shgcn/graphcore/adjacency.hpp"
#include "shgcn/layers/params.hpp"
#include "shgcn/numkit/tape.hpp"

namespace shgcn::layers {

using numkit::Var;

// Tape handles for one layer. c is the curvature node (softplus of theta).
struct LayerVars {
  Var W;
  Var b;
  Var c;
};

Var activate(Var x, Activation activation);

// max(softplus(theta), kMinCurvature) on the tape.
Var curvature(Var theta);

// exp0(H W^T) (+) exp0(b), each exp0 followed by project(). Rows of H are
// Euclidean; the result rows lie in the ball of curvature c.
Var feature_transform(Var H, Var W, Var b, Var c);

// sigma(A log0(feature_transform(H))). Euclidean in, Euclidean out.
Var shgcn_layer(Var H, const graphcore::NormalizedAdjacency& adj, const LayerVars& p, Activation activation);

// The origin-aggregation baseline, evaluated with all of its map pairs:
//   T = log0(Hd); E = exp0(T W^T) (+) exp0(b); S = A log0(E);
//   out = exp0_{c_out}(sigma(log0(exp0(S)))),
// with project() after every exp0. Input rows lie in the ball of curvature
// p.c, output rows in the ball of curvature c_out.
Var hgcn_agg0_layer(Var Hd, const graphcore::NormalizedAdjacency& adj, const LayerVars& p, Var c_out,
                    Activation activation);

// sigma(A (H W^T + 1 b^T)).
Var gcn_layer(Var H, const graphcore::NormalizedAdjacency& adj, Var W, Var b, Activation activation);

// Matrix-level wrappers evaluated on a private tape in `mode`.
numkit::Matrix feature_transform_forward(const numkit::Matrix& H, const LayerParams& params,
                                         numkit::PrecisionMode mode = numkit::PrecisionMode::Double);
numkit::Matrix shgcn_layer_forward(const numkit::Matrix& H, const graphcore::NormalizedAdjacency& adj,
                                   const LayerParams& params, Activation activation,
                                   numkit::PrecisionMode mode = numkit::PrecisionMode::Double);
// Output curvature equals the layer's own curvature.
numkit::Matrix hgcn_agg0_layer_forward(const numkit::Matrix& Hd, const graphcore::NormalizedAdjacency& adj,
                                       const LayerParams& params, Activation activation,
                                       numkit::PrecisionMode mode = numkit::PrecisionMode::Double);
numkit::Matrix gcn_layer_forward(const numkit::Matrix& H, const graphcore::NormalizedAdjacency& adj,
                                 const numkit::Matrix& W, const numkit::Matrix& b, Activation activation,
                                 numkit::PrecisionMode mode = numkit::PrecisionMode::Double);

// Row-wise exp0/log0 at curvature c with projection, without a tape.
numkit::Matrix to_ball(const numkit::Matrix& X, double c, numkit::PrecisionMode mode = numkit::PrecisionMode::Double);
numkit::Matrix from_ball(const numkit::Matrix& Hd, double c,
                         numkit::PrecisionMode mode = numkit::PrecisionMode::Double);

}  // namespace shgcn::layers
