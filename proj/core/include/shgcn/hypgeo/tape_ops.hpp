#pragma once

#include "shgcn/numkit/tape.hpp"

// Row-wise differentiable Poincare-ball maps. Every row of the input matrix is
// one point or tangent vector; c is a 1x1 node holding the (positive)
// curvature, so gradients flow into a trainable curvature as well.
namespace shgcn::hypgeo::ops {

using numkit::Var;

Var exp0(Var v, Var c);

// Throws DomainError if any row sits on or beyond the boundary.
Var log0(Var y, Var c);

// y is either the same shape as x or a single row added to every row of x.
Var mobius_add(Var x, Var y, Var c);

Var project(Var x, Var c, double eps);

}  // namespace shgcn::hypgeo::ops
