#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "shgcn/numkit/tape.hpp"

// Differentiable matrix primitives. Each one computes its result in double,
// rounds it once to the tape's precision mode and records an analytic local
// gradient rule.
namespace shgcn::numkit::ops {

Var matmul(Var a, Var b);
Var transpose(Var a);

// b may match a's shape, be a 1 x cols row (broadcast over rows) or 1x1.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);          // Hadamard, same shape
Var mul_col(Var a, Var s);      // a (n x d) scaled row-wise by s (n x 1)
Var mul_scalar(Var a, Var s);   // a scaled by s (1 x 1)
Var scale(Var a, double s);
Var add_scalar(Var a, double s);
Var neg(Var a);

Var tanh(Var a);
Var relu(Var a);
Var softplus(Var a);
Var sigmoid(Var a);
Var exp(Var a);
Var log(Var a);
Var abs(Var a);
Var square(Var a);
Var clamp(Var a, double lo, double hi);

Var row_sq_norm(Var a);  // n x 1
Var row_norm(Var a);     // n x 1, subgradient 0 at the zero row
Var row_dot(Var a, Var b);

Var sum(Var a);   // 1 x 1
Var mean(Var a);  // 1 x 1

Var gather_rows(Var a, std::span<const std::size_t> rows);

// Mean softmax cross-entropy of logits (n x k) against labels in [0, k).
Var softmax_cross_entropy(Var logits, std::span<const int> labels);

}  // namespace shgcn::numkit::ops
