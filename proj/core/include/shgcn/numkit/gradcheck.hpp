#pragma once

#include <functional>

#include "shgcn/numkit/matrix.hpp"

namespace shgcn::numkit {

using ScalarFn = std::function<double(const Matrix&)>;

// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h for every entry of x,
// evaluated in double. Used as the oracle for Tape::backward.
Matrix finite_diff_grad(const ScalarFn& f, const Matrix& x, double h = 1e-5);

// max_i |a_i - b_i| / max(1, |b_i|), b being the reference.
double max_relative_error(const Matrix& a, const Matrix& b);

}  // namespace shgcn::numkit
