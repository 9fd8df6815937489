#pragma once

#include <span>

#include "shgcn/numkit/tape.hpp"

namespace shgcn::trainkit {

using numkit::Var;

inline constexpr double kProbabilityClamp = 1e-12;

// -mean(log pos) - mean(log(1 - neg)) over columns of probabilities, clamped
// to [1e-12, 1 - 1e-12]. Throws ContractError for values outside [0, 1].
Var lp_loss(Var pos_scores, Var neg_scores);
double lp_loss(std::span<const double> pos_scores, std::span<const double> neg_scores);

// Mean softmax cross-entropy.
Var nc_loss(Var logits, std::span<const int> labels);

// Mean absolute error between same-shaped pred and target.
Var gr_loss(Var pred, Var target);
double mae(std::span<const double> pred, std::span<const double> target);

}  // namespace shgcn::trainkit
