#include "shgcn/trainkit/losses.hpp"

#include <algorithm>
#include <cmath>

#include "shgcn/error.hpp"
#include "shgcn/numkit/ops.hpp"

namespace shgcn::trainkit {
namespace {

namespace nk = numkit::ops;

void check_probabilities(std::span<const double> p, const char* what) {
  for (double x : p) {
    if (!(x >= 0.0 && x <= 1.0)) throw ContractError(std::string("lp_loss: ") + what + " score outside [0, 1]");
  }
}

double mean_log(std::span<const double> p, bool complement) {
  if (p.empty()) return 0.0;
  double acc = 0.0;
  for (double x : p) {
    const double q = std::clamp(complement ? 1.0 - x : x, kProbabilityClamp, 1.0 - kProbabilityClamp);
    acc += std::log(q);
  }
  return acc / static_cast<double>(p.size());
}

}  // namespace

Var lp_loss(Var pos_scores, Var neg_scores) {
  check_probabilities(pos_scores.value().data(), "positive");
  check_probabilities(neg_scores.value().data(), "negative");
  constexpr double lo = kProbabilityClamp, hi = 1.0 - kProbabilityClamp;
  const Var pos_term = nk::mean(nk::log(nk::clamp(pos_scores, lo, hi)));
  const Var neg_term = nk::mean(nk::log(nk::clamp(nk::add_scalar(nk::neg(neg_scores), 1.0), lo, hi)));
  return nk::neg(nk::add(pos_term, neg_term));
}

double lp_loss(std::span<const double> pos_scores, std::span<const double> neg_scores) {
  check_probabilities(pos_scores, "positive");
  check_probabilities(neg_scores, "negative");
  return -mean_log(pos_scores, false) - mean_log(neg_scores, true);
}

Var nc_loss(Var logits, std::span<const int> labels) { return nk::softmax_cross_entropy(logits, labels); }

Var gr_loss(Var pred, Var target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) throw ShapeError("gr_loss: shape mismatch");
  return nk::mean(nk::abs(nk::sub(pred, target)));
}

double mae(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) throw ShapeError("mae: length mismatch");
  if (pred.empty()) throw ContractError("mae: empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) acc += std::abs(pred[i] - target[i]);
  return acc / static_cast<double>(pred.size());
}

}  // namespace shgcn::trainkit
