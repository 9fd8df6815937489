#pragma once

#include <span>

namespace shgcn::trainkit {

// Mann-Whitney estimate of P(score_pos > score_neg), ties counting 0.5.
// labels are 1 (positive) or 0 (negative). Throws ContractError unless
// both classes are present.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

struct ClassificationMetrics {
  double accuracy = 0.0;
  double f1 = 0.0;        // positive class 1
  double macro_f1 = 0.0;  // unweighted mean over classes seen in either input
};

ClassificationMetrics classification_metrics(std::span<const int> predicted, std::span<const int> truth);

}  // namespace shgcn::trainkit
