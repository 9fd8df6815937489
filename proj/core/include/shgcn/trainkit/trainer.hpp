#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "shgcn/graphcore/generators.hpp"
#include "shgcn/graphcore/graph.hpp"
#include "shgcn/graphcore/split.hpp"
#include "shgcn/layers/model.hpp"
#include "shgcn/numkit/precision.hpp"
#include "shgcn/trainkit/adam.hpp"

namespace shgcn::trainkit {

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_metric = 0.0;
  double wall_time_seconds = 0.0;  // forward + backward + optimizer step
};

struct LinkData {
  const graphcore::Graph* graph = nullptr;
  graphcore::EdgeSplit split;
};

struct NodeData {
  const graphcore::Graph* graph = nullptr;
  graphcore::NodeSplit split;
  std::size_t num_classes = 0;
};

struct RegressionData {
  const graphcore::GraphCollection* collection = nullptr;
  graphcore::NodeSplit split;  // indices of graphs, not nodes
};

using TaskData = std::variant<LinkData, NodeData, RegressionData>;

struct TrainOptions {
  std::size_t epochs = 1000;
  std::size_t patience = 100;
  std::uint64_t seed = 0;
  AdamConfig adam;
  double fd_r = 2.0;
  double fd_t = 1.0;
  numkit::PrecisionMode precision = numkit::PrecisionMode::Double;
  // Skip validation (and early stopping) entirely; used by timing runs.
  bool evaluate = true;
};

struct TimingSummary {
  std::size_t epochs = 0;  // epochs counted after warmup
  double mean = 0.0;
  double stddev = 0.0;
  double std_error = 0.0;
};

struct TrainResult {
  std::vector<layers::Parameter> params;  // best-validation checkpoint
  std::vector<EpochRecord> records;
  std::size_t best_epoch = 0;
  double best_val_metric = 0.0;
  // lp: auc; nc: accuracy, f1, macro_f1; gr: mae.
  std::map<std::string, double> test_metrics;
  bool overflow = false;  // any value saturated in the chosen precision
};

// Trains `model` in place (it ends holding the best checkpoint). The metric
// used for early stopping is validation AUC (lp), accuracy (nc) or MAE (gr,
// lower is better). Deterministic for a given model initialisation and
// options.seed.
TrainResult train_model(layers::Model& model, const TaskData& data, const TrainOptions& options);

// Mean, sample standard deviation and standard error of epoch wall times
// after dropping the first `warmup` epochs (all epochs if too few remain).
TimingSummary summarize_timing(const std::vector<EpochRecord>& records, std::size_t warmup = 5);

// Features the node-level model sees: the graph's own, else identity.
numkit::Matrix input_features(const graphcore::Graph& g);

}  // namespace shgcn::trainkit
