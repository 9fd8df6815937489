#include "shgcn/trainkit/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <cmath>
#include <limits>

#include "shgcn/error.hpp"
#include "shgcn/graphcore/adjacency.hpp"
#include "shgcn/layers/decoders.hpp"
#include "shgcn/numkit/ops.hpp"
#include "shgcn/trainkit/losses.hpp"
#include "shgcn/trainkit/metrics.hpp"

namespace shgcn::trainkit {
namespace {

namespace nk = numkit::ops;
using Clock = std::chrono::steady_clock;
using numkit::Var;

// Per-task hooks: the generic loop below handles timing, optimisation and
// early stopping.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual Var loss(const layers::Model& model, std::span<const Var> bound, numkit::Rng* dropout) = 0;
  // Called outside the timed region, before each training step.
  virtual void prepare_epoch(std::size_t /*epoch*/) {}
  virtual double validate(const layers::Model& model) = 0;
  virtual std::map<std::string, double> test(const layers::Model& model) = 0;
  virtual bool lower_is_better() const { return false; }

 protected:
  explicit Objective(const TrainOptions& o) : options_(o) {}
  const TrainOptions& options_;
};

class LinkObjective final : public Objective {
 public:
  LinkObjective(const LinkData& d, const TrainOptions& o)
      : Objective(o), data_(d), X_(input_features(*d.graph)),
        adj_(graphcore::normalized_adjacency(d.graph->with_edges(d.split.train_pos))) {}

  void prepare_epoch(std::size_t epoch) override {
    negatives_ = graphcore::sample_negatives(*data_.graph, data_.split.train_pos.size(),
                                             numkit::mix_seed(options_.seed, 1000 + epoch));
  }

  Var loss(const layers::Model& model, std::span<const Var> bound, numkit::Rng* dropout) override {
    numkit::Tape& tape = bound.front().tape();
    const Var Z = model.encode(bound, tape.constant(X_), adj_, dropout);
    const Var pos = layers::fermi_dirac(Z, data_.split.train_pos, options_.fd_r, options_.fd_t);
    const Var neg = layers::fermi_dirac(Z, negatives_, options_.fd_r, options_.fd_t);
    return lp_loss(pos, neg);
  }

  double validate(const layers::Model& model) override {
    return auc(model, data_.split.val_pos, data_.split.val_neg);
  }

  std::map<std::string, double> test(const layers::Model& model) override {
    return {{"auc", auc(model, data_.split.test_pos, data_.split.test_neg)}};
  }

 private:
  double auc(const layers::Model& model, std::span<const graphcore::Edge> pos, std::span<const graphcore::Edge> neg) {
    if (pos.empty() || neg.empty()) return std::numeric_limits<double>::quiet_NaN();
    numkit::Tape tape(options_.precision);
    const auto bound = model.bind(tape);
    const Var Z = model.encode(bound, tape.constant(X_), adj_);
    std::vector<double> scores;
    std::vector<int> labels;
    for (double s : layers::fermi_dirac(Z, pos, options_.fd_r, options_.fd_t).value().data()) {
      scores.push_back(s);
      labels.push_back(1);
    }
    for (double s : layers::fermi_dirac(Z, neg, options_.fd_r, options_.fd_t).value().data()) {
      scores.push_back(s);
      labels.push_back(0);
    }
    return roc_auc(scores, labels);
  }

  const LinkData& data_;
  numkit::Matrix X_;
  graphcore::NormalizedAdjacency adj_;
  std::vector<graphcore::Edge> negatives_;
};

class NodeObjective final : public Objective {
 public:
  NodeObjective(const NodeData& d, const TrainOptions& o)
      : Objective(o), data_(d), X_(input_features(*d.graph)), adj_(graphcore::normalized_adjacency(*d.graph)) {
    if (!d.graph->labels()) throw ContractError("node classification needs node labels");
    labels_ = *d.graph->labels();
    for (std::size_t i : d.split.train) train_labels_.push_back(labels_[i]);
  }

  Var loss(const layers::Model& model, std::span<const Var> bound, numkit::Rng* dropout) override {
    numkit::Tape& tape = bound.front().tape();
    const Var Z = model.encode(bound, tape.constant(X_), adj_, dropout);
    const Var logits = nk::gather_rows(model.classify(bound, Z), data_.split.train);
    return nc_loss(logits, train_labels_);
  }

  double validate(const layers::Model& model) override { return metrics(model, data_.split.val).accuracy; }

  std::map<std::string, double> test(const layers::Model& model) override {
    const auto m = metrics(model, data_.split.test);
    return {{"accuracy", m.accuracy}, {"f1", data_.num_classes == 2 ? m.f1 : m.macro_f1}, {"macro_f1", m.macro_f1}};
  }

 private:
  ClassificationMetrics metrics(const layers::Model& model, std::span<const std::size_t> nodes) {
    if (nodes.empty()) return {std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0};
    numkit::Tape tape(options_.precision);
    const auto bound = model.bind(tape);
    const auto& logits = model.classify(bound, model.encode(bound, tape.constant(X_), adj_)).value();
    std::vector<int> predicted, truth;
    for (std::size_t i : nodes) {
      const auto row = logits.row(i);
      predicted.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
      truth.push_back(labels_[i]);
    }
    return classification_metrics(predicted, truth);
  }

  const NodeData& data_;
  numkit::Matrix X_;
  graphcore::NormalizedAdjacency adj_;
  std::vector<int> labels_;
  std::vector<int> train_labels_;
};

class RegressionObjective final : public Objective {
 public:
  RegressionObjective(const RegressionData& d, const TrainOptions& o)
      : Objective(o), data_(d), X_(input_features(d.collection->merged)),
        adj_(graphcore::normalized_adjacency(d.collection->merged)) {}

  Var loss(const layers::Model& model, std::span<const Var> bound, numkit::Rng* dropout) override {
    numkit::Tape& tape = bound.front().tape();
    const Var pred = predict(model, bound, tape, dropout);
    return gr_loss(nk::gather_rows(pred, data_.split.train), tape.constant(targets(data_.split.train)));
  }

  double validate(const layers::Model& model) override { return error(model, data_.split.val); }

  std::map<std::string, double> test(const layers::Model& model) override {
    return {{"mae", error(model, data_.split.test)}};
  }

  bool lower_is_better() const override { return true; }

 private:
  Var predict(const layers::Model& model, std::span<const Var> bound, numkit::Tape& tape, numkit::Rng* dropout) {
    const Var Z = model.encode(bound, tape.constant(X_), adj_, dropout);
    const auto& c = *data_.collection;
    return model.regress(bound, layers::median_pool(Z, c.graph_of, c.num_graphs()));
  }

  numkit::Matrix targets(std::span<const std::size_t> graphs) const {
    std::vector<double> t;
    for (std::size_t g : graphs) t.push_back(data_.collection->targets[g]);
    return numkit::Matrix(graphs.size(), 1, std::move(t));
  }

  double error(const layers::Model& model, std::span<const std::size_t> graphs) {
    if (graphs.empty()) return std::numeric_limits<double>::quiet_NaN();
    numkit::Tape tape(options_.precision);
    const auto bound = model.bind(tape);
    const auto& pred = predict(model, bound, tape, nullptr).value();
    std::vector<double> p;
    for (std::size_t g : graphs) p.push_back(pred(g, 0));
    const auto t = targets(graphs);
    return mae(p, t.data());
  }

  const RegressionData& data_;
  numkit::Matrix X_;
  graphcore::NormalizedAdjacency adj_;
};

std::unique_ptr<Objective> make_objective(const TaskData& data, const TrainOptions& options) {
  return std::visit(
      [&](const auto& d) -> std::unique_ptr<Objective> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, LinkData>) {
          if (!d.graph) throw ContractError("train_model: missing graph");
          return std::make_unique<LinkObjective>(d, options);
        } else if constexpr (std::is_same_v<T, NodeData>) {
          if (!d.graph) throw ContractError("train_model: missing graph");
          return std::make_unique<NodeObjective>(d, options);
        } else {
          if (!d.collection) throw ContractError("train_model: missing graph collection");
          return std::make_unique<RegressionObjective>(d, options);
        }
      },
      data);
}

bool better(double candidate, double best, bool lower) {
  if (std::isnan(candidate)) return false;
  if (std::isnan(best)) return true;
  return lower ? candidate < best : candidate > best;
}

}  // namespace

numkit::Matrix input_features(const graphcore::Graph& g) {
  return g.has_features() ? g.features() : graphcore::identity_features(g.num_nodes());
}

TrainResult train_model(layers::Model& model, const TaskData& data, const TrainOptions& options) {
  options.adam.validate();
  auto objective = make_objective(data, options);
  const bool lower = objective->lower_is_better();

  auto& params = model.parameters();
  std::vector<std::size_t> trainable;
  for (std::size_t i = 0; i < params.size(); ++i)
    if (params[i].trainable) trainable.push_back(i);

  OptimizerState optimizer(options.adam);
  numkit::Rng dropout_rng(numkit::mix_seed(options.seed, 7));
  numkit::Rng* dropout = model.config().dropout > 0.0 ? &dropout_rng : nullptr;

  TrainResult result;
  result.params = params;
  result.best_val_metric = std::numeric_limits<double>::quiet_NaN();
  numkit::clear_overflow_flag();
  std::size_t since_best = 0;

  std::vector<numkit::Matrix> values(trainable.size()), grads(trainable.size());
  for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
    objective->prepare_epoch(epoch);

    const auto start = Clock::now();
    numkit::Tape tape(options.precision);
    const auto bound = model.bind(tape);
    const Var loss = objective->loss(model, bound, dropout);
    tape.backward(loss);
    for (std::size_t k = 0; k < trainable.size(); ++k) {
      values[k] = std::move(params[trainable[k]].value);
      grads[k] = tape.grad(bound[trainable[k]]);
    }
    adam_step(optimizer, values, grads);
    for (std::size_t k = 0; k < trainable.size(); ++k) params[trainable[k]].value = std::move(values[k]);
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();

    EpochRecord record{epoch, loss.value().item(), std::numeric_limits<double>::quiet_NaN(), seconds};
    if (!std::isfinite(record.train_loss)) result.overflow = true;
    if (options.evaluate) record.val_metric = objective->validate(model);
    if (!std::isnan(record.val_metric)) {
      if (better(record.val_metric, result.best_val_metric, lower)) {
        result.best_val_metric = record.val_metric;
        result.best_epoch = epoch;
        result.params = params;
        since_best = 0;
      } else if (++since_best >= options.patience) {
        result.records.push_back(record);
        break;
      }
    } else {
      // Nothing to validate against: keep the latest parameters.
      result.params = params;
      result.best_epoch = epoch;
    }
    result.records.push_back(record);
  }

  params = result.params;
  result.test_metrics = objective->test(model);
  result.overflow = result.overflow || numkit::overflow_flag();
  return result;
}

TimingSummary summarize_timing(const std::vector<EpochRecord>& records, std::size_t warmup) {
  TimingSummary out;
  if (records.empty()) return out;
  const std::size_t skip = records.size() > warmup ? warmup : 0;
  out.epochs = records.size() - skip;
  double sum = 0.0;
  for (std::size_t i = skip; i < records.size(); ++i) sum += records[i].wall_time_seconds;
  out.mean = sum / static_cast<double>(out.epochs);
  if (out.epochs > 1) {
    double ss = 0.0;
    for (std::size_t i = skip; i < records.size(); ++i) {
      const double d = records[i].wall_time_seconds - out.mean;
      ss += d * d;
    }
    out.stddev = std::sqrt(ss / static_cast<double>(out.epochs - 1));
    out.std_error = out.stddev / std::sqrt(static_cast<double>(out.epochs));
  }
  return out;
}

}  // namespace shgcn::trainkit
