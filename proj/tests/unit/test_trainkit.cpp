#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "grad_oracle.hpp"
#include "shgcn/error.hpp"
#include "shgcn/graphcore/generators.hpp"
#include "shgcn/graphcore/split.hpp"
#include "shgcn/numkit/ops.hpp"
#include "shgcn/numkit/random.hpp"
#include "shgcn/trainkit/adam.hpp"
#include "shgcn/trainkit/losses.hpp"
#include "shgcn/trainkit/metrics.hpp"
#include "shgcn/trainkit/trainer.hpp"

using namespace shgcn;
using namespace shgcn::trainkit;
using numkit::Matrix;
using numkit::Rng;
using numkit::Var;

namespace {

// Direct count over all positive/negative pairs.
double pairwise_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0;
  double pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (y[i] == 1 && y[j] == 0) {
        pairs += 1;
        wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
      }
  return wins / pairs;
}

Matrix column(std::vector<double> v) {
  const std::size_t n = v.size();
  return Matrix(n, 1, std::move(v));
}

layers::Model lp_model(layers::LayerKind kind, std::size_t in_dim, std::uint64_t seed) {
  layers::ModelConfig cfg;
  cfg.layer_kind = kind;
  return layers::Model(cfg, layers::Task::LinkPrediction, in_dim, 0, seed);
}

}  // namespace

TEST(Adam, Examples) {
  OptimizerState st;
  std::vector<Matrix> params = {Matrix::from_rows({{0.3, -1.0}})};
  const std::vector<Matrix> zero = {Matrix(1, 2)};
  adam_step(st, params, zero);
  EXPECT_EQ(params[0], Matrix::from_rows({{0.3, -1.0}}));
  EXPECT_EQ(st.step_count, 1u);

  OptimizerState first;
  std::vector<Matrix> theta = {Matrix::scalar(0.0)};
  const std::vector<Matrix> g = {Matrix::scalar(2.0)};
  adam_step(first, theta, g);
  // m = 0.2, v = 0.004; corrected 2 and 4; update lr * 2 / (2 + eps).
  EXPECT_NEAR(theta[0].item(), -0.01 * 2.0 / (2.0 + 1e-8), 1e-15);

  // Constant gradient: hand-rolled recurrence as the oracle. Bias correction
  // makes m_hat = g and v_hat = g^2 exactly, so every step has the same size.
  double m = 0, v = 0, x = 0;
  OptimizerState st2;
  std::vector<Matrix> p2 = {Matrix::scalar(0.0)};
  for (int t = 1; t <= 20; ++t) {
    adam_step(st2, p2, g);
    m = 0.9 * m + 0.1 * 2.0;
    v = 0.999 * v + 0.001 * 4.0;
    const double step = 0.01 * (m / (1 - std::pow(0.9, t))) / (std::sqrt(v / (1 - std::pow(0.999, t))) + 1e-8);
    x -= step;
    ASSERT_NEAR(p2[0].item(), x, 1e-14);
    ASSERT_NEAR(step, 0.01 * 2.0 / (2.0 + 1e-8), 1e-16);
  }
  std::vector<Matrix> wrong = {Matrix(2, 2)};
  const std::vector<Matrix> wrong_g = {Matrix(2, 2)};
  EXPECT_THROW(adam_step(st2, wrong, wrong_g), ShapeError);
  AdamConfig bad;
  bad.beta1 = 1.0;
  EXPECT_THROW(bad.validate(), ContractError);
}

TEST(Adam, ZeroGradientIsFixedPoint) {
  Rng rng(1);
  OptimizerState st;
  std::vector<Matrix> p = {Matrix::from_rows({{1.0, 2.0}}), Matrix::scalar(-3.0)};
  std::vector<Matrix> g = {Matrix::from_rows({{0.5, -0.2}}), Matrix::scalar(1.0)};
  for (int i = 0; i < 5; ++i) adam_step(st, p, g);
  const auto before = p;
  const auto m_before = st.m;
  const std::vector<Matrix> zero = {Matrix(1, 2), Matrix(1, 1)};
  adam_step(st, p, zero);
  // Moments decay, so the step is not exactly zero; it is bounded by the
  // decayed first moment over the second.
  for (std::size_t k = 0; k < p.size(); ++k)
    for (std::size_t i = 0; i < p[k].data().size(); ++i) EXPECT_NEAR(st.m[k][i], 0.9 * m_before[k][i], 1e-15);
  OptimizerState fresh;
  std::vector<Matrix> q = before;
  adam_step(fresh, q, zero);
  EXPECT_EQ(q[0], before[0]);
  EXPECT_EQ(q[1], before[1]);
}

TEST(Losses, LinkPrediction) {
  const std::vector<double> one = {1.0}, zero = {0.0}, half = {0.5, 0.5};
  EXPECT_NEAR(lp_loss(one, zero), 0.0, 1e-11);
  EXPECT_NEAR(lp_loss(half, half), 2 * std::log(2.0), 1e-15);
  const std::vector<double> p = {1.0 / (std::exp(1.0) + 1.0)}, n = {0.25};
  EXPECT_NEAR(lp_loss(p, n), 1.3133 - std::log(0.75), 1e-4);
  const std::vector<double> bad = {1.2};
  EXPECT_THROW(lp_loss(bad, zero), ContractError);
  numkit::Tape tape;
  EXPECT_NEAR(lp_loss(tape.constant(column({0.5, 0.5})), tape.constant(column({0.5}))).value().item(), 2 * std::log(2.0), 1e-15);
}

TEST(Losses, ClassificationAndRegression) {
  numkit::Tape tape;
  const std::vector<int> labels = {0, 2};
  const Var peaked = tape.constant(Matrix::from_rows({{60.0, 0.0, 0.0}, {0.0, 0.0, 60.0}}));
  EXPECT_LT(nc_loss(peaked, labels).value().item(), 1e-20);
  const Var uniform = tape.constant(Matrix(2, 3));
  EXPECT_NEAR(nc_loss(uniform, labels).value().item(), std::log(3.0), 1e-15);
  const std::vector<int> bad = {0, 3};
  EXPECT_THROW(nc_loss(uniform, bad), ContractError);
  const Var pred = tape.constant(column({1.0, -2.0}));
  EXPECT_EQ(gr_loss(pred, pred).value().item(), 0.0);
  EXPECT_NEAR(gr_loss(pred, tape.constant(column({0.0, 0.0}))).value().item(), 1.5, 1e-15);
  const std::vector<double> a = {1, 2, 3}, b = {1, 0, 6};
  EXPECT_NEAR(mae(a, b), 5.0 / 3.0, 1e-15);
}

TEST(Losses, Gradients) {
  for (int seed = 0; seed < 5; ++seed) {
    Rng rng(10 + seed);
    std::vector<double> pos(6), neg(6), logits(12);
    for (double& x : pos) x = rng.uniform(0.05, 0.95);
    for (double& x : neg) x = rng.uniform(0.05, 0.95);
    for (double& x : logits) x = rng.normal();
    const auto lp = oracle::check_gradients(
        [](numkit::Tape&, const std::vector<Var>& v) { return lp_loss(v[0], v[1]); }, {column(pos), column(neg)},
        {"pos", "neg"});
    EXPECT_LT(lp.worst_error, 1e-5) << lp.worst_input << " seed " << seed;
    const std::vector<int> labels3 = {0, 3, 1};
    const auto nc3 = oracle::check_gradients(
        [&](numkit::Tape&, const std::vector<Var>& v) { return nc_loss(v[0], labels3); }, {Matrix(3, 4, logits)},
        {"logits"});
    EXPECT_LT(nc3.worst_error, 1e-5) << "seed " << seed;
    const auto gr = oracle::check_gradients(
        [&](numkit::Tape& t, const std::vector<Var>& v) { return gr_loss(v[0], t.constant(column(neg))); },
        {column(pos)}, {"pred"});
    EXPECT_LT(gr.worst_error, 1e-5) << "seed " << seed;
  }
}

TEST(Metrics, RocAucExamples) {
  const std::vector<double> s1 = {0.9, 0.1};
  const std::vector<int> y1 = {1, 0};
  EXPECT_EQ(roc_auc(s1, y1), 1.0);
  const std::vector<double> s2 = {0.3, 0.3, 0.3, 0.3};
  const std::vector<int> y2 = {1, 0, 1, 0};
  EXPECT_EQ(roc_auc(s2, y2), 0.5);
  const std::vector<double> s3 = {0.9, 0.8, 0.1};
  const std::vector<int> y3 = {1, 0, 1};
  EXPECT_EQ(roc_auc(s3, y3), 0.5);
  const std::vector<int> one_class = {1, 1};
  EXPECT_THROW(roc_auc(s1, one_class), ContractError);
  const std::vector<int> bad = {1, 2};
  EXPECT_THROW(roc_auc(s1, bad), ContractError);
}

TEST(Metrics, RocAucMatchesPairCountAndMonotoneTransforms) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5 + rng.index(60);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = std::round(rng.normal() * 4) / 4;  // plenty of ties
      y[i] = static_cast<int>(rng.index(2));
    }
    y[0] = 1;
    y[1] = 0;
    const double auc = roc_auc(s, y);
    ASSERT_NEAR(auc, pairwise_auc(s, y), 1e-12);
    std::vector<double> t1(n), t2(n);
    for (std::size_t i = 0; i < n; ++i) {
      t1[i] = std::exp(3 * s[i]) - 7;
      t2[i] = 1 / (1 + std::exp(-s[i]));
    }
    ASSERT_NEAR(roc_auc(t1, y), auc, 1e-12);
    ASSERT_NEAR(roc_auc(t2, y), auc, 1e-12);
  }
}

TEST(Metrics, Classification) {
  const std::vector<int> p = {1, 1, 0, 0}, t = {1, 0, 1, 0};
  const auto m = classification_metrics(p, t);
  EXPECT_EQ(m.accuracy, 0.5);
  EXPECT_EQ(m.f1, 0.5);
  const auto perfect = classification_metrics(t, t);
  EXPECT_EQ(perfect.accuracy, 1.0);
  EXPECT_EQ(perfect.f1, 1.0);
  EXPECT_EQ(perfect.macro_f1, 1.0);
  const std::vector<int> none = {0, 0, 0, 0};
  EXPECT_EQ(classification_metrics(none, t).f1, 0.0);
  // Multiclass macro F1 by hand: class 0 f1 1, class 1 f1 2/3, class 2 f1 0.
  const std::vector<int> mp = {0, 1, 1, 1}, mt = {0, 1, 1, 2};
  EXPECT_NEAR(classification_metrics(mp, mt).macro_f1, (1.0 + 0.8 + 0.0) / 3.0, 1e-15);
  const std::vector<int> empty;
  EXPECT_THROW(classification_metrics(empty, empty), ContractError);
  const std::vector<int> short_truth = {1};
  EXPECT_THROW(classification_metrics(p, short_truth), ContractError);
}

TEST(Trainer, ZeroEpochsReturnsInitialParameters) {
  const auto g = graphcore::tree(2, 4).with_features(graphcore::identity_features(31));
  LinkData data{&g, graphcore::split_edges(g, {}, 0)};
  auto model = lp_model(layers::LayerKind::SHGCN, 31, 3);
  const auto init = model.parameters();
  TrainOptions opt;
  opt.epochs = 0;
  const auto r = train_model(model, data, opt);
  EXPECT_TRUE(r.records.empty());
  for (std::size_t i = 0; i < init.size(); ++i) EXPECT_EQ(r.params[i].value, init[i].value);
}

TEST(Trainer, DeterministicUnderSeed) {
  const auto g = graphcore::tree(3, 3).with_features(graphcore::diffusion_features(graphcore::tree(3, 3), 8, 1.0, 0));
  LinkData data{&g, graphcore::split_edges(g, {}, 4)};
  TrainOptions opt;
  opt.epochs = 15;
  opt.seed = 4;
  for (auto kind : {layers::LayerKind::SHGCN, layers::LayerKind::HGCN_AGG0, layers::LayerKind::GCN}) {
    auto a = lp_model(kind, 8, 9), b = lp_model(kind, 8, 9);
    const auto ra = train_model(a, data, opt), rb = train_model(b, data, opt);
    ASSERT_EQ(ra.records.size(), rb.records.size());
    for (std::size_t e = 0; e < ra.records.size(); ++e) ASSERT_EQ(ra.records[e].train_loss, rb.records[e].train_loss);
    for (std::size_t i = 0; i < ra.params.size(); ++i) ASSERT_EQ(ra.params[i].value, rb.params[i].value);
    for (const auto& rec : ra.records) ASSERT_GT(rec.wall_time_seconds, 0.0);
  }
}

TEST(Trainer, LossDecreasesOverTenEpochs) {
  const auto base = graphcore::tree(3, 4);
  const auto g = base.with_features(graphcore::diffusion_features(base, 16, 1.0, 0));
  TrainOptions opt;
  opt.epochs = 10;
  opt.evaluate = false;
  for (auto kind : {layers::LayerKind::SHGCN, layers::LayerKind::HGCN_AGG0, layers::LayerKind::GCN}) {
    double first = 0, last = 0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      LinkData data{&g, graphcore::split_edges(g, {}, seed)};
      opt.seed = seed;
      auto m = lp_model(kind, 16, numkit::mix_seed(seed, 0x1417));
      const auto r = train_model(m, data, opt);
      first += r.records.front().train_loss;
      last += r.records.back().train_loss;
    }
    EXPECT_LT(last, first) << layers::to_string(kind);
  }
}

TEST(Trainer, NodeClassificationAndRegressionRun) {
  const auto g = graphcore::tree(2, 5);
  NodeData nd{&g, graphcore::split_nodes(g.num_nodes(), {0.6, 0.2, 0.2}, 1), 2};
  layers::ModelConfig cfg;
  layers::Model nc(cfg, layers::Task::NodeClassification, g.num_nodes(), 2, 1);
  TrainOptions opt;
  opt.epochs = 40;
  const auto r = train_model(nc, nd, opt);
  EXPECT_TRUE(r.test_metrics.count("accuracy"));
  EXPECT_TRUE(r.test_metrics.count("f1"));
  EXPECT_GT(r.test_metrics.at("accuracy"), 0.6);

  const auto col = graphcore::graph_collection(30, 2);
  RegressionData rd{&col, graphcore::split_nodes(30, {0.6, 0.2, 0.2}, 2)};
  layers::Model gr(cfg, layers::Task::GraphRegression, col.merged.features().cols(), 0, 2);
  const auto rr = train_model(gr, rd, opt);
  ASSERT_TRUE(rr.test_metrics.count("mae"));
  EXPECT_TRUE(std::isfinite(rr.test_metrics.at("mae")));
  EXPECT_LT(rr.records.back().train_loss, rr.records.front().train_loss);
}

TEST(Trainer, TimingSummary) {
  std::vector<EpochRecord> recs;
  for (std::size_t e = 0; e < 10; ++e) recs.push_back({e, 0.0, 0.0, e < 5 ? 100.0 : 1.0 + (e % 2)});
  const auto t = summarize_timing(recs);
  EXPECT_EQ(t.epochs, 5u);
  EXPECT_NEAR(t.mean, 1.6, 1e-15);
  EXPECT_NEAR(t.stddev, std::sqrt(0.3), 1e-12);
  EXPECT_NEAR(t.std_error, std::sqrt(0.3 / 5), 1e-12);
  recs.resize(3);
  EXPECT_EQ(summarize_timing(recs).epochs, 3u);
}
