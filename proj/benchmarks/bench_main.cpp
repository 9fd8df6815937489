#include <benchmark/benchmark.h>

#include "shgcn/graphcore/adjacency.hpp"
#include "shgcn/graphcore/generators.hpp"
#include "shgcn/graphcore/hyperbolicity.hpp"
#include "shgcn/graphcore/split.hpp"
#include "shgcn/hypgeo/poincare.hpp"
#include "shgcn/layers/decoders.hpp"
#include "shgcn/layers/model.hpp"
#include "shgcn/numkit/ops.hpp"
#include "shgcn/numkit/random.hpp"
#include "shgcn/trainkit/losses.hpp"

using namespace shgcn;

namespace {

struct Fixture {
  graphcore::Graph graph;
  graphcore::NormalizedAdjacency adj;
  numkit::Matrix features;
  std::vector<graphcore::Edge> pos, neg;

  explicit Fixture(std::size_t depth) : graph(graphcore::tree(3, depth)) {
    adj = graphcore::normalized_adjacency(graph);
    features = graphcore::diffusion_features(graph, 16, 1.0, 0);
    pos.assign(graph.edges().begin(), graph.edges().end());
    neg = graphcore::sample_negatives(graph, pos.size(), 1);
  }
};

const Fixture& fixture(std::size_t depth) {
  static const Fixture f5(5), f6(6);
  return depth == 5 ? f5 : f6;
}

layers::Model make_model(layers::LayerKind kind) {
  layers::ModelConfig cfg;
  cfg.layer_kind = kind;
  return layers::Model(cfg, layers::Task::LinkPrediction, 16, 0, 3);
}

void encoder_forward(benchmark::State& state, layers::LayerKind kind) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  const auto model = make_model(kind);
  for (auto _ : state) {
    numkit::Tape tape;
    const auto bound = model.bind(tape);
    benchmark::DoNotOptimize(model.encode(bound, tape.constant(f.features), f.adj).value().data().data());
  }
  state.counters["nodes"] = static_cast<double>(f.graph.num_nodes());
}

// One training step's worth of tape work: encode, decode, loss, backward.
void encoder_backward(benchmark::State& state, layers::LayerKind kind) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  const auto model = make_model(kind);
  for (auto _ : state) {
    numkit::Tape tape;
    const auto bound = model.bind(tape);
    const auto z = model.encode(bound, tape.constant(f.features), f.adj);
    const auto loss = trainkit::lp_loss(layers::fermi_dirac(z, f.pos, 2.0, 1.0), layers::fermi_dirac(z, f.neg, 2.0, 1.0));
    tape.backward(loss);
    benchmark::DoNotOptimize(tape.grad(bound[0]).data().data());
  }
}

void BM_ForwardShgcn(benchmark::State& s) { encoder_forward(s, layers::LayerKind::SHGCN); }
void BM_ForwardAgg0(benchmark::State& s) { encoder_forward(s, layers::LayerKind::HGCN_AGG0); }
void BM_ForwardGcn(benchmark::State& s) { encoder_forward(s, layers::LayerKind::GCN); }
void BM_BackwardShgcn(benchmark::State& s) { encoder_backward(s, layers::LayerKind::SHGCN); }
void BM_BackwardAgg0(benchmark::State& s) { encoder_backward(s, layers::LayerKind::HGCN_AGG0); }
void BM_BackwardGcn(benchmark::State& s) { encoder_backward(s, layers::LayerKind::GCN); }

BENCHMARK(BM_ForwardShgcn)->Arg(5)->Arg(6)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ForwardAgg0)->Arg(5)->Arg(6)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ForwardGcn)->Arg(5)->Arg(6)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BackwardShgcn)->Arg(5)->Arg(6)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BackwardAgg0)->Arg(5)->Arg(6)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BackwardGcn)->Arg(5)->Arg(6)->Unit(benchmark::kMicrosecond);

void BM_ExpLogRoundTrip(benchmark::State& state) {
  numkit::Rng rng(1);
  hypgeo::TangentVector v{std::vector<double>(16), 1.0};
  for (double& x : v.coords) x = 0.2 * rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(hypgeo::log0(hypgeo::exp0(v)).coords.data());
}
BENCHMARK(BM_ExpLogRoundTrip);

void BM_MobiusAdd(benchmark::State& state) {
  const hypgeo::PoincarePoint x{std::vector<double>(16, 0.05), 1.0}, y{std::vector<double>(16, -0.03), 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(hypgeo::mobius_add(x, y).coords.data());
}
BENCHMARK(BM_MobiusAdd);

void BM_DeltaHyperbolicity(benchmark::State& state) {
  const auto g = graphcore::erdos(static_cast<std::size_t>(state.range(0)), 0.08, 5);
  graphcore::HyperbolicityOptions opt;
  opt.threads = 1;
  for (auto _ : state) {
    if (!g.connected()) {
      state.SkipWithError("graph is disconnected");
      break;
    }
    benchmark::DoNotOptimize(graphcore::delta_hyperbolicity(g, opt));
  }
}
BENCHMARK(BM_DeltaHyperbolicity)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
