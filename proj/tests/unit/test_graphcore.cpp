#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

#include "shgcn/error.hpp"
#include "shgcn/graphcore/adjacency.hpp"
#include "shgcn/graphcore/generators.hpp"
#include "shgcn/graphcore/graph.hpp"
#include "shgcn/graphcore/hyperbolicity.hpp"
#include "shgcn/graphcore/io.hpp"
#include "shgcn/graphcore/split.hpp"
#include "shgcn/numkit/gradcheck.hpp"
#include "shgcn/numkit/ops.hpp"
#include "shgcn/numkit/random.hpp"

using namespace shgcn;
using namespace shgcn::graphcore;
using numkit::Matrix;
using numkit::Rng;

namespace {

// Floyd-Warshall distances and a direct four-point scan over all 4-tuples.
double brute_delta(const Graph& g) {
  const std::size_t n = g.num_nodes();
  const std::size_t inf = n + 1;
  std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  double best = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t e = 0; e < n; ++e) {
          double s[3] = {double(d[a][b] + d[c][e]), double(d[a][c] + d[b][e]), double(d[a][e] + d[b][c])};
          std::sort(s, s + 3);
          best = std::max(best, (s[2] - s[1]) / 2);
        }
  return best;
}

Graph random_tree(std::size_t n, Rng& rng) {
  std::vector<Edge> e;
  for (std::size_t v = 1; v < n; ++v) e.push_back({NodeId(rng.index(v)), NodeId(v)});
  return Graph(n, e);
}

Graph relabel(const Graph& g, const std::vector<NodeId>& perm) {
  std::vector<Edge> e;
  for (const auto& [u, v] : g.edges()) e.push_back({perm[u], perm[v]});
  return Graph(g.num_nodes(), e);
}

std::vector<NodeId> random_permutation(std::size_t n, Rng& rng) {
  std::vector<NodeId> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.index(i)]);
  return p;
}

std::set<Edge> as_set(const std::vector<Edge>& e) { return {e.begin(), e.end()}; }

}  // namespace

TEST(Graph, NormalisesEdges) {
  const std::vector<Edge> e = {{1, 0}, {0, 1}, {2, 2}, {2, 1}};
  const Graph g(3, e);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_TRUE(g.has_edge(2, 1));
  EXPECT_FALSE(g.has_edge(0, 2));
  EXPECT_FALSE(g.has_edge(2, 2));
  EXPECT_EQ(g.degree(1), 2u);
  for (const auto& [u, v] : g.edges()) EXPECT_LT(u, v);
  const std::vector<Edge> bad = {{0, 3}};
  EXPECT_THROW(Graph(3, bad), ContractError);
  EXPECT_THROW(Graph(3, e, Matrix(2, 4)), ShapeError);
  EXPECT_THROW(Graph(3, e, {}, std::vector<int>{0, 1}), ShapeError);
}

TEST(Graph, BfsAndDiameter) {
  const Graph p = path(6);
  const auto d = bfs_distances(p, 0);
  EXPECT_EQ(d[5], 5u);
  EXPECT_EQ(diameter(p), 5u);
  EXPECT_EQ(diameter(cycle(7)), 3u);
  const std::vector<Edge> e = {{0, 1}};
  EXPECT_EQ(bfs_distances(Graph(3, e), 0)[2], SIZE_MAX);
  EXPECT_FALSE(Graph(3, e).connected());
}

TEST(Adjacency, Examples) {
  const std::vector<Edge> one = {{0, 1}};
  EXPECT_EQ(normalized_adjacency(Graph(2, one)).dense(), Matrix::from_rows({{0.5, 0.5}, {0.5, 0.5}}));
  EXPECT_EQ(normalized_adjacency(Graph(3, std::vector<Edge>{})).dense(), Matrix::identity(3));
  const Matrix tri = normalized_adjacency(cycle(3)).dense();
  for (double v : tri.data()) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
}

TEST(Adjacency, RowStochasticAndPattern) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Graph g = erdos(30, 0.15, s);
    const auto a = normalized_adjacency(g);
    const Matrix ones(30, 1, std::vector<double>(30, 1.0));
    const Matrix r = a.multiply(ones);
    for (double v : r.data()) ASSERT_NEAR(v, 1.0, 1e-9);
    EXPECT_EQ(a.nnz(), 2 * g.num_edges() + 30);
    const Matrix dense = a.dense();
    for (NodeId i = 0; i < 30; ++i)
      for (NodeId j = 0; j < 30; ++j) ASSERT_EQ(dense(i, j) != 0.0, i == j || g.has_edge(i, j));
  }
}

TEST(Adjacency, MultiplyMatchesDenseOracle) {
  Rng rng(1);
  const Graph g = erdos(20, 0.2, 4);
  const auto a = normalized_adjacency(g);
  std::vector<double> d(20 * 3);
  for (double& x : d) x = rng.normal();
  const Matrix h(20, 3, d);
  EXPECT_LT(numkit::max_abs_diff(a.multiply(h), numkit::matmul(a.dense(), h)), 1e-12);
  EXPECT_LT(numkit::max_abs_diff(a.multiply_transposed(h), numkit::matmul(a.dense().transpose(), h)), 1e-12);
}

TEST(Adjacency, PropagateGradient) {
  const Graph g = tree(2, 3);
  const auto a = normalized_adjacency(g);
  Rng rng(2);
  std::vector<double> d(g.num_nodes() * 2), w(g.num_nodes() * 2);
  for (double& x : d) x = rng.normal();
  for (double& x : w) x = rng.normal();
  const Matrix h(g.num_nodes(), 2, d), weights(g.num_nodes(), 2, w);
  auto f = [&](numkit::Var x) {
    return numkit::ops::sum(numkit::ops::mul(propagate(a, x), x.tape().constant(weights)));
  };
  numkit::Tape tape;
  const auto hv = tape.parameter(h);
  tape.backward(f(hv));
  const Matrix fd = numkit::finite_diff_grad(
      [&](const Matrix& m) {
        numkit::Tape t;
        return f(t.constant(m)).value().item();
      },
      h);
  EXPECT_LT(numkit::max_relative_error(tape.grad(hv), fd), 1e-6);
}

TEST(Split, RatiosAndDeterminism) {
  const Graph g = erdos(40, 0.2, 3);
  const auto all = split_edges(g, {1.0, 0.0, 0.0}, 5);
  EXPECT_EQ(all.train_pos.size(), g.num_edges());
  EXPECT_TRUE(all.val_pos.empty());
  EXPECT_TRUE(all.test_pos.empty());
  const auto a = split_edges(g, {}, 9), b = split_edges(g, {}, 9);
  EXPECT_EQ(a.train_pos, b.train_pos);
  EXPECT_EQ(a.test_neg, b.test_neg);
  EXPECT_NE(split_edges(g, {}, 10).test_pos, a.test_pos);
  EXPECT_THROW(split_edges(Graph(3, std::vector<Edge>{}), {}, 0), ContractError);
  EXPECT_THROW(split_edges(g, {0.5, 0.2, 0.2}, 0), ContractError);
  EXPECT_THROW(split_edges(g, {1.1, -0.05, -0.05}, 0), ContractError);
}

TEST(Split, PathExample) {
  const Graph p = path(10);
  const auto s = split_edges(p, {0.8, 0.1, 0.1}, 7);
  EXPECT_EQ(s.val_neg.size(), s.val_pos.size());
  EXPECT_EQ(s.test_neg.size(), s.test_pos.size());
  // Exhaustive non-edge check.
  for (const auto& [u, v] : s.val_neg) EXPECT_TRUE(u != v && !p.has_edge(u, v));
  for (const auto& [u, v] : s.test_neg) EXPECT_TRUE(u != v && !p.has_edge(u, v));
  EXPECT_TRUE(s.connectivity_fallback);
  EXPECT_FALSE(s.warning.empty());
}

TEST(Split, PropertiesOverRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = erdos(25, 0.1 + 0.02 * (seed % 10), seed);
    if (g.num_edges() == 0) continue;
    const auto s = split_edges(g, {}, seed);
    const auto tr = as_set(s.train_pos), va = as_set(s.val_pos), te = as_set(s.test_pos);
    ASSERT_EQ(tr.size() + va.size() + te.size(), g.num_edges());
    std::set<Edge> all = tr;
    all.insert(va.begin(), va.end());
    all.insert(te.begin(), te.end());
    ASSERT_EQ(all, as_set(std::vector<Edge>(g.edges().begin(), g.edges().end())));
    ASSERT_EQ(s.val_neg.size(), s.val_pos.size());
    ASSERT_EQ(s.test_neg.size(), s.test_pos.size());
    for (const auto& e : s.val_neg) ASSERT_FALSE(g.has_edge(e.first, e.second));
    for (const auto& e : s.test_neg) ASSERT_FALSE(g.has_edge(e.first, e.second));
    ASSERT_EQ(as_set(s.val_neg).size(), s.val_neg.size());
    for (const auto& e : s.test_neg) ASSERT_EQ(as_set(s.val_neg).count(e), 0u);
    if (!s.connectivity_fallback && g.connected()) {
      ASSERT_TRUE(g.with_edges(s.train_pos).connected()) << "seed " << seed;
    }
  }
}

TEST(Split, Nodes) {
  const auto s = split_nodes(100, {0.6, 0.2, 0.2}, 3);
  EXPECT_EQ(s.val.size(), 20u);
  EXPECT_EQ(s.test.size(), 20u);
  EXPECT_EQ(s.train.size(), 60u);
  std::vector<std::size_t> all = s.train;
  all.insert(all.end(), s.val.begin(), s.val.end());
  all.insert(all.end(), s.test.begin(), s.test.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(all[i], i);
}

TEST(Split, NegativeSampling) {
  const Graph g = tree(3, 3);
  const auto neg = sample_negatives(g, 500, 4);
  EXPECT_EQ(neg.size(), 500u);
  for (const auto& [u, v] : neg) ASSERT_TRUE(u != v && !g.has_edge(u, v));
  // Dense graph: only a handful of non-edges exist.
  const Graph k = erdos(8, 0.95, 1);
  const std::size_t free_pairs = 28 - k.num_edges();
  const auto ne = sample_non_edges(k, free_pairs, 2);
  EXPECT_EQ(as_set(ne).size(), free_pairs);
  EXPECT_THROW(sample_non_edges(k, free_pairs + 1, 2), ContractError);
}

TEST(Hyperbolicity, Examples) {
  const std::vector<Edge> star = {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}};
  EXPECT_EQ(delta_hyperbolicity(Graph(6, star)), 0.0);
  EXPECT_EQ(delta_hyperbolicity(tree(2, 4)), 0.0);
  EXPECT_EQ(delta_hyperbolicity(cycle(4)), 1.0);
  const std::vector<Edge> one = {{0, 1}};
  EXPECT_EQ(delta_hyperbolicity(Graph(2, one)), 0.0);
  EXPECT_THROW(delta_hyperbolicity(Graph(3, one)), ContractError);
  EXPECT_THROW(delta_hyperbolicity(path(50), {.max_nodes = 40}), CapacityError);
}

TEST(Hyperbolicity, MatchesBruteForce) {
  Rng rng(5);
  for (int i = 0; i < 15; ++i) {
    const Graph g = i % 3 == 0 ? cycle(5 + i) : erdos(14, 0.25, i);
    if (!g.connected()) continue;
    ASSERT_EQ(delta_hyperbolicity(g), brute_delta(g)) << i;
    ASSERT_EQ(delta_hyperbolicity(g, {.threads = 3}), brute_delta(g));
    ASSERT_LE(delta_hyperbolicity(g), diameter(g) / 2.0);
  }
}

TEST(Hyperbolicity, TreesAndRelabelings) {
  Rng rng(6);
  for (int i = 0; i < 20; ++i) ASSERT_EQ(delta_hyperbolicity(random_tree(5 + rng.index(40), rng)), 0.0);
  std::uint64_t seed = 0;
  while (!erdos(30, 0.15, seed).connected()) ++seed;
  const Graph g = erdos(30, 0.15, seed);
  const double d = delta_hyperbolicity(g);
  for (int i = 0; i < 20; ++i) ASSERT_EQ(delta_hyperbolicity(relabel(g, random_permutation(30, rng))), d);
}

TEST(Generators, Shapes) {
  const Graph t = tree(3, 5);
  EXPECT_EQ(t.num_nodes(), 364u);
  EXPECT_EQ(t.num_edges(), 363u);
  EXPECT_TRUE(t.connected());
  EXPECT_EQ(cycle(9).num_edges(), 9u);
  EXPECT_EQ(path(9).num_edges(), 8u);
  EXPECT_EQ(synthetic("tree:3,5").num_nodes(), 364u);
  EXPECT_EQ(synthetic("cycle:4").num_edges(), 4u);
  EXPECT_EQ(synthetic("erdos:20,0.3,4").edges().size(), erdos(20, 0.3, 4).num_edges());
  EXPECT_THROW(synthetic("torus:3"), ContractError);
  EXPECT_THROW(synthetic("tree:3"), ContractError);
  const Matrix f = diffusion_features(t, 16, 1.0, 0);
  EXPECT_EQ(f.rows(), 364u);
  EXPECT_EQ(f.cols(), 16u);
  EXPECT_EQ(f, diffusion_features(t, 16, 1.0, 0));
}

TEST(Generators, Collection) {
  const auto col = graph_collection(10, 3);
  EXPECT_EQ(col.num_graphs(), 10u);
  EXPECT_EQ(col.graph_of.size(), col.merged.num_nodes());
  for (const auto& [u, v] : col.merged.edges()) EXPECT_EQ(col.graph_of[u], col.graph_of[v]);
  for (double t : col.targets) EXPECT_GT(t, 1.0);
}

TEST(Io, LoadsFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "shgcn_io_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "e.txt") << "# comment\n0 1\n1,2\n\n2 3\n";
    std::ofstream(dir / "f.csv") << "1,0\n0,1\n1,1\n0.5,-2\n";
    std::ofstream(dir / "l.csv") << "0\n1\n1\n0\n";
    std::ofstream(dir / "bad.txt") << "0 x\n";
  }
  const Graph g = load_graph(dir / "e.txt", dir / "f.csv", dir / "l.csv");
  EXPECT_EQ(g.num_nodes(), 4u);
  EXPECT_EQ(g.num_edges(), 3u);
  EXPECT_EQ(g.features()(3, 1), -2.0);
  EXPECT_EQ((*g.labels())[2], 1);
  EXPECT_EQ(load_graph(dir / "e.txt", std::nullopt, std::nullopt).features(), identity_features(4));
  EXPECT_ANY_THROW(load_edge_list(dir / "bad.txt"));
  EXPECT_ANY_THROW(load_edge_list(dir / "missing.txt"));
  std::filesystem::remove_all(dir);
}
